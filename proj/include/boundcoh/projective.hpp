#pragma once

// Points and Moebius maps of the real and complex projective line.
//
// Points are stored as normalized homogeneous pairs (a, b), representing
// a/b, with (1, 0) the point at infinity. All cross-ratio arithmetic is
// carried out on the pairs, so infinity needs no special casing.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <iterator>
#include <ostream>

#include "errors.hpp"
#include "random.hpp"

namespace boundcoh {

using cplx = std::complex<double>;

enum class Field { real, complex };

/// Minimum chordal distance for two projective points to count as distinct.
inline constexpr double kDistinctTol = 1e-9;

/// Relative determinant threshold below which a 2x2 matrix is singular.
inline constexpr double kSingularTol = 1e-12;

/// A value in the field or infinity.
struct ExtendedScalar {
    cplx value{0.0, 0.0};
    bool infinite = false;

    static ExtendedScalar infinity() { return {cplx{}, true}; }
    static ExtendedScalar finite(cplx v) { return {v, false}; }

    double real() const { return value.real(); }
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedScalar& s)
{
    if (s.infinite) return os << "inf";
    return os << s.value;
}

class ProjectivePoint {
public:
    /// Homogeneous pair (a, b) ~ a/b. Throws InvalidArgument on (0, 0).
    ProjectivePoint(cplx a, cplx b, Field field)
        : a_(a), b_(b), field_(field)
    {
        normalize();
    }

    static ProjectivePoint infinity(Field field = Field::real) { return {1.0, 0.0, field}; }
    static ProjectivePoint real(double x) { return {x, 1.0, Field::real}; }
    static ProjectivePoint complex(cplx z) { return {z, 1.0, Field::complex}; }
    static ProjectivePoint from_extended(const ExtendedScalar& s, Field field)
    {
        return s.infinite ? infinity(field) : ProjectivePoint(s.value, 1.0, field);
    }

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    Field field() const { return field_; }

    bool is_infinity() const { return b_ == cplx{0.0, 0.0}; }

    /// Affine value a/b, or infinity.
    ExtendedScalar value() const
    {
        if (is_infinity()) return ExtendedScalar::infinity();
        return ExtendedScalar::finite(a_ / b_);
    }

private:
    void normalize()
    {
        const double n = std::sqrt(std::norm(a_) + std::norm(b_));
        if (!(n > 0.0) || !std::isfinite(n))
            throw InvalidArgument("projective point needs a nonzero finite homogeneous pair");
        a_ /= n;
        b_ /= n;
        if (field_ == Field::real) {
            a_ = {a_.real(), 0.0};
            b_ = {b_.real(), 0.0};
        }
        // Largest-modulus coordinate (first on ties) made positive real.
        const cplx pivot = std::abs(a_) >= std::abs(b_) ? a_ : b_;
        const cplx phase = std::conj(pivot) / std::abs(pivot);
        a_ *= phase;
        b_ *= phase;
        if (std::abs(b_) < 1e-300) b_ = 0.0;
        if (std::abs(a_) < 1e-300) a_ = 0.0;
    }

    cplx a_;
    cplx b_;
    Field field_;
};

/// 2x2 determinant of the homogeneous pairs; zero iff the points coincide.
inline cplx pairing(const ProjectivePoint& x, const ProjectivePoint& y)
{
    return x.a() * y.b() - y.a() * x.b();
}

/// Chordal (Fubini-Study sine) distance, in [0, 1].
inline double chordal_distance(const ProjectivePoint& x, const ProjectivePoint& y)
{
    return std::abs(pairing(x, y));
}

inline bool pairwise_distinct(std::initializer_list<ProjectivePoint> pts, double tol = kDistinctTol)
{
    for (auto i = pts.begin(); i != pts.end(); ++i)
        for (auto j = std::next(i); j != pts.end(); ++j)
            if (chordal_distance(*i, *j) <= tol) return false;
    return true;
}

/// [x0,x1,x2,x3] = ((x0-x2)/(x0-x3)) * ((x1-x3)/(x1-x2)), so [inf,0,1,x] = x.
inline ExtendedScalar cross_ratio(const ProjectivePoint& x0, const ProjectivePoint& x1,
                                  const ProjectivePoint& x2, const ProjectivePoint& x3)
{
    if (!pairwise_distinct({x0, x1, x2, x3}))
        throw DegenerateTuple("cross ratio needs four pairwise distinct points");
    const cplx num = pairing(x0, x2) * pairing(x1, x3);
    const cplx den = pairing(x0, x3) * pairing(x1, x2);
    if (den == cplx{0.0, 0.0}) return ExtendedScalar::infinity();
    return ExtendedScalar::finite(num / den);
}

class MoebiusMap {
public:
    /// z -> (a z + b) / (c z + d). Throws SingularMatrix when |det| is
    /// negligible relative to the squared entry norm.
    MoebiusMap(cplx a, cplx b, cplx c, cplx d) : m_{a, b, c, d}
    {
        const bool all_real = a.imag() == 0.0 && b.imag() == 0.0 && c.imag() == 0.0 && d.imag() == 0.0;
        field_ = all_real ? Field::real : Field::complex;
        normalize();
    }

    static MoebiusMap identity() { return {1.0, 0.0, 0.0, 1.0}; }

    /// A random map with independent standard Gaussian entries.
    static MoebiusMap random(Rng& rng, Field field)
    {
        auto draw = [&] {
            const double re = standard_normal(rng);
            return field == Field::real ? cplx{re, 0.0} : cplx{re, standard_normal(rng)};
        };
        const cplx a = draw(), b = draw(), c = draw(), d = draw();
        return {a, b, c, d};
    }

    cplx a() const { return m_[0]; }
    cplx b() const { return m_[1]; }
    cplx c() const { return m_[2]; }
    cplx d() const { return m_[3]; }
    Field field() const { return field_; }
    cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    MoebiusMap inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

    /// Matrix product: (this * other)(z) = this(other(z)).
    MoebiusMap operator*(const MoebiusMap& o) const
    {
        return {a() * o.a() + b() * o.c(), a() * o.b() + b() * o.d(),
                c() * o.a() + d() * o.c(), c() * o.b() + d() * o.d()};
    }

private:
    void normalize()
    {
        const double scale2 = std::norm(m_[0]) + std::norm(m_[1]) + std::norm(m_[2]) + std::norm(m_[3]);
        const cplx dt = det();
        if (!(scale2 > 0.0) || !(std::abs(dt) >= kSingularTol * scale2) || !std::isfinite(scale2))
            throw SingularMatrix("Moebius matrix is not invertible");
        // Complex maps are scaled into SL(2,C); real maps into determinant +-1.
        const cplx s = field_ == Field::complex ? std::sqrt(dt) : cplx{std::sqrt(std::abs(dt)), 0.0};
        for (auto& e : m_) e /= s;
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < 4; ++i)
            if (std::abs(m_[i]) > std::abs(m_[pivot]) * (1.0 + 1e-14)) pivot = i;
        // Only a sign is free once the determinant is fixed.
        if (m_[pivot].real() < 0.0)
            for (auto& e : m_) e = -e;
    }

    std::array<cplx, 4> m_;
    Field field_;
};

inline ProjectivePoint apply_moebius(const MoebiusMap& m, const ProjectivePoint& x)
{
    const Field field = (m.field() == Field::real && x.field() == Field::real) ? Field::real : Field::complex;
    return {m.a() * x.a() + m.b() * x.b(), m.c() * x.a() + m.d() * x.b(), field};
}

/// The Moebius map sending (x0, x1, x2) to (inf, 0, 1), namely
/// z -> [x0, x1, x2, z].
inline MoebiusMap normalize_to_standard(const ProjectivePoint& x0, const ProjectivePoint& x1,
                                        const ProjectivePoint& x2)
{
    if (!pairwise_distinct({x0, x1, x2}))
        throw DegenerateTuple("normalization needs three pairwise distinct points");
    const cplx k1 = pairing(x0, x2);
    const cplx k2 = pairing(x1, x2);
    return {-x1.b() * k1, x1.a() * k1, -x0.b() * k2, x0.a() * k2};
}

/// Distance between two maps as points of PGL(2): zero iff they act identically.
inline double map_distance(const MoebiusMap& m, const MoebiusMap& n)
{
    // Euclidean gap between the unit-normalized matrices after aligning
    // the overall phase.
    const std::array<cplx, 4> p{m.a(), m.b(), m.c(), m.d()};
    const std::array<cplx, 4> q{n.a(), n.b(), n.c(), n.d()};
    cplx inner{};
    double pn = 0.0, qn = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        inner += std::conj(q[i]) * p[i];
        pn += std::norm(p[i]);
        qn += std::norm(q[i]);
    }
    const cplx phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : cplx{1.0, 0.0};
    const double sp = 1.0 / std::sqrt(pn), sq = 1.0 / std::sqrt(qn);
    double gap = 0.0;
    for (std::size_t i = 0; i < 4; ++i) gap += std::norm(p[i] * sp - phase * q[i] * sq);
    return std::sqrt(gap);
}

} // namespace boundcoh
