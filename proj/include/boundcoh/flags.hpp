#pragma once

// Full flags in R^3: the Furstenberg boundary of SL(3,R).
//
// A flag is a line <e> inside a plane ker(phi). The group acts by
// e -> g e and phi -> phi g^{-1}.

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "random.hpp"

namespace boundcoh {

/// Default transversality threshold on pairings of unit vectors/covectors.
inline constexpr double kFlagTol = 1e-9;

namespace detail {

// Unit length; first entry of largest modulus made positive.
inline Eigen::Vector3d sign_normalized(const Eigen::Vector3d& v)
{
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw InvalidArgument("flag data must be nonzero and finite");
    Eigen::Vector3d u = v / norm;
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < 3; ++i)
        if (std::abs(u(i)) > std::abs(u(pivot)) * (1.0 + 1e-12)) pivot = i;
    if (u(pivot) < 0.0) u = -u;
    return u;
}

} // namespace detail

class Flag3 {
public:
    /// Line <line> inside the plane ker(plane). Throws InvalidArgument
    /// when the line is not contained in the plane.
    Flag3(const Eigen::Vector3d& line, const Eigen::Vector3d& plane)
        : line_(detail::sign_normalized(line)), plane_(detail::sign_normalized(plane))
    {
        if (std::abs(plane_.dot(line_)) > 1e-12)
            throw InvalidArgument("flag line must lie in its plane");
    }

    /// Flag (<v1>, span(v1, v2)).
    static Flag3 from_basis(const Eigen::Vector3d& v1, const Eigen::Vector3d& v2)
    {
        Eigen::Vector3d normal = v1.normalized().cross(v2.normalized());
        if (!(normal.norm() > 1e-12)) throw InvalidArgument("flag basis vectors are parallel");
        // Re-orthogonalize so the containment check is exact to rounding.
        const Eigen::Vector3d line = detail::sign_normalized(v1);
        normal = detail::sign_normalized(normal);
        normal -= normal.dot(line) * line;
        return Flag3(line, normal);
    }

    /// Orthonormalized Gaussian 3-frame (f1, f2, f3) -> (<f1>, span(f1, f2)).
    static Flag3 random(Rng& rng)
    {
        Eigen::Matrix3d a;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a(i, j) = standard_normal(rng);
        Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
        const Eigen::Matrix3d q = qr.householderQ();
        return Flag3(q.col(0), q.col(2));
    }

    const Eigen::Vector3d& line() const { return line_; }
    const Eigen::Vector3d& plane() const { return plane_; }

    /// phi(v)
    double pair(const Eigen::Vector3d& v) const { return plane_.dot(v); }

private:
    Eigen::Vector3d line_;
    Eigen::Vector3d plane_;
};

inline Flag3 apply(const Eigen::Matrix3d& g, const Flag3& f)
{
    // phi g^{-1} as a column vector is g^{-T} phi.
    const Eigen::Vector3d phi = g.transpose().partialPivLu().solve(f.plane());
    Eigen::Vector3d line = g * f.line();
    const Eigen::Vector3d unit_phi = phi.normalized();
    line -= unit_phi.dot(line) * unit_phi;
    return Flag3(line, phi);
}

inline bool approx_equal(const Flag3& f, const Flag3& g, double tol)
{
    return (f.line() - g.line()).norm() <= tol && (f.plane() - g.plane()).norm() <= tol;
}

/// Random element of SL(3,R) with Gaussian entries scaled to unit determinant.
inline Eigen::Matrix3d random_sl3(Rng& rng)
{
    Eigen::Matrix3d g;
    double det = 0.0;
    do {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = standard_normal(rng);
        det = g.determinant();
    } while (std::abs(det) < 1e-3);
    if (det < 0.0) g.col(0) *= -1.0;
    return g / std::cbrt(std::abs(det));
}

/// Transversality: L1 + P2 = R^3 = L2 + P1.
inline bool is_opposite(const Flag3& f1, const Flag3& f2, double tol = kFlagTol)
{
    return std::abs(f1.pair(f2.line())) > tol && std::abs(f2.pair(f1.line())) > tol;
}

/// The six flags at infinity of the maximal flat through an opposite pair.
struct FlatBoundary {
    /// Coordinate flags (<u_s1>, span(u_s1, u_s2)) for the permutations s
    /// of (0, 1, 2), in lexicographic order: index 0 is f1, index 5 is f2.
    std::array<Flag3, 6> flags;
    /// Adapted basis: u1 spans L1, u2 spans P1 ^ P2, u3 spans L2.
    std::array<Eigen::Vector3d, 3> basis;

    bool contains(const Flag3& f, double tol = 1e-9) const
    {
        for (const auto& g : flags)
            if (approx_equal(f, g, tol)) return true;
        return false;
    }
};

inline constexpr std::array<std::array<int, 3>, 6> kWeylOrder{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

inline FlatBoundary flat_boundary(const Flag3& f1, const Flag3& f2, double tol = kFlagTol)
{
    if (!is_opposite(f1, f2, tol)) throw NotOpposite("flat boundary needs an opposite pair");
    const std::array<Eigen::Vector3d, 3> u{
        f1.line(),
        detail::sign_normalized(f1.plane().cross(f2.plane())),
        f2.line(),
    };
    auto make = [&](const std::array<int, 3>& s) { return Flag3::from_basis(u[s[0]], u[s[1]]); };
    return FlatBoundary{
        {make(kWeylOrder[0]), make(kWeylOrder[1]), make(kWeylOrder[2]),
         make(kWeylOrder[3]), make(kWeylOrder[4]), make(kWeylOrder[5])},
        u,
    };
}

/// Generic triple: pairwise opposite, and each flag opposite to all six
/// boundary flags of the flat through the other two.
inline bool is_generic_triple(const Flag3& f1, const Flag3& f2, const Flag3& f3, double tol = kFlagTol)
{
    const std::array<const Flag3*, 3> f{&f1, &f2, &f3};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (!is_opposite(*f[i], *f[j], tol)) return false;
    // The six boundary flags do not depend on the order of the pair.
    for (int k = 0; k < 3; ++k) {
        const FlatBoundary flat = flat_boundary(*f[(k + 1) % 3], *f[(k + 2) % 3], tol);
        for (const auto& b : flat.flags)
            if (!is_opposite(*f[k], b, tol)) return false;
    }
    return true;
}

/// Genericity of a tuple of any length: every triple of distinct entries is generic.
inline bool is_generic_flags(const std::vector<Flag3>& flags, double tol = kFlagTol)
{
    const std::size_t q = flags.size();
    if (q == 2) return is_opposite(flags[0], flags[1], tol);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j)
            for (std::size_t k = j + 1; k < q; ++k)
                if (!is_generic_triple(flags[i], flags[j], flags[k], tol)) return false;
    return true;
}

/// T = phi1(e2) phi2(e3) phi3(e1) / (phi1(e3) phi2(e1) phi3(e2)).
inline double triple_ratio(const Flag3& f1, const Flag3& f2, const Flag3& f3, double tol = kFlagTol)
{
    const double d1 = f1.pair(f3.line()), d2 = f2.pair(f1.line()), d3 = f3.pair(f2.line());
    if (!(std::abs(d1) > tol && std::abs(d2) > tol && std::abs(d3) > tol))
        throw NotGeneric("triple ratio denominator pairing below tolerance");
    const double n1 = f1.pair(f2.line()), n2 = f2.pair(f3.line()), n3 = f3.pair(f1.line());
    return (n1 * n2 * n3) / (d1 * d2 * d3);
}

} // namespace boundcoh
