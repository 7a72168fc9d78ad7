#pragma once

// Ideal boundaries of real and complex hyperbolic space.
//
// Conventions: the Lorentz form on R^{n+1} and the Hermitian form on
// C^{n+1} are both diag(1, ..., 1, -1). A point u of the unit sphere
// S^{n-1} = dH^n_R lifts to the null vector (u, 1); a point of H^n is a
// vector with q = -1 and positive last coordinate.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "projective.hpp"
#include "random.hpp"

namespace boundcoh {

inline constexpr double kPi = 3.14159265358979323846;

/// Default distinctness threshold for boundary points (chordal metric).
inline constexpr double kBoundaryTol = 1e-9;

/// Relative singular-value cutoff used to detect the rank of lift spans.
inline constexpr double kRankTol = 1e-10;

inline double lorentz(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const Eigen::Index n = x.size() - 1;
    return x.head(n).dot(y.head(n)) - x(n) * y(n);
}

/// Hermitian form <z, w> = sum z_i conj(w_i) - z_n conj(w_n).
inline cplx hermitian(const Eigen::VectorXcd& z, const Eigen::VectorXcd& w)
{
    const Eigen::Index n = z.size() - 1;
    // Eigen's dot conjugates its first argument.
    return w.head(n).dot(z.head(n)) - z(n) * std::conj(w(n));
}

class RealBoundaryPoint {
public:
    /// Point of S^{n-1} = dH^n_R; the direction is rescaled to unit length.
    explicit RealBoundaryPoint(Eigen::VectorXd direction) : dir_(std::move(direction))
    {
        const double norm = dir_.norm();
        if (dir_.size() < 2 || !(norm > 0.0) || !std::isfinite(norm))
            throw InvalidArgument("boundary direction must be a nonzero vector of dimension >= 2");
        dir_ /= norm;
    }

    /// Point of dH^2 = S^1 at angle theta.
    static RealBoundaryPoint on_circle(double theta)
    {
        return RealBoundaryPoint(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    }

    static RealBoundaryPoint random(Eigen::Index dim, Rng& rng)
    {
        Eigen::VectorXd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = standard_normal(rng);
        return RealBoundaryPoint(v);
    }

    const Eigen::VectorXd& direction() const { return dir_; }

    /// Hyperbolic dimension n (the sphere is S^{n-1}).
    Eigen::Index dimension() const { return dir_.size(); }

    Eigen::VectorXd lift() const
    {
        Eigen::VectorXd v(dir_.size() + 1);
        v << dir_, 1.0;
        return v;
    }

    /// The boundary point of a future-directed null vector.
    static RealBoundaryPoint from_null(const Eigen::VectorXd& v)
    {
        const Eigen::Index n = v.size() - 1;
        if (!(v(n) > 0.0))
            throw InvalidArgument("null vector must be future directed");
        return RealBoundaryPoint(v.head(n) / v(n));
    }

private:
    Eigen::VectorXd dir_;
};

class ComplexBoundaryPoint {
public:
    /// Null line spanned by `lift`. Normalized to unit Euclidean norm with
    /// positive real last coordinate.
    explicit ComplexBoundaryPoint(Eigen::VectorXcd lift) : lift_(std::move(lift))
    {
        const Eigen::Index n = lift_.size() - 1;
        if (n < 1) throw InvalidArgument("complex boundary lift needs dimension >= 2");
        const cplx last = lift_(n);
        if (!(std::abs(last) > 0.0))
            throw InvalidArgument("complex boundary lift must have nonzero last coordinate");
        lift_ *= std::conj(last) / std::abs(last);
        lift_(n) = std::abs(lift_(n));
        lift_ /= lift_.norm();
        if (std::abs(hermitian(lift_, lift_)) > 1e-10)
            throw InvalidArgument("complex boundary lift is not null");
    }

    /// Point of the unit sphere S^{2n-1} in C^n (ball model boundary).
    static ComplexBoundaryPoint from_ball(const Eigen::VectorXcd& u)
    {
        const double norm = u.norm();
        if (!(norm > 0.0)) throw InvalidArgument("ball boundary point must be nonzero");
        Eigen::VectorXcd v(u.size() + 1);
        v << u / norm, cplx{1.0, 0.0};
        return ComplexBoundaryPoint(v);
    }

    static ComplexBoundaryPoint random(Eigen::Index n, Rng& rng)
    {
        Eigen::VectorXcd u(n);
        for (Eigen::Index i = 0; i < n; ++i) u(i) = cplx{standard_normal(rng), standard_normal(rng)};
        return from_ball(u);
    }

    const Eigen::VectorXcd& lift() const { return lift_; }
    Eigen::Index dimension() const { return lift_.size() - 1; }

    /// Coordinates on the unit sphere of C^n.
    Eigen::VectorXcd ball() const
    {
        const Eigen::Index n = dimension();
        return lift_.head(n) / lift_(n);
    }

private:
    Eigen::VectorXcd lift_;
};

class HyperbolicPoint {
public:
    /// Point of the hyperboloid; `v` is rescaled onto q = -1.
    explicit HyperbolicPoint(Eigen::VectorXd v) : lift_(std::move(v))
    {
        const double q = lorentz(lift_, lift_);
        const Eigen::Index n = lift_.size() - 1;
        if (!(q < 0.0) || !(lift_(n) > 0.0))
            throw InvalidArgument("hyperbolic point needs a future timelike vector");
        lift_ /= std::sqrt(-q);
    }

    static HyperbolicPoint origin(Eigen::Index n)
    {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n + 1);
        v(n) = 1.0;
        return HyperbolicPoint(v);
    }

    const Eigen::VectorXd& lift() const { return lift_; }
    Eigen::Index dimension() const { return lift_.size() - 1; }

private:
    Eigen::VectorXd lift_;
};

inline double hyperbolic_distance(const HyperbolicPoint& x, const HyperbolicPoint& y)
{
    // d = 2 asinh(|x - y| / 2), where |x - y|^2 = q(x - y) >= 0; stable for nearby points.
    const Eigen::VectorXd diff = x.lift() - y.lift();
    return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, lorentz(diff, diff))));
}

using BoundaryPoint = std::variant<RealBoundaryPoint, ComplexBoundaryPoint>;

inline double chordal_distance(const RealBoundaryPoint& x, const RealBoundaryPoint& y)
{
    return (x.direction() - y.direction()).norm();
}

inline double chordal_distance(const ComplexBoundaryPoint& x, const ComplexBoundaryPoint& y)
{
    return (x.ball() - y.ball()).norm();
}

template <typename Point>
bool pairwise_distinct(const std::vector<Point>& pts, double tol)
{
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (!(chordal_distance(pts[i], pts[j]) > tol)) return false;
    return true;
}

/// Rank-one genericity: all pairwise chordal distances exceed tol.
/// Throws MixedModels when the points do not share one boundary.
inline bool is_generic_tuple(const std::vector<BoundaryPoint>& points, double tol = kBoundaryTol)
{
    if (points.empty()) return true;
    const std::size_t model = points.front().index();
    const Eigen::Index dim = std::visit([](const auto& p) { return p.dimension(); }, points.front());
    for (const auto& p : points) {
        if (p.index() != model || std::visit([](const auto& q) { return q.dimension(); }, p) != dim)
            throw MixedModels("genericity needs points of one boundary model and dimension");
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    return chordal_distance(x, std::get<T>(points[j]));
                },
                points[i]);
            if (!(d > tol)) return false;
        }
    return true;
}

/// Cartan angular invariant arg(-<x,y><y,z><z,x>), in [-pi/2, pi/2].
inline double cartan_invariant(const ComplexBoundaryPoint& x, const ComplexBoundaryPoint& y,
                               const ComplexBoundaryPoint& z, double tol = kBoundaryTol)
{
    if (x.dimension() != y.dimension() || y.dimension() != z.dimension())
        throw MixedModels("Cartan invariant needs points of one boundary");
    if (!pairwise_distinct(std::vector{x, y, z}, tol))
        throw DegenerateTuple("Cartan invariant needs pairwise distinct points");
    const cplx product = hermitian(x.lift(), y.lift()) * hermitian(y.lift(), z.lift()) * hermitian(z.lift(), x.lift());
    return std::arg(-product);
}

// ---------------------------------------------------------------------------
// Isometries

/// Element of SO+(n,1), acting on lifts in R^{n+1}.
using LorentzMatrix = Eigen::MatrixXd;

/// Element of U(n,1), acting on lifts in C^{n+1}.
using UnitaryMatrix = Eigen::MatrixXcd;

inline Eigen::MatrixXd random_rotation(Eigen::Index n, Rng& rng)
{
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = standard_normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i)
        if (r(i, i) < 0.0) q.col(i) *= -1.0;
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    return q;
}

/// rotation * boost(rapidity along e_1) * rotation, rapidity in [-max, max].
inline LorentzMatrix random_lorentz(Eigen::Index n, Rng& rng, double max_rapidity = 2.0)
{
    auto embed = [n](const Eigen::MatrixXd& r) {
        LorentzMatrix m = LorentzMatrix::Identity(n + 1, n + 1);
        m.topLeftCorner(n, n) = r;
        return m;
    };
    const double t = uniform(rng, -max_rapidity, max_rapidity);
    LorentzMatrix boost = LorentzMatrix::Identity(n + 1, n + 1);
    boost(0, 0) = boost(n, n) = std::cosh(t);
    boost(0, n) = boost(n, 0) = std::sinh(t);
    return embed(random_rotation(n, rng)) * boost * embed(random_rotation(n, rng));
}

inline Eigen::MatrixXcd random_unitary(Eigen::Index n, Rng& rng)
{
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx{standard_normal(rng), standard_normal(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    return qr.householderQ();
}

inline UnitaryMatrix random_complex_isometry(Eigen::Index n, Rng& rng, double max_rapidity = 2.0)
{
    auto embed = [n](const Eigen::MatrixXcd& u, cplx last) {
        UnitaryMatrix m = UnitaryMatrix::Identity(n + 1, n + 1);
        m.topLeftCorner(n, n) = u;
        m(n, n) = last;
        return m;
    };
    const double t = uniform(rng, -max_rapidity, max_rapidity);
    UnitaryMatrix boost = UnitaryMatrix::Identity(n + 1, n + 1);
    boost(0, 0) = boost(n, n) = std::cosh(t);
    boost(0, n) = boost(n, 0) = std::sinh(t);
    const cplx phase = std::polar(1.0, uniform(rng, -kPi, kPi));
    return embed(random_unitary(n, rng), phase) * boost * embed(random_unitary(n, rng), 1.0);
}

inline RealBoundaryPoint apply(const LorentzMatrix& g, const RealBoundaryPoint& x)
{
    return RealBoundaryPoint::from_null(g * x.lift());
}

inline HyperbolicPoint apply(const LorentzMatrix& g, const HyperbolicPoint& p)
{
    return HyperbolicPoint(g * p.lift());
}

inline ComplexBoundaryPoint apply(const UnitaryMatrix& g, const ComplexBoundaryPoint& x)
{
    return ComplexBoundaryPoint(g * x.lift());
}

// ---------------------------------------------------------------------------
// Barycenter of an ideal triangle

/// Symmetric point of the ideal triangle (x, y, z). The null lifts are
/// rescaled so that all three pairings equal -1; the barycenter is then
/// (X + Y + Z) / sqrt(6), which is the incenter of the triangle inside
/// the hyperbolic plane the triple spans.
inline HyperbolicPoint barycenter_ideal_triangle(const RealBoundaryPoint& x, const RealBoundaryPoint& y,
                                                 const RealBoundaryPoint& z, double tol = kBoundaryTol)
{
    if (x.dimension() != y.dimension() || y.dimension() != z.dimension())
        throw MixedModels("barycenter needs points of one boundary");
    if (!pairwise_distinct(std::vector{x, y, z}, tol))
        throw DegenerateTuple("barycenter needs three pairwise distinct points");
    const Eigen::VectorXd X = x.lift(), Y = y.lift(), Z = z.lift();
    const double xy = -lorentz(X, Y), yz = -lorentz(Y, Z), zx = -lorentz(Z, X);
    // Scales a, b, c with a b xy = b c yz = c a zx = 1.
    const double a = std::sqrt(yz / (xy * zx));
    const double b = std::sqrt(zx / (xy * yz));
    const double c = std::sqrt(xy / (yz * zx));
    return HyperbolicPoint((a * X + b * Y + c * Z) / std::sqrt(6.0));
}

// ---------------------------------------------------------------------------
// Charts

/// Poincare-disk then upper-half-plane coordinates of a point of H^2.
inline cplx to_upper_half_plane(const HyperbolicPoint& p)
{
    if (p.dimension() != 2) throw InvalidArgument("upper half-plane chart is for H^2");
    const Eigen::VectorXd& v = p.lift();
    const cplx w = cplx{v(0), v(1)} / (1.0 + v(2));
    return cplx{0.0, 1.0} * (1.0 + w) / (1.0 - w);
}

/// Boundary point of H^2 at x in R u {inf} of the upper half-plane chart.
inline RealBoundaryPoint boundary_from_upper_half_plane(const ExtendedScalar& x)
{
    if (x.infinite) return RealBoundaryPoint::on_circle(0.0);
    // Inverse Cayley map, x = -cot(theta / 2).
    return RealBoundaryPoint::on_circle(2.0 * std::atan2(-1.0, x.real()));
}

/// Stereographic identification S^2 = dH^3 with P^1(C), north pole -> inf.
inline ProjectivePoint to_projective(const RealBoundaryPoint& x)
{
    if (x.dimension() != 3) throw InvalidArgument("P^1(C) chart is for dH^3 = S^2");
    const Eigen::VectorXd& u = x.direction();
    // (u1 + i u2) / (1 - u3) == (1 + u3) / (u1 - i u2); pick the better-scaled pair.
    const cplx a1{u(0), u(1)};
    if (1.0 - u(2) >= 1.0 + u(2)) return {a1, 1.0 - u(2), Field::complex};
    return {1.0 + u(2), std::conj(a1), Field::complex};
}

inline RealBoundaryPoint from_projective(const ProjectivePoint& p)
{
    const cplx ab = p.a() * std::conj(p.b());
    const double na = std::norm(p.a()), nb = std::norm(p.b());
    return RealBoundaryPoint(Eigen::Vector3d(2.0 * ab.real(), 2.0 * ab.imag(), na - nb) / (na + nb));
}

// ---------------------------------------------------------------------------
// Reduction of four points of dH^n to dH^3

struct H3Restriction {
    /// The four points realized in dH^3 = S^2.
    std::array<RealBoundaryPoint, 4> points;
    /// Columns: Lorentz-orthonormal basis (3 spacelike, then timelike) of
    /// the target copy of R^{3,1} inside R^{n+1}. A spacelike column is
    /// zero when the lifts span only a 3-dimensional subspace.
    Eigen::MatrixXd basis;
    /// Positive factors with lift_out_i = lift_scales_i * (coords of lift_in_i).
    std::array<double, 4> lift_scales;
    /// Dimension of the span of the input lifts (3 or 4).
    int rank;
};

/// Places four pairwise distinct points of dH^n (n >= 4) in a copy of
/// dH^3. Gram matrices of the null lifts are preserved up to positive
/// rescaling of each lift. When the points already lie in the coordinate
/// dH^3 (first three coordinates), the embedding is the identity.
inline H3Restriction restrict_to_h3(const std::array<RealBoundaryPoint, 4>& pts, double tol = kBoundaryTol)
{
    const Eigen::Index n = pts[0].dimension();
    for (const auto& p : pts)
        if (p.dimension() != n) throw MixedModels("restriction needs points of one boundary");
    if (n < 3) throw InvalidArgument("restriction needs dH^n with n >= 3");
    if (!pairwise_distinct(std::vector<RealBoundaryPoint>(pts.begin(), pts.end()), tol))
        throw DegenerateTuple("restriction needs four pairwise distinct points");

    Eigen::MatrixXd lifts(n + 1, 4);
    for (int i = 0; i < 4; ++i) lifts.col(i) = pts[i].lift();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lifts, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > kRankTol * sv(0)) ++rank;
    const Eigen::MatrixXd span = svd.matrixU().leftCols(rank);

    Eigen::VectorXd signs = Eigen::VectorXd::Ones(n + 1);
    signs(n) = -1.0;
    const Eigen::MatrixXd form = span.transpose() * signs.asDiagonal() * span;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(form);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    int negative = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) <= kRankTol * scale)
            throw SignatureError("restricted form is degenerate");
        if (ev(i) < 0.0) ++negative;
    }
    if (negative != 1 || rank < 3 || rank > 4)
        throw SignatureError("restricted form is not Lorentzian");

    // Lorentz-orthogonal projection onto the span.
    const Eigen::MatrixXd proj = span * form.inverse() * span.transpose() * signs.asDiagonal();
    auto lorentz_unit = [](Eigen::VectorXd v) {
        return Eigen::VectorXd(v / std::sqrt(std::abs(lorentz(v, v))));
    };

    Eigen::VectorXd time = proj.col(n);
    if (!(lorentz(time, time) < -1e-6)) time = lifts.rowwise().sum();
    if (time(n) < 0.0) time = -time;
    time = lorentz_unit(time);

    std::vector<Eigen::VectorXd> space;
    for (double threshold : {0.1, 1e-6}) {
        space.clear();
        for (Eigen::Index i = 0; i < n && static_cast<int>(space.size()) < rank - 1; ++i) {
            Eigen::VectorXd v = proj.col(i);
            for (int pass = 0; pass < 2; ++pass) {
                v += lorentz(v, time) * time;
                for (const auto& s : space) v -= lorentz(v, s) * s;
            }
            if (lorentz(v, v) > threshold) space.push_back(lorentz_unit(v));
        }
        if (static_cast<int>(space.size()) == rank - 1) break;
    }
    if (static_cast<int>(space.size()) != rank - 1)
        throw SignatureError("could not complete a Lorentz-orthonormal basis");

    H3Restriction out{pts, Eigen::MatrixXd::Zero(n + 1, 4), {}, rank};
    for (std::size_t j = 0; j < space.size(); ++j) out.basis.col(static_cast<Eigen::Index>(j)) = space[j];
    out.basis.col(3) = time;
    for (int i = 0; i < 4; ++i) {
        const Eigen::VectorXd l = lifts.col(i);
        Eigen::Vector4d c;
        for (int j = 0; j < 3; ++j) c(j) = lorentz(l, out.basis.col(j));
        c(3) = -lorentz(l, time);
        if (!(c(3) > 0.0)) throw SignatureError("lift is not future directed in the target basis");
        out.lift_scales[i] = 1.0 / c(3);
        out.points[i] = RealBoundaryPoint(Eigen::Vector3d(c.head(3) / c(3)));
    }
    return out;
}

} // namespace boundcoh
