#pragma once

// Volumes of ideal hyperbolic simplices in dimensions 2 and 3.

#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"
#include "hyperbolic_boundary.hpp"
#include "projective.hpp"

namespace boundcoh {

/// Lobachevsky function Lambda(t) = 1/2 sum_{n>=1} sin(2 n t) / n^2.
///
/// Two evaluation routes: the defining series truncated at N terms, and a
/// rapidly convergent expansion of the Clausen function,
///   Cl2(t) = t - t log|t| + sum_k zeta(2k) / (k (2k+1)) t^{2k+1} / (2 pi)^{2k},
/// valid for |t| < 2 pi, with Lambda(t) = Cl2(2t) / 2 after reducing t mod pi.
class LobachevskyEvaluator {
public:
    enum class Method { clausen_expansion, series };

    static LobachevskyEvaluator expansion() { return LobachevskyEvaluator(Method::clausen_expansion, 0); }

    /// Partial sum of the defining series with `truncation` terms.
    static LobachevskyEvaluator series(std::size_t truncation)
    {
        if (truncation == 0) throw InvalidArgument("series truncation must be positive");
        return LobachevskyEvaluator(Method::series, truncation);
    }

    Method method() const { return method_; }
    std::size_t truncation() const { return truncation_; }

    /// Guaranteed bound on the absolute evaluation error (up to rounding
    /// for the series route).
    double tail_bound() const
    {
        if (method_ == Method::series) return 0.5 / static_cast<double>(truncation_);
        return 1e-14;
    }

    double operator()(double theta) const
    {
        if (!std::isfinite(theta)) throw InvalidArgument("Lobachevsky argument must be finite");
        // Lambda is odd and pi-periodic.
        const double t = theta - kPi * std::nearbyint(theta / kPi);
        if (method_ == Method::series) {
            double sum = 0.0;
            for (std::size_t n = truncation_; n >= 1; --n) {
                const double nn = static_cast<double>(n);
                sum += std::sin(2.0 * nn * t) / (nn * nn);
            }
            return 0.5 * sum;
        }
        return 0.5 * clausen2(2.0 * t);
    }

private:
    LobachevskyEvaluator(Method m, std::size_t n) : method_(m), truncation_(n) {}

    static constexpr int kTerms = 30;

    static const std::array<double, kTerms>& coefficients()
    {
        static const std::array<double, kTerms> c = [] {
            std::array<double, kTerms> out{};
            const double two_pi_sq = 4.0 * kPi * kPi;
            double power = 1.0;
            for (int k = 1; k <= kTerms; ++k) {
                power *= two_pi_sq;
                double zeta = 0.0;
                if (k == 1) zeta = kPi * kPi / 6.0;
                else if (k == 2) zeta = std::pow(kPi, 4) / 90.0;
                else if (k == 3) zeta = std::pow(kPi, 6) / 945.0;
                else
                    for (int m = 200; m >= 1; --m) zeta += std::pow(static_cast<double>(m), -2.0 * k);
                out[k - 1] = zeta / (k * (2.0 * k + 1.0) * power);
            }
            return out;
        }();
        return c;
    }

    // Valid on [-pi, pi].
    static double clausen2(double t)
    {
        if (t == 0.0) return 0.0;
        const auto& c = coefficients();
        const double t2 = t * t;
        double poly = 0.0;
        for (int k = kTerms - 1; k >= 0; --k) poly = poly * t2 + c[k];
        return t - t * std::log(std::abs(t)) + t * t2 * poly;
    }

    Method method_;
    std::size_t truncation_;
};

inline double lobachevsky(double theta)
{
    static const LobachevskyEvaluator eval = LobachevskyEvaluator::expansion();
    return eval(theta);
}

/// 3 Lambda(pi/3): volume of the regular ideal tetrahedron.
inline double regular_ideal_tetrahedron_volume()
{
    return 3.0 * lobachevsky(kPi / 3.0);
}

/// Signed area of the ideal triangle (x, y, z) in H^2: +pi when the triple
/// is counterclockwise on S^1, -pi when clockwise.
inline double vol2(const RealBoundaryPoint& x, const RealBoundaryPoint& y, const RealBoundaryPoint& z,
                   double tol = kBoundaryTol)
{
    if (x.dimension() != 2 || y.dimension() != 2 || z.dimension() != 2)
        throw InvalidArgument("vol2 is defined on dH^2 = S^1");
    if (!pairwise_distinct(std::vector{x, y, z}, tol))
        throw DegenerateTuple("vol2 needs pairwise distinct points");
    const Eigen::VectorXd u = y.direction() - x.direction();
    const Eigen::VectorXd v = z.direction() - x.direction();
    const double orient = u(0) * v(1) - u(1) * v(0);
    return orient > 0.0 ? kPi : -kPi;
}

/// Signed volume of the ideal tetrahedron (inf, 0, 1, z): the sum of
/// Lambda over the three dihedral angles arg z, arg 1/(1-z), arg(1-1/z),
/// each taken in (-pi, pi]. Positive iff Im z > 0; zero for real z.
inline double ideal_tetrahedron_volume(cplx z, const LobachevskyEvaluator& lambda = LobachevskyEvaluator::expansion())
{
    if (std::abs(z) == 0.0 || std::abs(z - 1.0) == 0.0 || !std::isfinite(std::abs(z)))
        throw DegenerateTuple("cross ratio of a degenerate tetrahedron");
    if (z.imag() == 0.0) return 0.0;
    // All three angles come from one rounding of 1 - z so that they still
    // sum to pi mod 2 pi near the cusp z = 1.
    const cplx w = 1.0 - z;
    return lambda(std::arg(z)) + lambda(-std::arg(w)) + lambda(std::arg(-w / z));
}

/// Signed volume of the ideal tetrahedron with vertices x0..x3 in
/// dH^3 = P^1(C), as a function of the cross ratio [x0, x1, x2, x3].
inline double vol3(const ProjectivePoint& x0, const ProjectivePoint& x1, const ProjectivePoint& x2,
                   const ProjectivePoint& x3)
{
    const ExtendedScalar z = cross_ratio(x0, x1, x2, x3);
    if (z.infinite) throw DegenerateTuple("vol3 needs pairwise distinct points");
    return ideal_tetrahedron_volume(z.value);
}

/// vol3 on S^2 via the stereographic chart.
inline double vol3(const RealBoundaryPoint& x0, const RealBoundaryPoint& x1, const RealBoundaryPoint& x2,
                   const RealBoundaryPoint& x3)
{
    return vol3(to_projective(x0), to_projective(x1), to_projective(x2), to_projective(x3));
}

} // namespace boundcoh
