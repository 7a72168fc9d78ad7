#pragma once

// Boundedness certificates for one-variable reductions F(x) = f(inf, 0, 1, x)
// of alternating 4-point cochains whose coboundary is bounded.
//
// The five-term relation bounds F(x) - F(y) + F(y/x) - F((1-y)/(1-x))
// + F(x(1-y)/(y(1-x))). Setting y = x^2 gives
//     |F(x) - F(x^2)/2| <= C    on the target set near 1,
// and iterating the squaring until x leaves the target set yields
//     |F(x)| <= M_base + 2 C,   C = B_defect + 2 M_near2,
// where M_base bounds |F| on the set the iteration exits into, M_near2
// bounds |F| near 2 (where 1 + x and (1 + x)/x live) and B_defect bounds
// the doubling defect on the target set.
//
// All sup norms are estimated on grids unless the caller supplies an
// analytic bound; each input records which.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cochain.hpp"
#include "errors.hpp"
#include "projective.hpp"
#include "random.hpp"

namespace boundcoh {

/// Closeness to the excluded values 0, 1 (and between arguments) below
/// which defect arguments count as degenerate.
inline constexpr double kArgumentTol = 1e-14;

/// F : K \ {0, 1} -> R for K = R or C.
struct ScalarFunction {
    Field field = Field::real;
    std::function<double(cplx)> eval;
    Alternation alternation = Alternation::unknown;
    std::string name;

    double operator()(cplx z) const
    {
        const double v = eval(z);
        if (!std::isfinite(v)) throw EvaluationError("F(" + std::to_string(z.real()) + ") is not finite");
        return v;
    }
};

namespace detail {

inline bool near_value(cplx z, double v)
{
    return std::abs(z - v) <= kArgumentTol * std::max(1.0, std::abs(z));
}

inline void require_in_domain(cplx z, const char* what)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || near_value(z, 0.0) || near_value(z, 1.0))
        throw DegenerateArguments(std::string(what) + " leaves the punctured domain");
}

} // namespace detail

/// F(x) - F(y) + F(y/x) - F((1-y)/(1-x)) + F(x(1-y)/(y(1-x))), which is
/// df(inf, 0, 1, x, y) when F(x) = f(inf, 0, 1, x).
inline double five_term_defect(const ScalarFunction& F, cplx x, cplx y)
{
    detail::require_in_domain(x, "x");
    detail::require_in_domain(y, "y");
    if (std::abs(x - y) <= kArgumentTol * std::max(1.0, std::abs(x)))
        throw DegenerateArguments("x and y coincide");
    const cplx a = y / x;
    const cplx b = (1.0 - y) / (1.0 - x);
    const cplx c = x * (1.0 - y) / (y * (1.0 - x));
    detail::require_in_domain(a, "y/x");
    detail::require_in_domain(b, "(1-y)/(1-x)");
    detail::require_in_domain(c, "x(1-y)/(y(1-x))");
    return F(x) - F(y) + F(a) - F(b) + F(c);
}

/// 2F(x) - F(x^2) - F(1+x) + F((1+x)/x): the five-term defect at y = x^2.
inline double doubling_defect(const ScalarFunction& F, cplx x)
{
    detail::require_in_domain(x, "x");
    const cplx x2 = x * x;
    const cplx p = 1.0 + x;
    const cplx q = (1.0 + x) / x;
    detail::require_in_domain(x2, "x^2");
    detail::require_in_domain(p, "1+x");
    detail::require_in_domain(q, "(1+x)/x");
    return 2.0 * F(x) - F(x2) - F(p) + F(q);
}

// ---------------------------------------------------------------------------
// Regions

enum class RegionKind { real_interval, complex_sector, annulus };

inline const char* to_string(RegionKind k)
{
    switch (k) {
        case RegionKind::real_interval: return "real_interval";
        case RegionKind::complex_sector: return "complex_sector";
        case RegionKind::annulus: return "annulus";
    }
    return "real_interval";
}

/// A point in polar form; the certifier iterates squaring on (r, theta)
/// so that doubling of the argument is exact.
struct Polar {
    double modulus;
    double argument;

    cplx value() const { return std::polar(modulus, argument); }
};

struct RegionSpec {
    RegionKind kind = RegionKind::real_interval;
    double delta = 0.125;

    static RegionSpec real_interval(double delta) { return make(RegionKind::real_interval, delta, 1.0); }
    static RegionSpec complex_sector(double delta) { return make(RegionKind::complex_sector, delta, 0.25); }

    /// Real: [1 - delta, 1). Complex: U = {z != 1 : 1-delta < |z| <= 1, |arg z| < delta}.
    bool in_target(const Polar& z) const
    {
        if (kind == RegionKind::real_interval)
            return z.argument == 0.0 && z.modulus >= 1.0 - delta && z.modulus < 1.0;
        if (z.modulus == 1.0 && z.argument == 0.0) return false;
        return z.modulus > 1.0 - delta && z.modulus <= 1.0 && std::abs(z.argument) < delta;
    }

    /// Real: [(1-delta)^2, 1-delta]. Complex: the closure of
    /// {(1-delta)^2 < |w| <= 1, |arg w| < 2 delta} minus U.
    bool in_base(const Polar& w) const
    {
        const double lo = (1.0 - delta) * (1.0 - delta);
        if (kind == RegionKind::real_interval)
            return w.argument == 0.0 && w.modulus >= lo && w.modulus <= 1.0 - delta;
        if (w.modulus < lo || w.modulus > 1.0 || std::abs(w.argument) > 2.0 * delta) return false;
        return w.modulus <= 1.0 - delta || std::abs(w.argument) >= delta;
    }

    std::string target_description() const
    {
        if (kind == RegionKind::real_interval) return "[1-delta, 1)";
        return "{z != 1 : 1-delta < |z| <= 1, -delta < arg z < delta}";
    }

    std::string base_description() const
    {
        if (kind == RegionKind::real_interval) return "[(1-delta)^2, 1-delta]";
        return "closure({(1-delta)^2 < |w| <= 1, -2 delta < arg w < 2 delta}) minus U";
    }

    /// Radius of the neighborhood of 2 containing 1 + z and (1 + z)/z for
    /// every z in the target set.
    double near2_radius() const
    {
        const double r = kind == RegionKind::real_interval
                             ? delta
                             : std::abs(1.0 - std::polar(1.0 - delta, delta));
        return r / (1.0 - delta);
    }

private:
    static RegionSpec make(RegionKind kind, double delta, double max_delta)
    {
        if (!(delta > 0.0 && delta < max_delta))
            throw InvalidArgument("delta out of range for this region");
        return RegionSpec{kind, delta};
    }
};

/// Hard cap on squarings inside the target set.
inline constexpr int kMaxSquarings = 4096;

/// Number of squarings z -> z^2 needed to leave the target set (0 when z
/// is not in it). The exit point always lies in the base set.
inline int doubling_exit_count(const Polar& z, const RegionSpec& region, int cap = kMaxSquarings)
{
    Polar w = z;
    int m = 0;
    while (region.in_target(w)) {
        if (++m > cap) throw IterationOverflow("squaring did not leave the target set");
        w = Polar{w.modulus * w.modulus, 2.0 * w.argument};
    }
    return m;
}

// ---------------------------------------------------------------------------
// Certificates

enum class Provenance { empirical, analytic };

inline const char* to_string(Provenance p) { return p == Provenance::empirical ? "empirical" : "analytic"; }

struct CertificateInputs {
    double m_base = 0.0;
    double m_near2 = 0.0;
    double b_defect = 0.0;
    Provenance m_base_provenance = Provenance::empirical;
    Provenance m_near2_provenance = Provenance::empirical;
    Provenance b_defect_provenance = Provenance::empirical;
};

/// Bound on one part of the punctured line.
struct CertificatePiece {
    std::string label;
    std::string set;
    double bound = 0.0;
    double empirical_sup = 0.0;
};

struct BoundCertificate {
    RegionSpec region;
    double certified_bound = 0.0;
    /// max |F| over the grid points of the certified region.
    double empirical_sup = 0.0;
    CertificateInputs inputs;
    /// Per-step increment C = B_defect + 2 M_near2.
    double step_constant = 0.0;
    int k_max = 0;
    std::size_t grid_points = 0;
    double near2_radius = 0.0;
    double blowup_threshold = 0.0;
    /// Set by extend_by_symmetry; empty for a certificate near 1.
    std::vector<CertificatePiece> pieces;

    static double step_constant_from(double b_defect, double m_near2) { return b_defect + 2.0 * m_near2; }

    static double bound_from(double m_base, double m_near2, double b_defect)
    {
        return m_base + 2.0 * step_constant_from(b_defect, m_near2);
    }
};

struct GridConfig {
    /// Grid points per region.
    std::size_t points = 10000;
    /// Doubling defects above this refuse the certificate.
    double blowup_threshold = 1e6;
    /// Smallest distance to 1 sampled in the target set.
    double min_gap = 1e-12;
    /// Caller-supplied analytic bounds replace the grid estimates.
    std::optional<double> m_base;
    std::optional<double> m_near2;
    std::optional<double> b_defect;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// Target grid [1 - delta, 1): equal point counts in each dyadic shell
// [(1-delta)^{2^-k}, (1-delta)^{2^-(k+1)}) with gap to 1 above min_gap.
inline std::vector<double> real_target_grid(double delta, const GridConfig& cfg)
{
    const double log_base = std::log1p(-delta);
    std::vector<double> edges{1.0 - delta};
    for (int k = 1; k < 200; ++k) {
        const double gap = -std::expm1(log_base / std::ldexp(1.0, k));
        if (gap < cfg.min_gap) break;
        edges.push_back(1.0 - gap);
    }
    edges.push_back(1.0 - cfg.min_gap);
    const std::size_t shells = edges.size() - 1;
    const std::size_t per = std::max<std::size_t>(2, cfg.points / shells);
    std::vector<double> grid;
    grid.reserve(shells * per + 1);
    for (std::size_t s = 0; s < shells; ++s)
        for (std::size_t i = 0; i < per; ++i)
            grid.push_back(edges[s] + (edges[s + 1] - edges[s]) * static_cast<double>(i) / static_cast<double>(per));
    grid.push_back(edges.back());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// Values in [0, hi): uniform plus geometric toward 0, and 0 itself.
inline std::vector<double> half_axis(double hi, std::size_t n, double min_gap)
{
    const std::size_t half = std::max<std::size_t>(2, n / 2);
    std::vector<double> v{0.0};
    for (std::size_t i = 1; i < half; ++i) v.push_back(hi * static_cast<double>(i) / static_cast<double>(half));
    const double ratio = std::log(min_gap / hi) / static_cast<double>(half);
    for (std::size_t j = 1; j <= half; ++j) v.push_back(hi * std::exp(ratio * static_cast<double>(j)));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::vector<Polar> complex_target_grid(const RegionSpec& region, const GridConfig& cfg)
{
    const std::size_t axis = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.points))));
    const std::vector<double> gaps = half_axis(region.delta, axis, cfg.min_gap);
    const std::vector<double> half_angles = half_axis(region.delta, (axis + 1) / 2, cfg.min_gap);
    std::vector<double> angles;
    for (double a : half_angles) {
        angles.push_back(a);
        if (a != 0.0) angles.push_back(-a);
    }
    std::sort(angles.begin(), angles.end());
    std::vector<Polar> grid;
    for (double g : gaps)
        for (double a : angles) {
            const Polar z{1.0 - g, a};
            if (region.in_target(z)) grid.push_back(z);
        }
    return grid;
}

inline std::vector<Polar> complex_base_grid(const RegionSpec& region, const GridConfig& cfg)
{
    const std::size_t axis = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.points)))) | 1u;
    const double lo = (1.0 - region.delta) * (1.0 - region.delta);
    std::vector<Polar> grid;
    for (double r : linspace(lo, 1.0, axis))
        for (double a : linspace(-2.0 * region.delta, 2.0 * region.delta, axis)) {
            const Polar w{r, a};
            if (region.in_base(w)) grid.push_back(w);
        }
    return grid;
}

// Closed disc of the given radius around 2.
inline std::vector<cplx> disc_grid(double radius, std::size_t points)
{
    const std::size_t axis = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(points))));
    std::vector<cplx> grid{cplx{2.0, 0.0}};
    for (double r : linspace(radius / static_cast<double>(axis), radius, axis))
        for (std::size_t j = 0; j < axis; ++j)
            grid.push_back(2.0 + std::polar(r, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(axis)));
    return grid;
}

// max |g(p)| over the points, evaluated in parallel and reduced in order.
template <typename P, typename G>
double sup_abs(const std::vector<P>& pts, G g)
{
    std::vector<double> v(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { v[i] = std::abs(g(pts[i])); });
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

struct TargetData {
    std::vector<Polar> points;
    std::vector<Polar> base;
    std::vector<cplx> near2;
};

inline BoundCertificate certify(const ScalarFunction& F, const RegionSpec& region, const GridConfig& cfg,
                                const TargetData& grids, int cap)
{
    BoundCertificate cert;
    cert.region = region;
    cert.grid_points = grids.points.size();
    cert.near2_radius = region.near2_radius();
    cert.blowup_threshold = cfg.blowup_threshold;

    auto& in = cert.inputs;
    if (cfg.b_defect) {
        in.b_defect = *cfg.b_defect;
        in.b_defect_provenance = Provenance::analytic;
    } else {
        in.b_defect = sup_abs(grids.points, [&](const Polar& z) { return doubling_defect(F, z.value()); });
    }
    if (!(in.b_defect <= cfg.blowup_threshold))
        throw UnboundedDefect("doubling defect " + std::to_string(in.b_defect) + " exceeds the blowup threshold " +
                              std::to_string(cfg.blowup_threshold));
    if (cfg.m_base) {
        in.m_base = *cfg.m_base;
        in.m_base_provenance = Provenance::analytic;
    } else {
        in.m_base = sup_abs(grids.base, [&](const Polar& w) { return F(w.value()); });
    }
    if (cfg.m_near2) {
        in.m_near2 = *cfg.m_near2;
        in.m_near2_provenance = Provenance::analytic;
    } else {
        in.m_near2 = sup_abs(grids.near2, [&](cplx w) { return F(w); });
    }
    cert.step_constant = BoundCertificate::step_constant_from(in.b_defect, in.m_near2);
    cert.certified_bound = BoundCertificate::bound_from(in.m_base, in.m_near2, in.b_defect);
    cert.empirical_sup = sup_abs(grids.points, [&](const Polar& z) { return F(z.value()); });
    for (const Polar& z : grids.points) cert.k_max = std::max(cert.k_max, doubling_exit_count(z, region, cap));
    return cert;
}

} // namespace detail

/// Grid points used by certify_interval for the target [1 - delta, 1).
inline std::vector<double> interval_target_grid(double delta, const GridConfig& cfg = {})
{
    return detail::real_target_grid(delta, cfg);
}

/// Grid points used by certify_complex_region for the target U.
inline std::vector<Polar> complex_target_grid(const RegionSpec& region, const GridConfig& cfg = {})
{
    return detail::complex_target_grid(region, cfg);
}

/// Certificate for |F| on [1 - delta, 1).
inline BoundCertificate certify_interval(const ScalarFunction& F, double delta, const GridConfig& cfg = {})
{
    const RegionSpec region = RegionSpec::real_interval(delta);
    detail::TargetData grids;
    for (double x : detail::real_target_grid(delta, cfg)) grids.points.push_back({x, 0.0});
    for (double x : detail::linspace((1.0 - delta) * (1.0 - delta), 1.0 - delta, cfg.points))
        grids.base.push_back({x, 0.0});
    for (double x : detail::linspace(2.0 - delta, 2.0 + region.near2_radius(), cfg.points))
        grids.near2.emplace_back(x, 0.0);
    return detail::certify(F, region, cfg, grids, kMaxSquarings);
}

/// Squaring cap for a complex grid: enough doublings to push the smallest
/// sampled nonzero argument past delta, plus enough to push the modulus
/// closest to 1 below 1 - delta.
inline int complex_iteration_cap(const RegionSpec& region, const std::vector<Polar>& grid)
{
    double min_arg = region.delta, min_gap = region.delta;
    for (const Polar& z : grid) {
        if (z.argument != 0.0) min_arg = std::min(min_arg, std::abs(z.argument));
        if (z.modulus < 1.0) min_gap = std::min(min_gap, 1.0 - z.modulus);
    }
    const int arg_steps = static_cast<int>(std::ceil(std::log2(2.0 * region.delta / min_arg)));
    const int mod_steps =
        static_cast<int>(std::ceil(std::log2(std::log1p(-region.delta) / std::log1p(-min_gap))));
    return std::max(arg_steps, 0) + std::max(mod_steps, 0) + 1;
}

/// Certificate for |F| on the sector U near 1.
inline BoundCertificate certify_complex_region(const ScalarFunction& F, double delta, const GridConfig& cfg = {})
{
    const RegionSpec region = RegionSpec::complex_sector(delta);
    detail::TargetData grids;
    grids.points = detail::complex_target_grid(region, cfg);
    grids.base = detail::complex_base_grid(region, cfg);
    grids.near2 = detail::disc_grid(region.near2_radius(), cfg.points);
    return detail::certify(F, region, cfg, grids, complex_iteration_cap(region, grids.points));
}

/// Extends a certificate on [1 - delta, 1) to the whole punctured line
/// using F(x) = -F(1/x) and F(x) = -F(1 - x), valid when F comes from an
/// alternating cochain. The six neighborhoods of 0, 1 and inf inherit the
/// near-1 bound; the remaining compact set is bounded by a grid sup.
inline BoundCertificate extend_by_symmetry(const BoundCertificate& near_1, const ScalarFunction& F,
                                           const GridConfig& cfg = {})
{
    if (F.alternation != Alternation::declared)
        throw MissingAlternation("symmetry extension needs F induced by an alternating cochain");
    if (near_1.region.kind != RegionKind::real_interval)
        throw InvalidArgument("symmetry extension is implemented for real-interval certificates");
    const double d = near_1.region.delta;
    const double B = near_1.certified_bound;
    const std::vector<double> target = detail::real_target_grid(d, cfg);

    BoundCertificate out = near_1;
    out.pieces.clear();
    auto piece = [&](std::string label, std::string set, auto map) {
        const double emp = detail::sup_abs(target, [&](double x) { return F(map(x)); });
        out.pieces.push_back({std::move(label), std::move(set), B, emp});
    };
    // Images of [1 - d, 1) under the anharmonic maps generated by 1/x and 1 - x.
    piece("near 1 from below", "[1-d, 1)", [](double x) { return x; });
    piece("near 1 from above", "(1, 1/(1-d)]", [](double x) { return 1.0 / x; });
    piece("near 0 from above", "(0, d]", [](double x) { return 1.0 - x; });
    piece("near 0 from below", "[-d/(1-d), 0)", [](double x) { return 1.0 - 1.0 / x; });
    piece("near +inf", "[1/d, inf)", [](double x) { return 1.0 / (1.0 - x); });
    piece("near -inf", "(-inf, -(1-d)/d]", [](double x) { return x / (x - 1.0); });

    double compact = 0.0;
    auto compact_piece = [&](std::string set, double lo, double hi) {
        if (!(lo < hi)) return;
        const double m = detail::sup_abs(detail::linspace(lo, hi, cfg.points), [&](double x) { return F(x); });
        out.pieces.push_back({"compact", std::move(set), m, m});
        compact = std::max(compact, m);
    };
    compact_piece("[-(1-d)/d, -d/(1-d)]", -(1.0 - d) / d, -d / (1.0 - d));
    compact_piece("[d, 1-d]", d, 1.0 - d);
    compact_piece("[1/(1-d), 1/d]", 1.0 / (1.0 - d), 1.0 / d);

    out.certified_bound = std::max(B, compact);
    out.empirical_sup = 0.0;
    for (const auto& p : out.pieces) out.empirical_sup = std::max(out.empirical_sup, p.empirical_sup);
    return out;
}

} // namespace boundcoh
