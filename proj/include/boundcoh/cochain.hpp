#pragma once

// Cochains on tuples of points and the operators acting on them:
// homogeneous coboundary, alternation, the barycentric cone homotopy,
// and sampled estimates of sup |df|.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hyperbolic_boundary.hpp"
#include "random.hpp"

namespace boundcoh {

enum class Alternation { unknown, declared };

/// Largest arity accepted by alternate(); the sum has p! terms.
inline constexpr std::size_t kMaxAlternationArity = 6;

/// A real-valued function of `arity` points. Evaluators must be pure and
/// safe to call concurrently.
template <typename Point>
class Cochain {
public:
    using Evaluator = std::function<double(std::span<const Point>)>;

    Cochain(std::size_t arity, Evaluator f, Alternation alt = Alternation::unknown, std::string domain = {})
        : arity_(arity), eval_(std::make_shared<const Evaluator>(std::move(f))), alt_(alt), domain_(std::move(domain))
    {
    }

    std::size_t arity() const { return arity_; }
    Alternation alternation() const { return alt_; }
    const std::string& domain() const { return domain_; }

    double operator()(std::span<const Point> pts) const
    {
        if (pts.size() != arity_)
            throw InvalidArgument("cochain of arity " + std::to_string(arity_) + " evaluated on " +
                                  std::to_string(pts.size()) + " points");
        return (*eval_)(pts);
    }

    double operator()(const std::vector<Point>& pts) const { return (*this)(std::span<const Point>(pts)); }

private:
    std::size_t arity_;
    std::shared_ptr<const Evaluator> eval_;
    Alternation alt_;
    std::string domain_;
};

namespace detail {

template <typename Point>
std::vector<Point> omit(std::span<const Point> pts, std::size_t skip)
{
    std::vector<Point> out;
    out.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != skip) out.push_back(pts[j]);
    return out;
}

// Sign of a permutation of 0..n-1 by inversion count.
inline int permutation_sign(const std::vector<std::size_t>& perm)
{
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

inline double factorial(std::size_t p)
{
    double f = 1.0;
    for (std::size_t i = 2; i <= p; ++i) f *= static_cast<double>(i);
    return f;
}

} // namespace detail

/// (df)(x_0, ..., x_{q+1}) = sum_i (-1)^i f(x_0, ..., ^x_i, ..., x_{q+1}).
template <typename Point>
Cochain<Point> coboundary(const Cochain<Point>& f)
{
    return Cochain<Point>(
        f.arity() + 1,
        [f](std::span<const Point> pts) {
            double sum = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double term = f(detail::omit(pts, i));
                sum += (i % 2 == 0) ? term : -term;
            }
            return sum;
        },
        f.alternation(), f.domain());
}

/// Alt(f) = sum over permutations s of sgn(s) f(x_s(0), ..., x_s(p-1)).
template <typename Point>
Cochain<Point> alternate(const Cochain<Point>& f)
{
    const std::size_t p = f.arity();
    if (p > kMaxAlternationArity)
        throw ArityTooLarge("alternation is limited to arity " + std::to_string(kMaxAlternationArity));
    return Cochain<Point>(
        p,
        [f, p](std::span<const Point> pts) {
            std::vector<std::size_t> perm(p);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::vector<Point> permuted;
            permuted.reserve(p);
            double sum = 0.0;
            do {
                permuted.clear();
                for (std::size_t i : perm) permuted.push_back(pts[i]);
                sum += detail::permutation_sign(perm) * f(permuted);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return sum;
        },
        Alternation::declared, f.domain());
}

/// The projection f -> Alt(f) / p! onto alternating cochains.
template <typename Point>
Cochain<Point> alternating_part(const Cochain<Point>& f)
{
    const Cochain<Point> alt = alternate(f);
    const double scale = 1.0 / detail::factorial(f.arity());
    return Cochain<Point>(
        f.arity(), [alt, scale](std::span<const Point> pts) { return scale * alt(pts); },
        Alternation::declared, f.domain());
}

template <typename Point>
Cochain<Point> operator-(const Cochain<Point>& f, const Cochain<Point>& g)
{
    if (f.arity() != g.arity()) throw InvalidArgument("difference of cochains of different arity");
    return Cochain<Point>(
        f.arity(), [f, g](std::span<const Point> pts) { return f(pts) - g(pts); }, Alternation::unknown,
        f.domain());
}

/// Largest |f(s x) - sgn(s) f(x)| over every permutation s of the given tuple.
template <typename Point>
double alternation_residual(const Cochain<Point>& f, const std::vector<Point>& pts)
{
    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    const double base = f(pts);
    double worst = 0.0;
    std::vector<Point> permuted;
    do {
        permuted.clear();
        for (std::size_t i : perm) permuted.push_back(pts[i]);
        worst = std::max(worst, std::abs(f(permuted) - detail::permutation_sign(perm) * base));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return worst;
}

// ---------------------------------------------------------------------------
// Cochains with model-space slots

/// f(m_0, ..., m_p; b_1, ..., b_q): a function of p+1 points of the model
/// space (the hyperboloid, standing in for G/K) with q boundary points as
/// parameters.
template <typename Model, typename Boundary>
class ModelCochain {
public:
    using Evaluator = std::function<double(std::span<const Model>, std::span<const Boundary>)>;

    ModelCochain(std::size_t model_arity, std::size_t boundary_arity, Evaluator f)
        : model_arity_(model_arity), boundary_arity_(boundary_arity),
          eval_(std::make_shared<const Evaluator>(std::move(f)))
    {
    }

    std::size_t model_arity() const { return model_arity_; }
    std::size_t boundary_arity() const { return boundary_arity_; }

    double operator()(std::span<const Model> m, std::span<const Boundary> b) const
    {
        if (m.size() != model_arity_ || b.size() != boundary_arity_)
            throw InvalidArgument("model cochain evaluated with the wrong number of points");
        return (*eval_)(m, b);
    }

    double operator()(const std::vector<Model>& m, const std::vector<Boundary>& b) const
    {
        return (*this)(std::span<const Model>(m), std::span<const Boundary>(b));
    }

private:
    std::size_t model_arity_;
    std::size_t boundary_arity_;
    std::shared_ptr<const Evaluator> eval_;
};

/// Coboundary in the model slots, boundary parameters untouched.
template <typename Model, typename Boundary>
ModelCochain<Model, Boundary> model_coboundary(const ModelCochain<Model, Boundary>& f)
{
    return ModelCochain<Model, Boundary>(
        f.model_arity() + 1, f.boundary_arity(),
        [f](std::span<const Model> m, std::span<const Boundary> b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
                const std::vector<Model> rest = detail::omit(m, i);
                const double term = f(std::span<const Model>(rest), b);
                sum += (i % 2 == 0) ? term : -term;
            }
            return sum;
        });
}

/// (Hf)(m_0, ..., m_{p-1}; b) = f(c, m_0, ..., m_{p-1}; b) with
/// c = center(b_1, b_2, b_3). Satisfies f = H(df) + d(Hf) in the model slots.
template <typename Model, typename Boundary, typename Center>
ModelCochain<Model, Boundary> cone_homotopy(const ModelCochain<Model, Boundary>& f, Center center)
{
    if (f.model_arity() < 1) throw InvalidArgument("cone homotopy needs at least one model slot");
    if (f.boundary_arity() < 3) throw InvalidArgument("cone homotopy needs at least three boundary points");
    return ModelCochain<Model, Boundary>(
        f.model_arity() - 1, f.boundary_arity(),
        [f, center](std::span<const Model> m, std::span<const Boundary> b) {
            std::vector<Model> ext;
            ext.reserve(m.size() + 1);
            ext.push_back(center(b[0], b[1], b[2]));
            ext.insert(ext.end(), m.begin(), m.end());
            return f(std::span<const Model>(ext), b);
        });
}

/// Cone homotopy through the ideal-triangle barycenter of dH^n_R.
inline ModelCochain<HyperbolicPoint, RealBoundaryPoint>
cone_homotopy(const ModelCochain<HyperbolicPoint, RealBoundaryPoint>& f)
{
    return cone_homotopy(f, [](const RealBoundaryPoint& x, const RealBoundaryPoint& y, const RealBoundaryPoint& z) {
        return barycenter_ideal_triangle(x, y, z);
    });
}

// ---------------------------------------------------------------------------
// Sampled defect

/// Draws candidate tuples and tests them for genericity.
template <typename Point>
struct TupleSampler {
    std::function<std::vector<Point>(Rng&, std::size_t)> draw;
    std::function<bool(const std::vector<Point>&)> generic;
};

/// Rejection budget per requested sample.
inline constexpr std::size_t kRejectionBudget = 100;

template <typename Point>
struct DefectReport {
    double sup_abs = 0.0;
    std::size_t samples = 0;
    std::size_t draws = 0;
    std::size_t argmax_index = 0;
    std::vector<Point> argmax_tuple;
    std::uint64_t seed = 0;
    /// |df| of every sample, by sample index.
    std::vector<double> values;
};

/// Generic tuple number `index` of the stream `seed`; rejected draws are
/// added to `draws`. Throws SamplerExhausted after `budget` draws.
template <typename Point>
std::vector<Point> draw_generic(const TupleSampler<Point>& sampler, std::size_t size, std::uint64_t seed,
                                std::uint64_t index, std::size_t budget, std::size_t& draws)
{
    Rng rng = substream(seed, index);
    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
        ++draws;
        std::vector<Point> t = sampler.draw(rng, size);
        if (sampler.generic(t)) return t;
    }
    throw SamplerExhausted("no generic tuple within the rejection budget");
}

/// sup |df| over n generic tuples drawn from per-index substreams of `seed`.
template <typename Point>
DefectReport<Point> empirical_sup_defect(const Cochain<Point>& f, const TupleSampler<Point>& sampler,
                                         std::size_t n, std::uint64_t seed)
{
    if (n == 0) throw InvalidArgument("defect estimate needs at least one sample");
    const Cochain<Point> df = coboundary(f);
    const std::size_t size = df.arity();
    const std::size_t budget = kRejectionBudget * n;
    std::vector<double> values(n);
    std::vector<std::size_t> draws(n, 0);
    parallel_for(n, [&](std::size_t i) {
        const std::vector<Point> t = draw_generic(sampler, size, seed, i, budget, draws[i]);
        values[i] = std::abs(df(t));
        if (std::isnan(values[i])) throw EvaluationError("coboundary evaluated to NaN");
    });
    DefectReport<Point> rep;
    rep.samples = n;
    rep.seed = seed;
    rep.draws = std::accumulate(draws.begin(), draws.end(), std::size_t{0});
    if (rep.draws > budget) throw SamplerExhausted("rejection budget exceeded");
    for (std::size_t i = 0; i < n; ++i)
        if (values[i] > rep.sup_abs || i == 0) {
            rep.sup_abs = values[i];
            rep.argmax_index = i;
        }
    std::size_t scratch = 0;
    rep.argmax_tuple = draw_generic(sampler, size, seed, rep.argmax_index, budget, scratch);
    rep.values = std::move(values);
    return rep;
}

} // namespace boundcoh
