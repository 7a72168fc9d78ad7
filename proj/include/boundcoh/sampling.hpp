#pragma once

// Seeded rejection sampling of generic tuples on the supported boundaries.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cochain.hpp"
#include "errors.hpp"
#include "flags.hpp"
#include "hyperbolic_boundary.hpp"
#include "random.hpp"

namespace boundcoh {

enum class Model { S1, Sn, complex_hyperbolic, flags3 };

inline std::string to_string(Model m)
{
    switch (m) {
        case Model::S1: return "S1";
        case Model::Sn: return "Sn";
        case Model::complex_hyperbolic: return "complex_hyperbolic";
        case Model::flags3: return "flags3";
    }
    return "S1";
}

inline Model model_from_string(const std::string& s)
{
    if (s == "S1") return Model::S1;
    if (s == "Sn") return Model::Sn;
    if (s == "complex_hyperbolic") return Model::complex_hyperbolic;
    if (s == "flags3") return Model::flags3;
    throw InvalidArgument("unknown model '" + s + "'");
}

struct SamplerConfig {
    Model model = Model::S1;
    /// Hyperbolic dimension: S^{n-1} = dH^n_R for Sn, the unit sphere of
    /// C^n for complex_hyperbolic. Forced to 2 for S1, unused for flags3.
    int n = 2;
    std::size_t tuple_size = 3;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;

    int dimension() const { return model == Model::S1 ? 2 : n; }

    void validate() const
    {
        if (count < 1) throw InvalidArgument("count must be at least 1");
        if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
        if (tuple_size < 1) throw InvalidArgument("tuple size must be at least 1");
        if (model == Model::Sn && n < 2) throw InvalidArgument("Sn needs n >= 2");
        if (model == Model::complex_hyperbolic && n < 1) throw InvalidArgument("complex_hyperbolic needs n >= 1");
    }
};

using Tuple = std::variant<std::vector<RealBoundaryPoint>, std::vector<ComplexBoundaryPoint>, std::vector<Flag3>>;

struct SampleBatch {
    std::vector<Tuple> tuples;
    std::size_t draws = 0;

    double acceptance_rate() const
    {
        return draws == 0 ? 0.0 : static_cast<double>(tuples.size()) / static_cast<double>(draws);
    }
};

inline TupleSampler<RealBoundaryPoint> real_boundary_sampler(int dim, double tol)
{
    return {
        [dim](Rng& rng, std::size_t size) {
            std::vector<RealBoundaryPoint> t;
            t.reserve(size);
            for (std::size_t i = 0; i < size; ++i) t.push_back(RealBoundaryPoint::random(dim, rng));
            return t;
        },
        [tol](const std::vector<RealBoundaryPoint>& t) { return pairwise_distinct(t, tol); },
    };
}

inline TupleSampler<ComplexBoundaryPoint> complex_boundary_sampler(int n, double tol)
{
    return {
        [n](Rng& rng, std::size_t size) {
            std::vector<ComplexBoundaryPoint> t;
            t.reserve(size);
            for (std::size_t i = 0; i < size; ++i) t.push_back(ComplexBoundaryPoint::random(n, rng));
            return t;
        },
        [tol](const std::vector<ComplexBoundaryPoint>& t) { return pairwise_distinct(t, tol); },
    };
}

inline TupleSampler<Flag3> flag_sampler(double tol)
{
    return {
        [](Rng& rng, std::size_t size) {
            std::vector<Flag3> t;
            t.reserve(size);
            for (std::size_t i = 0; i < size; ++i) t.push_back(Flag3::random(rng));
            return t;
        },
        [tol](const std::vector<Flag3>& t) { return is_generic_flags(t, tol); },
    };
}

/// P^1(C) points drawn through the stereographic chart of S^2.
inline TupleSampler<ProjectivePoint> riemann_sphere_sampler(double tol)
{
    return {
        [](Rng& rng, std::size_t size) {
            std::vector<ProjectivePoint> t;
            t.reserve(size);
            for (std::size_t i = 0; i < size; ++i) t.push_back(to_projective(RealBoundaryPoint::random(3, rng)));
            return t;
        },
        [tol](const std::vector<ProjectivePoint>& t) {
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t j = i + 1; j < t.size(); ++j)
                    if (!(chordal_distance(t[i], t[j]) > tol)) return false;
            return true;
        },
    };
}

namespace detail {

template <typename Point>
SampleBatch sample_with(const TupleSampler<Point>& sampler, const SamplerConfig& cfg)
{
    const std::size_t budget = kRejectionBudget * cfg.count;
    std::vector<std::vector<Point>> tuples(cfg.count);
    std::vector<std::size_t> draws(cfg.count, 0);
    parallel_for(cfg.count, [&](std::size_t i) {
        tuples[i] = draw_generic(sampler, cfg.tuple_size, cfg.seed, i, budget, draws[i]);
    });
    SampleBatch batch;
    for (auto d : draws) batch.draws += d;
    if (batch.draws > budget) throw SamplerExhausted("rejection budget exceeded");
    batch.tuples.reserve(cfg.count);
    for (auto& t : tuples) batch.tuples.emplace_back(std::move(t));
    return batch;
}

} // namespace detail

/// Exactly cfg.count generic tuples; tuple i depends only on (seed, i).
inline SampleBatch sample_tuples(const SamplerConfig& cfg)
{
    cfg.validate();
    switch (cfg.model) {
        case Model::S1:
        case Model::Sn: return detail::sample_with(real_boundary_sampler(cfg.dimension(), cfg.tolerance), cfg);
        case Model::complex_hyperbolic: return detail::sample_with(complex_boundary_sampler(cfg.n, cfg.tolerance), cfg);
        case Model::flags3: return detail::sample_with(flag_sampler(cfg.tolerance), cfg);
    }
    throw InvalidArgument("unknown model");
}

} // namespace boundcoh
