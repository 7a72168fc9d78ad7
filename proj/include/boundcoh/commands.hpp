#pragma once

// Batch commands behind the CLI. Each returns a ReportEnvelope together
// with a pass/fail status; nothing here prints.

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "certifier.hpp"
#include "cochain.hpp"
#include "flags.hpp"
#include "functions.hpp"
#include "hyperbolic_boundary.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "volume.hpp"

namespace boundcoh {

struct CommandResult {
    ReportEnvelope envelope;
    /// False when a checked tolerance was violated.
    bool passed = true;
};

// ---------------------------------------------------------------------------
// JSON encodings of domain values

inline json to_json(const RealBoundaryPoint& p)
{
    return std::vector<double>(p.direction().begin(), p.direction().end());
}

inline json to_json(const ComplexBoundaryPoint& p)
{
    json out = json::array();
    for (const cplx& c : p.lift()) out.push_back({c.real(), c.imag()});
    return out;
}

inline json to_json(const Flag3& f)
{
    return json{{"line", std::vector<double>(f.line().begin(), f.line().end())},
                {"plane", std::vector<double>(f.plane().begin(), f.plane().end())}};
}

inline json to_json(const ProjectivePoint& p)
{
    return json{{"a", {p.a().real(), p.a().imag()}}, {"b", {p.b().real(), p.b().imag()}}};
}

inline json to_json(const Tuple& t)
{
    return std::visit(
        [](const auto& pts) {
            json out = json::array();
            for (const auto& p : pts) out.push_back(to_json(p));
            return out;
        },
        t);
}

inline json to_json(const BoundCertificate& c)
{
    json pieces = json::array();
    for (const auto& p : c.pieces)
        pieces.push_back({{"label", p.label}, {"set", p.set}, {"bound", p.bound}, {"empirical_sup", p.empirical_sup}});
    return json{
        {"region",
         {{"kind", to_string(c.region.kind)},
          {"delta", c.region.delta},
          {"target", c.region.target_description()},
          {"base", c.region.base_description()}}},
        {"certified_bound", c.certified_bound},
        {"empirical_sup", c.empirical_sup},
        {"inputs",
         {{"M_base", c.inputs.m_base},
          {"M_near2", c.inputs.m_near2},
          {"B_defect", c.inputs.b_defect},
          {"provenance",
           {{"M_base", to_string(c.inputs.m_base_provenance)},
            {"M_near2", to_string(c.inputs.m_near2_provenance)},
            {"B_defect", to_string(c.inputs.b_defect_provenance)}}}}},
        {"C", c.step_constant},
        {"k_max", c.k_max},
        {"grid_points", c.grid_points},
        {"near2_radius", c.near2_radius},
        {"blowup_threshold", c.blowup_threshold},
        {"pieces", pieces},
    };
}

inline json to_json(const SamplerConfig& cfg)
{
    return json{{"model", to_string(cfg.model)},
                {"n", cfg.dimension()},
                {"tuple_size", cfg.tuple_size},
                {"count", cfg.count}};
}

// ---------------------------------------------------------------------------
// Summary statistics

/// Order statistic at probability q (nearest rank on sorted data).
inline double quantile(const std::vector<double>& sorted, double q)
{
    if (sorted.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(std::llround(q * static_cast<double>(sorted.size() - 1)));
    return sorted[std::min(idx, sorted.size() - 1)];
}

inline json histogram(const std::vector<double>& values, double lo, double hi, std::size_t bins)
{
    std::vector<std::size_t> counts(bins, 0);
    std::size_t below = 0, above = 0;
    for (double v : values) {
        if (v < lo) ++below;
        else if (v > hi) ++above;
        else counts[std::min(bins - 1, static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins)))]++;
    }
    return json{{"lo", lo}, {"hi", hi}, {"counts", counts}, {"below", below}, {"above", above}};
}

inline json value_statistics(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    json q = json::object();
    for (double p : {0.0, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 1.0}) {
        std::ostringstream key;
        key << "q" << p;
        q[key.str()] = quantile(values, p);
    }
    return json{{"min", values.front()}, {"max", values.back()}, {"quantiles", q}};
}

// ---------------------------------------------------------------------------
// Commands

/// sample: the generic tuples themselves.
inline CommandResult run_sample(const SamplerConfig& cfg)
{
    const SampleBatch batch = sample_tuples(cfg);
    CommandResult out;
    auto& env = out.envelope;
    env.command = "sample";
    env.seed = cfg.seed;
    env.config = to_json(cfg);
    env.tolerances = {{"genericity", cfg.tolerance}};
    for (std::size_t i = 0; i < batch.tuples.size(); ++i)
        env.results.push_back({{"index", i}, {"points", to_json(batch.tuples[i])}});
    env.summary = {{"samples", batch.tuples.size()}, {"draws", batch.draws}, {"acceptance_rate", batch.acceptance_rate()}};
    return out;
}

/// Name of the configuration-space invariant of triples for a model.
inline std::string default_invariant(Model m)
{
    switch (m) {
        case Model::S1: return "orientation_class";
        case Model::complex_hyperbolic: return "cartan";
        case Model::flags3: return "triple_ratio";
        case Model::Sn: break;
    }
    throw UnknownInvariant("no triple invariant is defined for model " + to_string(m));
}

/// Values of a triple invariant on each tuple of the batch.
inline std::vector<double> triple_invariants(const std::string& name, const SamplerConfig& cfg, const SampleBatch& batch)
{
    if (name != "orientation_class" && name != "cartan" && name != "triple_ratio")
        throw UnknownInvariant("unknown invariant '" + name + "'");
    const bool ok = (name == "orientation_class" && cfg.model == Model::S1) ||
                    (name == "cartan" && cfg.model == Model::complex_hyperbolic) ||
                    (name == "triple_ratio" && cfg.model == Model::flags3);
    if (!ok) throw InvalidArgument("invariant '" + name + "' is not defined on model " + to_string(cfg.model));
    if (cfg.tuple_size != 3) throw InvalidArgument("triple invariants need tuple size 3");
    std::vector<double> values(batch.tuples.size());
    parallel_for(values.size(), [&](std::size_t i) {
        const Tuple& t = batch.tuples[i];
        if (name == "orientation_class") {
            const auto& p = std::get<std::vector<RealBoundaryPoint>>(t);
            values[i] = vol2(p[0], p[1], p[2], cfg.tolerance) > 0.0 ? 1.0 : -1.0;
        } else if (name == "cartan") {
            const auto& p = std::get<std::vector<ComplexBoundaryPoint>>(t);
            values[i] = cartan_invariant(p[0], p[1], p[2], cfg.tolerance);
        } else {
            const auto& p = std::get<std::vector<Flag3>>(t);
            values[i] = triple_ratio(p[0], p[1], p[2], cfg.tolerance);
        }
    });
    return values;
}

/// invariant: per-tuple values of the model's triple invariant.
inline CommandResult run_invariant(SamplerConfig cfg, std::string name = {})
{
    cfg.tuple_size = 3;
    if (name.empty()) name = default_invariant(cfg.model);
    const SampleBatch batch = sample_tuples(cfg);
    const std::vector<double> values = triple_invariants(name, cfg, batch);
    CommandResult out;
    auto& env = out.envelope;
    env.command = "invariant";
    env.seed = cfg.seed;
    env.config = to_json(cfg);
    env.config["invariant"] = name;
    env.tolerances = {{"genericity", cfg.tolerance}};
    for (std::size_t i = 0; i < values.size(); ++i) env.results.push_back({{"index", i}, {"value", values[i]}});
    env.summary = value_statistics(values);
    env.summary["samples"] = values.size();
    return out;
}

struct ProbeThresholds {
    double escape_high = 1e3;
    double escape_low = 1e-3;
};

/// Distribution of a triple invariant over sampled generic triples, with a
/// verdict on whether it stays in a compact reference set.
///   orientation_class (S1): reference set {-1, +1}
///   cartan (complex_hyperbolic): reference set [-pi/2, pi/2]
///   triple_ratio (flags3): escape when |T| > escape_high or |T| < escape_low
inline CommandResult compactness_probe(Model model, const std::string& invariant, SamplerConfig cfg,
                                       const ProbeThresholds& thresholds = {})
{
    cfg.model = model;
    cfg.tuple_size = 3;
    const SampleBatch batch = sample_tuples(cfg);
    const std::vector<double> values = triple_invariants(invariant, cfg, batch);

    CommandResult out;
    auto& env = out.envelope;
    env.command = "probe-config-space";
    env.seed = cfg.seed;
    env.config = to_json(cfg);
    env.config["invariant"] = invariant;
    env.tolerances = {{"genericity", cfg.tolerance}};
    json summary = value_statistics(values);
    summary["samples"] = values.size();
    summary["draws"] = batch.draws;
    std::string verdict = "bounded-range";

    if (invariant == "orientation_class") {
        std::map<int, std::size_t> classes;
        for (double v : values) classes[static_cast<int>(v)]++;
        json cls = json::object();
        for (const auto& [k, n] : classes) cls[k > 0 ? "+1" : "-1"] = n;
        summary["classes"] = cls;
        summary["class_count"] = classes.size();
        summary["histogram"] = histogram(values, -1.5, 1.5, 3);
    } else if (invariant == "cartan") {
        const double lim = kPi / 2.0 + 1e-10;
        const bool inside = std::all_of(values.begin(), values.end(), [&](double v) { return std::abs(v) <= lim; });
        if (!inside) verdict = "escape-detected";
        summary["reference_set"] = {-kPi / 2.0, kPi / 2.0};
        summary["histogram"] = histogram(values, -kPi / 2.0, kPi / 2.0, 20);
    } else {
        std::vector<double> logs(values.size());
        std::size_t high = 0, low = 0;
        double max_abs = 0.0, min_abs = HUGE_VAL;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double a = std::abs(values[i]);
            max_abs = std::max(max_abs, a);
            min_abs = std::min(min_abs, a);
            if (a > thresholds.escape_high) ++high;
            if (a < thresholds.escape_low) ++low;
            logs[i] = std::copysign(std::log10(a), values[i]);
        }
        if (high > 0 || low > 0) verdict = "escape-detected";
        summary["escape_high"] = thresholds.escape_high;
        summary["escape_low"] = thresholds.escape_low;
        summary["max_abs"] = max_abs;
        summary["min_abs"] = min_abs;
        summary["count_above_high"] = high;
        summary["count_below_low"] = low;
        summary["histogram_scale"] = "sign(T) * log10|T|";
        summary["histogram"] = histogram(logs, -6.0, 6.0, 24);
    }
    summary["verdict"] = verdict;
    env.summary = summary;
    for (std::size_t i = 0; i < values.size(); ++i) env.results.push_back({{"index", i}, {"value", values[i]}});
    return out;
}

/// Tolerance on sup |d Vol| accepted by verify-cocycle.
inline constexpr double kCocycleTolerance = 1e-7;

/// verify-cocycle: sup |d vol2| on S1 4-tuples or sup |d vol3| on S^2 5-tuples.
inline CommandResult run_verify_cocycle(SamplerConfig cfg)
{
    cfg.tuple_size = cfg.model == Model::S1 ? 4 : 5;
    cfg.validate();
    CommandResult out;
    auto& env = out.envelope;
    env.command = "verify-cocycle";
    env.seed = cfg.seed;
    env.tolerances = {{"genericity", cfg.tolerance}, {"defect", kCocycleTolerance}};

    auto finish = [&](const auto& report, const char* cocycle) {
        env.config = to_json(cfg);
        env.config["cocycle"] = cocycle;
        for (std::size_t i = 0; i < report.values.size(); ++i)
            env.results.push_back({{"index", i}, {"defect", report.values[i]}});
        json witness = json::array();
        for (const auto& p : report.argmax_tuple) witness.push_back(to_json(p));
        env.summary = {{"sup_abs", report.sup_abs},       {"samples", report.samples},
                       {"draws", report.draws},           {"argmax_index", report.argmax_index},
                       {"argmax_tuple", witness},         {"passed", report.sup_abs <= kCocycleTolerance}};
        out.passed = report.sup_abs <= kCocycleTolerance;
    };

    if (cfg.model == Model::S1) {
        const Cochain<RealBoundaryPoint> v2(
            3, [tol = cfg.tolerance](std::span<const RealBoundaryPoint> p) { return vol2(p[0], p[1], p[2], tol); },
            Alternation::declared, "S1");
        finish(empirical_sup_defect(v2, real_boundary_sampler(2, cfg.tolerance), cfg.count, cfg.seed), "vol2");
    } else if (cfg.model == Model::Sn && cfg.n == 3) {
        const Cochain<RealBoundaryPoint> v3(
            4, [](std::span<const RealBoundaryPoint> p) { return vol3(p[0], p[1], p[2], p[3]); },
            Alternation::declared, "S2");
        finish(empirical_sup_defect(v3, real_boundary_sampler(3, cfg.tolerance), cfg.count, cfg.seed), "vol3");
    } else {
        throw InvalidArgument("verify-cocycle supports --model S1 (vol2) and --model Sn --n 3 (vol3)");
    }
    return out;
}

struct CertifyOptions {
    Field field = Field::real;
    std::string function = "anharmonic";
    double delta = 0.125;
    GridConfig grid;
};

/// certify-bound: certificate near 1 (real interval or complex sector);
/// for declared-alternating real functions, also the global extension.
/// A refused certificate is reported with passed = false.
inline CommandResult run_certify_bound(const CertifyOptions& opt)
{
    const ScalarFunction F = named_function(opt.function, opt.field);
    CommandResult out;
    auto& env = out.envelope;
    env.command = "certify-bound";
    env.seed = 0;
    env.config = {{"field", opt.field == Field::real ? "real" : "complex"},
                  {"function", opt.function},
                  {"delta", opt.delta},
                  {"grid", opt.grid.points}};
    env.tolerances = {{"blowup_threshold", opt.grid.blowup_threshold}, {"min_gap", opt.grid.min_gap}};
    try {
        const BoundCertificate cert = opt.field == Field::real ? certify_interval(F, opt.delta, opt.grid)
                                                               : certify_complex_region(F, opt.delta, opt.grid);
        env.results.push_back({{"scope", "near_1"}, {"certificate", to_json(cert)}});
        json summary = {{"refused", false},
                        {"certified_bound", cert.certified_bound},
                        {"empirical_sup", cert.empirical_sup},
                        {"k_max", cert.k_max}};
        if (opt.field == Field::real && F.alternation == Alternation::declared) {
            const BoundCertificate global = extend_by_symmetry(cert, F, opt.grid);
            env.results.push_back({{"scope", "global"}, {"certificate", to_json(global)}});
            summary["global_bound"] = global.certified_bound;
            summary["global_empirical_sup"] = global.empirical_sup;
        }
        env.summary = summary;
    } catch (const UnboundedDefect& e) {
        env.summary = {{"refused", true}, {"reason", e.what()}};
        out.passed = false;
    }
    return out;
}

} // namespace boundcoh
