// boundcoh: sampling, invariants, cocycle checks and boundedness
// certificates from the command line.
//
// Exit codes: 0 all checks passed, 1 tolerance violation, 2 usage or
// configuration error.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "boundcoh/commands.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

constexpr const char* kSeedEnv = "BOUNDCOH_SEED";
constexpr std::uint64_t kDefaultSeed = 1;

struct CommonOptions {
    std::string model = "S1";
    int n = 2;
    std::size_t count = 1000;
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-9;
    std::string format = "json";
    std::string out;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool sampling = true)
{
    if (sampling) {
        cmd->add_option("--model", o.model, "S1 | Sn | complex_hyperbolic | flags3")
            ->check(CLI::IsMember({"S1", "Sn", "complex_hyperbolic", "flags3"}));
        cmd->add_option("--n", o.n, "hyperbolic dimension")->check(CLI::PositiveNumber);
        cmd->add_option("--count", o.count, "number of samples")->check(CLI::PositiveNumber);
        cmd->add_option("--tol", o.tol, "genericity tolerance")->check(CLI::PositiveNumber);
    }
    o.seed_opt = cmd->add_option("--seed", o.seed, "master seed (default: $BOUNDCOH_SEED, else 1)");
    cmd->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "output path (default: stdout)");
}

std::uint64_t resolve_seed(const CommonOptions& o)
{
    if (o.seed_opt && o.seed_opt->count() > 0) return o.seed;
    if (const char* env = std::getenv(kSeedEnv)) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw boundcoh::InvalidArgument(std::string(kSeedEnv) + " is not an unsigned integer");
        }
    }
    return kDefaultSeed;
}

boundcoh::SamplerConfig sampler_config(const CommonOptions& o, std::size_t tuple_size)
{
    boundcoh::SamplerConfig cfg;
    cfg.model = boundcoh::model_from_string(o.model);
    cfg.n = o.n;
    cfg.count = o.count;
    cfg.seed = resolve_seed(o);
    cfg.tolerance = o.tol;
    cfg.tuple_size = tuple_size;
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"boundcoh: boundary cocycles, configuration invariants and boundedness certificates"};
    app.require_subcommand(1);

    CommonOptions sample_opts;
    std::size_t tuple_size = 3;
    auto* sample = app.add_subcommand("sample", "draw seeded generic tuples");
    add_common(sample, sample_opts);
    sample->add_option("--size", tuple_size, "points per tuple")->check(CLI::PositiveNumber);

    CommonOptions inv_opts;
    std::string inv_name;
    auto* invariant = app.add_subcommand("invariant", "triple invariant of sampled generic triples");
    add_common(invariant, inv_opts);
    invariant->add_option("--invariant", inv_name, "orientation_class | cartan | triple_ratio");

    CommonOptions cocycle_opts;
    auto* cocycle = app.add_subcommand("verify-cocycle", "sampled sup |d vol2| (S1) or |d vol3| (Sn, n = 3)");
    add_common(cocycle, cocycle_opts);

    CommonOptions cert_opts;
    boundcoh::CertifyOptions certify;
    std::string field = "real";
    auto* cert = app.add_subcommand("certify-bound", "boundedness certificate from the doubling recursion");
    add_common(cert, cert_opts, false);
    cert->add_option("--field", field, "real | complex")->check(CLI::IsMember({"real", "complex"}));
    cert->add_option("--function", certify.function, "vol3 | anharmonic | pole")
        ->check(CLI::IsMember({"vol3", "anharmonic", "pole"}));
    cert->add_option("--delta", certify.delta, "size of the target neighborhood of 1");
    cert->add_option("--grid", certify.grid.points, "grid points per region")->check(CLI::PositiveNumber);
    cert->add_option("--blowup", certify.grid.blowup_threshold, "refusal threshold for the doubling defect");

    CommonOptions probe_opts;
    std::string probe_inv;
    boundcoh::ProbeThresholds thresholds;
    auto* probe = app.add_subcommand("probe-config-space", "compactness probe of the space of generic triples");
    add_common(probe, probe_opts);
    probe->add_option("--invariant", probe_inv, "orientation_class | cartan | triple_ratio");
    probe->add_option("--escape-high", thresholds.escape_high, "flags3 escape threshold for |T|");
    probe->add_option("--escape-low", thresholds.escape_low, "flags3 escape threshold for 1/|T|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        boundcoh::CommandResult result;
        const CommonOptions* opts = nullptr;
        if (sample->parsed()) {
            opts = &sample_opts;
            result = boundcoh::run_sample(sampler_config(sample_opts, tuple_size));
        } else if (invariant->parsed()) {
            opts = &inv_opts;
            result = boundcoh::run_invariant(sampler_config(inv_opts, 3), inv_name);
        } else if (cocycle->parsed()) {
            opts = &cocycle_opts;
            result = boundcoh::run_verify_cocycle(sampler_config(cocycle_opts, 0));
        } else if (cert->parsed()) {
            opts = &cert_opts;
            certify.field = field == "real" ? boundcoh::Field::real : boundcoh::Field::complex;
            result = boundcoh::run_certify_bound(certify);
            result.envelope.seed = resolve_seed(cert_opts);
        } else {
            opts = &probe_opts;
            const boundcoh::SamplerConfig cfg = sampler_config(probe_opts, 3);
            const std::string name = probe_inv.empty() ? boundcoh::default_invariant(cfg.model) : probe_inv;
            result = boundcoh::compactness_probe(cfg.model, name, cfg, thresholds);
        }
        boundcoh::emit_report(result.envelope, boundcoh::format_from_string(opts->format), opts->out);
        if (!result.passed) {
            std::cerr << "boundcoh: check failed (see report summary)\n";
            return kExitViolation;
        }
        return kExitOk;
    } catch (const boundcoh::Error& e) {
        std::cerr << "boundcoh: " << e.what() << '\n';
        return kExitUsage;
    }
}
