#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "boundcoh/commands.hpp"

using namespace boundcoh;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "boundcoh_test_reports";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SamplerConfig config(Model model, std::size_t count, std::uint64_t seed, int n = 2)
{
    SamplerConfig cfg;
    cfg.model = model;
    cfg.n = n;
    cfg.count = count;
    cfg.seed = seed;
    return cfg;
}

// Runs the CLI with `args`, writing the report to `out`; returns the exit status.
int cli(const std::string& args, const fs::path& out)
{
    const std::string cmd = std::string(BOUNDCOH_CLI_PATH) + " " + args + " --out " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int cli_status(const std::string& args)
{
    const std::string cmd = std::string(BOUNDCOH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Report, JsonRoundTrip)
{
    const ReportEnvelope env = compactness_probe(Model::complex_hyperbolic, "cartan", config(Model::complex_hyperbolic, 50, 3)).envelope;
    const fs::path p = scratch("round.json");
    emit_report(env, ReportFormat::json, p.string());
    EXPECT_EQ(read_report(p.string(), ReportFormat::json), env);
}

TEST(Report, CsvRoundTrip)
{
    for (const ReportEnvelope& env : {run_sample(config(Model::flags3, 20, 4)).envelope,
                                      run_verify_cocycle(config(Model::S1, 30, 5)).envelope,
                                      compactness_probe(Model::flags3, "triple_ratio", config(Model::flags3, 40, 6)).envelope}) {
        const fs::path p = scratch("round.csv");
        emit_report(env, ReportFormat::csv, p.string());
        EXPECT_EQ(read_report(p.string(), ReportFormat::csv), env) << env.command;
    }
}

TEST(Report, CsvHeaderContract)
{
    const std::string csv = to_csv(run_sample(config(Model::S1, 3, 1)).envelope);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "section,index,key,value");
    EXPECT_THROW(envelope_from_csv("section,key,value\n"), InvalidArgument);
}

TEST(Report, CsvQuotesEmbeddedCommas)
{
    ReportEnvelope env;
    env.command = "x";
    env.results = json::array({{{"text", "a,\"b\"\nc"}, {"list", {1, 2, 3}}}});
    EXPECT_EQ(envelope_from_csv(to_csv(env)), env);
}

TEST(Report, SchemaKeysSeedAndTolerances)
{
    const auto env = run_invariant(config(Model::S1, 10, 77)).envelope;
    const json j = to_json(env);
    for (const char* key : {"command", "seed", "config", "results", "summary", "version"}) EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.size(), 6u);
    EXPECT_EQ(j["seed"], 77u);
    EXPECT_TRUE(j["config"].contains("tolerances"));
    EXPECT_EQ(j["config"]["tolerances"]["genericity"], 1e-9);
    EXPECT_THROW(envelope_from_json(json{{"command", "x"}}), InvalidArgument);
}

TEST(Report, UnwritablePathIsIoError)
{
    const auto env = run_sample(config(Model::S1, 2, 1)).envelope;
    EXPECT_THROW(emit_report(env, ReportFormat::json, "/nonexistent-dir/x/report.json"), IoError);
    EXPECT_THROW(read_report("/nonexistent-dir/x/report.json", ReportFormat::json), IoError);
    EXPECT_THROW(format_from_string("xml"), InvalidArgument);
}

TEST(Sampling, DeterministicPerSeed)
{
    for (Model m : {Model::S1, Model::Sn, Model::complex_hyperbolic, Model::flags3}) {
        const auto a = render(run_sample(config(m, 100, 11, 3)).envelope, ReportFormat::json);
        const auto b = render(run_sample(config(m, 100, 11, 3)).envelope, ReportFormat::json);
        const auto c = render(run_sample(config(m, 100, 12, 3)).envelope, ReportFormat::json);
        EXPECT_EQ(a, b) << to_string(m);
        EXPECT_NE(a, c) << to_string(m);
    }
}

TEST(Sampling, PrefixStableInCount)
{
    const auto small = sample_tuples(config(Model::flags3, 10, 9));
    const auto large = sample_tuples(config(Model::flags3, 100, 9));
    for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(to_json(small.tuples[i]), to_json(large.tuples[i]));
}

TEST(Sampling, FlagTriplesAcceptanceRate)
{
    SamplerConfig cfg = config(Model::flags3, 100000, 2024);
    const auto batch = sample_tuples(cfg);
    EXPECT_EQ(batch.tuples.size(), 100000u);
    EXPECT_GE(batch.acceptance_rate(), 0.999);
    for (std::size_t i = 0; i < 1000; ++i) EXPECT_TRUE(is_generic_flags(std::get<std::vector<Flag3>>(batch.tuples[i])));
}

TEST(Sampling, CircleTriplesPairwiseSeparated)
{
    SamplerConfig cfg = config(Model::S1, 5000, 8);
    cfg.tolerance = 1e-3;
    const auto batch = sample_tuples(cfg);
    for (const auto& t : batch.tuples) {
        const auto& p = std::get<std::vector<RealBoundaryPoint>>(t);
        ASSERT_EQ(p.size(), 3u);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) EXPECT_GT((p[i].direction() - p[j].direction()).norm(), 1e-3);
    }
}

TEST(Sampling, InvalidConfig)
{
    SamplerConfig cfg = config(Model::S1, 0, 1);
    EXPECT_THROW(sample_tuples(cfg), InvalidArgument);
    cfg.count = 1;
    cfg.tolerance = 0.0;
    EXPECT_THROW(sample_tuples(cfg), InvalidArgument);
    EXPECT_THROW(model_from_string("torus"), InvalidArgument);
}

TEST(Probe, CircleHasTwoOrientationClasses)
{
    const auto env = compactness_probe(Model::S1, "orientation_class", config(Model::S1, 2000, 1)).envelope;
    EXPECT_EQ(env.summary["class_count"], 2u);
    EXPECT_EQ(env.summary["classes"]["+1"].get<std::size_t>() + env.summary["classes"]["-1"].get<std::size_t>(), 2000u);
    EXPECT_EQ(env.summary["verdict"], "bounded-range");
}

TEST(Probe, CartanStaysInClosedInterval)
{
    const auto env =
        compactness_probe(Model::complex_hyperbolic, "cartan", config(Model::complex_hyperbolic, 5000, 2, 2)).envelope;
    EXPECT_EQ(env.summary["verdict"], "bounded-range");
    EXPECT_GE(env.summary["min"].get<double>(), -kPi / 2.0 - 1e-10);
    EXPECT_LE(env.summary["max"].get<double>(), kPi / 2.0 + 1e-10);
    EXPECT_EQ(env.results.size(), 5000u);
}

TEST(Probe, FlagTriplesEscape)
{
    const auto env = compactness_probe(Model::flags3, "triple_ratio", config(Model::flags3, 100000, 3)).envelope;
    EXPECT_EQ(env.summary["verdict"], "escape-detected");
    EXPECT_GT(env.summary["max_abs"].get<double>(), 1e3);
    EXPECT_LT(env.summary["min_abs"].get<double>(), 1e-3);
    EXPECT_EQ(env.summary["escape_high"], 1e3);
    EXPECT_EQ(env.summary["escape_low"], 1e-3);
}

TEST(Probe, ThresholdsAreReportFields)
{
    const auto env = compactness_probe(Model::flags3, "triple_ratio", config(Model::flags3, 100, 3), {1e300, 1e-300}).envelope;
    EXPECT_EQ(env.summary["verdict"], "bounded-range");
    EXPECT_EQ(env.summary["escape_high"], 1e300);
}

TEST(Probe, UnknownAndMismatchedInvariants)
{
    EXPECT_THROW(compactness_probe(Model::S1, "volume", config(Model::S1, 10, 1)), UnknownInvariant);
    EXPECT_THROW(compactness_probe(Model::S1, "cartan", config(Model::S1, 10, 1)), InvalidArgument);
    EXPECT_THROW(default_invariant(Model::Sn), UnknownInvariant);
}

TEST(VerifyCocycle, VolumeCocyclesPass)
{
    const auto s1 = run_verify_cocycle(config(Model::S1, 1000, 1));
    EXPECT_TRUE(s1.passed);
    EXPECT_EQ(s1.envelope.config["cocycle"], "vol2");
    EXPECT_EQ(s1.envelope.config["tuple_size"], 4u);
    const auto s2 = run_verify_cocycle(config(Model::Sn, 1000, 1, 3));
    EXPECT_TRUE(s2.passed);
    EXPECT_EQ(s2.envelope.config["tuple_size"], 5u);
    EXPECT_LE(s2.envelope.summary["sup_abs"].get<double>(), 1e-7);
    EXPECT_EQ(s2.envelope.summary["argmax_tuple"].size(), 5u);
    EXPECT_THROW(run_verify_cocycle(config(Model::flags3, 10, 1)), InvalidArgument);
}

TEST(CertifyBound, EmbedsCertificateWithProvenance)
{
    CertifyOptions opt;
    opt.function = "anharmonic";
    opt.grid.points = 2000;
    const auto r = run_certify_bound(opt);
    EXPECT_TRUE(r.passed);
    ASSERT_EQ(r.envelope.results.size(), 2u);
    const json& cert = r.envelope.results[0]["certificate"];
    EXPECT_EQ(cert["inputs"]["provenance"]["M_base"], "empirical");
    EXPECT_EQ(cert["certified_bound"].get<double>(),
              cert["inputs"]["M_base"].get<double>() + 2.0 * cert["C"].get<double>());
    EXPECT_EQ(r.envelope.results[1]["scope"], "global");
}

TEST(CertifyBound, PoleIsRefused)
{
    CertifyOptions opt;
    opt.function = "pole";
    opt.grid.points = 1000;
    const auto r = run_certify_bound(opt);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.envelope.summary["refused"], true);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(cli_status("--help"), 0);
    EXPECT_EQ(cli_status(""), 2);
    EXPECT_EQ(cli_status("sample --model torus"), 2);
    EXPECT_EQ(cli_status("sample --count 0"), 2);
    EXPECT_EQ(cli_status("verify-cocycle --model flags3 --count 10"), 2);
    EXPECT_EQ(cli_status("sample --count 5 --out /nonexistent-dir/x/r.json"), 2);
    EXPECT_EQ(cli_status("certify-bound --function pole --grid 500"), 1);
    EXPECT_EQ(cli_status("verify-cocycle --model Sn --n 3 --count 200 --seed 4"), 0);
}

TEST(Cli, SeedFromEnvironmentOnlyWithoutFlag)
{
    const fs::path a = scratch("env_a.json"), b = scratch("env_b.json"), c = scratch("env_c.json");
    ASSERT_EQ(cli("sample --count 5 --seed 42", a), 0);
    ::setenv("BOUNDCOH_SEED", "42", 1);
    ASSERT_EQ(cli("sample --count 5", b), 0);
    ASSERT_EQ(cli("sample --count 5 --seed 43", c), 0);
    ::unsetenv("BOUNDCOH_SEED");
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_NE(slurp(a), slurp(c));
    EXPECT_EQ(json::parse(slurp(a))["seed"], 42u);
}

TEST(Cli, CsvOutputReadsBack)
{
    const fs::path p = scratch("cli.csv");
    ASSERT_EQ(cli("probe-config-space --model S1 --count 100 --seed 3 --format csv", p), 0);
    const auto env = read_report(p.string(), ReportFormat::csv);
    EXPECT_EQ(env.command, "probe-config-space");
    EXPECT_EQ(env.seed, 3u);
    EXPECT_EQ(env.summary["class_count"], 2u);
}
