#pragma once

// Report envelopes and their JSON / CSV encodings.
//
// JSON: one object with keys command, seed, config, results, summary,
// version. Tolerances live under config.tolerances.
//
// CSV: long format with the fixed header
//     section,index,key,value
// section is one of meta, config, results, summary; index is the result
// row number (empty outside results); value is the JSON encoding of the
// field. Every envelope survives a write/read round trip in either format.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"

namespace boundcoh {

using json = nlohmann::json;

inline constexpr const char* kReportVersion = "1.0.0";
inline constexpr const char* kCsvHeader = "section,index,key,value";

struct ReportEnvelope {
    std::string command;
    std::uint64_t seed = 0;
    json config = json::object();
    json tolerances = json::object();
    json results = json::array();
    json summary = json::object();
    std::string version = kReportVersion;

    bool operator==(const ReportEnvelope&) const = default;
};

enum class ReportFormat { json, csv };

inline ReportFormat format_from_string(const std::string& s)
{
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw InvalidArgument("unknown report format '" + s + "'");
}

inline json to_json(const ReportEnvelope& env)
{
    json config = env.config;
    config["tolerances"] = env.tolerances;
    return json{{"command", env.command}, {"seed", env.seed},       {"config", config},
                {"results", env.results}, {"summary", env.summary}, {"version", env.version}};
}

inline ReportEnvelope envelope_from_json(const json& j)
{
    for (const char* key : {"command", "seed", "config", "results", "summary", "version"})
        if (!j.contains(key)) throw InvalidArgument(std::string("report is missing key '") + key + "'");
    ReportEnvelope env;
    env.command = j.at("command").get<std::string>();
    env.seed = j.at("seed").get<std::uint64_t>();
    env.config = j.at("config");
    if (env.config.contains("tolerances")) {
        env.tolerances = env.config.at("tolerances");
        env.config.erase("tolerances");
    }
    env.results = j.at("results");
    env.summary = j.at("summary");
    env.version = j.at("version").get<std::string>();
    return env;
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw InvalidArgument("unterminated quoted CSV field");
    return fields;
}

} // namespace detail

inline std::string to_csv(const ReportEnvelope& env)
{
    std::ostringstream os;
    auto row = [&](const std::string& section, const std::string& index, const std::string& key, const json& v) {
        os << section << ',' << index << ',' << detail::csv_field(key) << ',' << detail::csv_field(v.dump()) << '\n';
    };
    os << kCsvHeader << '\n';
    row("meta", "", "command", env.command);
    row("meta", "", "seed", env.seed);
    row("meta", "", "version", env.version);
    for (const auto& [k, v] : env.config.items()) row("config", "", k, v);
    row("config", "", "tolerances", env.tolerances);
    for (std::size_t i = 0; i < env.results.size(); ++i) {
        const json& r = env.results[i];
        if (!r.is_object()) throw InvalidArgument("CSV rows need object-valued results");
        for (const auto& [k, v] : r.items()) row("results", std::to_string(i), k, v);
    }
    for (const auto& [k, v] : env.summary.items()) row("summary", "", k, v);
    return os.str();
}

inline ReportEnvelope envelope_from_csv(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw InvalidArgument("CSV header mismatch");
    ReportEnvelope env;
    env.config = json::object();
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::csv_split(line);
        if (f.size() != 4) throw InvalidArgument("CSV row needs 4 fields: " + line);
        const json v = json::parse(f[3]);
        if (f[0] == "meta") {
            if (f[2] == "command") env.command = v.get<std::string>();
            else if (f[2] == "seed") env.seed = v.get<std::uint64_t>();
            else if (f[2] == "version") env.version = v.get<std::string>();
        } else if (f[0] == "config") {
            if (f[2] == "tolerances") env.tolerances = v;
            else env.config[f[2]] = v;
        } else if (f[0] == "results") {
            const std::size_t i = std::stoul(f[1]);
            while (env.results.size() <= i) env.results.push_back(json::object());
            env.results[i][f[2]] = v;
        } else if (f[0] == "summary") {
            env.summary[f[2]] = v;
        } else {
            throw InvalidArgument("unknown CSV section '" + f[0] + "'");
        }
    }
    return env;
}

inline std::string render(const ReportEnvelope& env, ReportFormat format)
{
    if (format == ReportFormat::json) return to_json(env).dump(2) + "\n";
    return to_csv(env);
}

/// Writes the report to `path`, or to stdout when path is empty or "-".
inline void emit_report(const ReportEnvelope& env, ReportFormat format, const std::string& path)
{
    const std::string text = render(env, format);
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing report to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

inline ReportEnvelope read_report(const std::string& path, ReportFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (format == ReportFormat::json) return envelope_from_json(json::parse(ss.str()));
    return envelope_from_csv(ss.str());
}

} // namespace boundcoh
