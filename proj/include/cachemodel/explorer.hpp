#pragma once

// Design-space sweeps and model-vs-reference comparison.

#include "cachemodel/report.hpp"
#include "cachemodel/trace_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cachemodel {

inline constexpr std::uint64_t kDefaultSweepCap = 10000;

struct SweepAxis {
    std::string path; // parameter-file key, e.g. "l1d.size_kb"
    std::vector<nlohmann::json> values;
};

struct SweepSpec {
    nlohmann::json base_params; // parameter-file document the axes modify
    std::string params_label;
    std::vector<TraceRecord> trace;
    std::vector<SweepAxis> axes;
    std::uint64_t cap = kDefaultSweepCap;
    bool strict = false;
};

// Sweep spec file (JSON):
//   { "schema_version": 1,
//     "params": "base.json" | "preset:NAME",
//     "trace": "trace.trc" | { "pattern": "loop:8:4", "length": N, "seed": S, "cores": C },
//     "axes": [ { "path": "l1d.associativity", "values": [1, 2, 4] } ],
//     "cap": 10000 }
// Relative paths resolve against the spec file's directory.
SweepSpec load_sweep_spec(const std::filesystem::path& path, bool strict);
SweepSpec parse_sweep_spec(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                           bool strict);

struct SweepPoint {
    std::string config_id;
    std::vector<nlohmann::json> axis_values; // one per axis
};

// Cartesian product, first axis slowest. Throws ConfigError for an
// unresolvable axis path or when the product exceeds the cap.
std::vector<SweepPoint> expand_sweep(const SweepSpec& spec);

// Parameter document for one point.
nlohmann::json point_parameters(const SweepSpec& spec, const SweepPoint& point);

// Evaluates every point on `jobs` worker threads and returns the CSV:
// config_id, one column per axis, then every metric column. Row order is the
// expansion order regardless of `jobs`.
std::string run_sweep(const SweepSpec& spec, unsigned jobs);

// config id -> metric column -> value, ids in file order.
struct MetricTable {
    std::vector<std::string> ids;
    std::map<std::string, std::map<std::string, double>> values;
    std::map<std::string, std::vector<std::string>> column_order;
};

// Accepts a JSON run report, a `section,term,value,unit` run CSV, or a wide
// CSV whose first column is `config_id`.
MetricTable read_metric_table(const std::filesystem::path& path);
MetricTable parse_metric_table(std::string_view text, std::string_view origin);

struct ComparisonRow {
    std::string config_id;
    std::string metric;
    double predicted = 0.0;
    double reference = 0.0;
    std::optional<double> percent_error; // empty when reference == 0
};

struct MetricSummary {
    std::string metric;
    double max_percent_error = 0.0;
    double mean_percent_error = 0.0;
    std::size_t rows = 0;     // rows included in the summary
    std::size_t excluded = 0; // rows flagged undefined-error
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    std::vector<MetricSummary> summary;
    std::vector<std::string> warnings;
};

// |predicted - reference| / reference * 100, per (config id, metric) present
// in the reference. Throws ConfigError on an id or metric missing from the
// predictions.
Comparison compare(const MetricTable& predictions, const MetricTable& references);

std::string format_comparison_csv(const Comparison& comparison);
nlohmann::json comparison_to_json(const Comparison& comparison);

} // namespace cachemodel
