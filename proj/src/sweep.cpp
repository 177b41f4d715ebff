#include "cachemodel/explorer.hpp"

#include "cachemodel/error.hpp"
#include "cachemodel/numfmt.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace cachemodel {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path, std::string_view what) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open " + std::string(what) + " '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", path.string() + ": malformed JSON: " + e.what());
    }
}

std::uint64_t get_uint(const json& node, std::string_view key, std::uint64_t fallback,
                       const std::string& path) {
    const auto it = node.find(std::string(key));
    if (it == node.end()) {
        return fallback;
    }
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
        throw ConfigError(path.empty() ? std::string(key) : path + "." + std::string(key),
                          "expected a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

std::vector<TraceRecord> load_sweep_trace(const json& node, const std::filesystem::path& base_dir) {
    if (node.is_string()) {
        return read_trace_file(base_dir / node.get<std::string>());
    }
    if (!node.is_object() || !node.contains("pattern") || !node["pattern"].is_string()) {
        throw ConfigError("trace", "expected a trace path or {\"pattern\": ...}");
    }
    for (const auto& [key, value] : node.items()) {
        if (key != "pattern" && key != "length" && key != "seed" && key != "cores" &&
            key != "line_size") {
            throw ConfigError("trace." + key, "unknown key");
        }
    }
    SyntheticSpec spec;
    const std::uint64_t seed = get_uint(node, "seed", 1, "trace");
    spec.pattern = parse_pattern(node["pattern"].get<std::string>(), seed);
    spec.length = get_uint(node, "length", 0, "trace");
    spec.core_count = static_cast<std::uint32_t>(get_uint(node, "cores", 1, "trace"));
    spec.line_size = get_uint(node, "line_size", 64, "trace");
    return generate_synthetic(spec);
}

std::string axis_value_text(const json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    return v.dump();
}

} // namespace

SweepSpec parse_sweep_spec(const json& doc, const std::filesystem::path& base_dir, bool strict) {
    if (!doc.is_object()) {
        throw ConfigError("<root>", "sweep spec must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key != "schema_version" && key != "params" && key != "trace" && key != "axes" &&
            key != "cap") {
            throw ConfigError(key, "unknown key");
        }
    }
    if (get_uint(doc, "schema_version", 0, "") != 1) {
        throw ConfigError("schema_version", "expected 1");
    }
    SweepSpec spec;
    spec.strict = strict;
    spec.cap = get_uint(doc, "cap", kDefaultSweepCap, "");

    if (!doc.contains("params") || !doc["params"].is_string()) {
        throw ConfigError("params", "expected a parameter file path or \"preset:NAME\"");
    }
    const std::string params = doc["params"].get<std::string>();
    if (params.starts_with("preset:")) {
        spec.base_params = json::parse(preset_text(params.substr(7)));
        spec.params_label = params.substr(7);
    } else {
        spec.base_params = read_json_file(base_dir / params, "parameter file");
        spec.params_label = params;
    }

    if (!doc.contains("trace")) {
        throw ConfigError("trace", "missing required key");
    }
    spec.trace = load_sweep_trace(doc["trace"], base_dir);

    if (!doc.contains("axes") || !doc["axes"].is_array()) {
        throw ConfigError("axes", "expected an array");
    }
    for (std::size_t i = 0; i < doc["axes"].size(); ++i) {
        const json& a = doc["axes"][i];
        const std::string where = "axes[" + std::to_string(i) + "]";
        if (!a.is_object() || !a.contains("path") || !a["path"].is_string() ||
            !a.contains("values") || !a["values"].is_array() || a["values"].empty()) {
            throw ConfigError(where, "expected {\"path\": string, \"values\": non-empty array}");
        }
        SweepAxis axis;
        axis.path = a["path"].get<std::string>();
        for (const json& v : a["values"]) {
            axis.values.push_back(v);
        }
        spec.axes.push_back(std::move(axis));
    }
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path, bool strict) {
    return parse_sweep_spec(read_json_file(path, "sweep spec"), path.parent_path(), strict);
}

std::vector<SweepPoint> expand_sweep(const SweepSpec& spec) {
    std::uint64_t total = 1;
    for (const SweepAxis& axis : spec.axes) {
        if (!is_parameter_path(axis.path)) {
            throw ConfigError(axis.path, "axis path does not name a parameter");
        }
        if (axis.values.empty()) {
            throw ConfigError(axis.path, "axis has no values");
        }
        total *= axis.values.size();
        if (total > spec.cap) {
            throw ConfigError("axes", "sweep has more than " + std::to_string(spec.cap) +
                                          " points (cap)");
        }
    }
    std::vector<SweepPoint> points;
    points.reserve(total);
    std::vector<std::size_t> idx(spec.axes.size(), 0);
    for (std::uint64_t n = 0; n < total; ++n) {
        SweepPoint p;
        p.config_id = "p" + std::to_string(n);
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            p.axis_values.push_back(spec.axes[a].values[idx[a]]);
        }
        points.push_back(std::move(p));
        // Odometer increment, last axis fastest.
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            if (++idx[a] < spec.axes[a].values.size()) {
                break;
            }
            idx[a] = 0;
        }
    }
    return points;
}

json point_parameters(const SweepSpec& spec, const SweepPoint& point) {
    json doc = spec.base_params;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const std::string& path = spec.axes[a].path;
        const auto dot = path.find('.');
        json& section = doc[path.substr(0, dot)];
        if (section.is_null()) {
            section = json::object();
        }
        section[path.substr(dot + 1)] = point.axis_values[a];
    }
    return doc;
}

std::string run_sweep(const SweepSpec& spec, unsigned jobs) {
    const std::vector<SweepPoint> points = expand_sweep(spec);
    std::vector<std::string> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());

    auto evaluate_point = [&](std::size_t i) {
        try {
            ParameterSet params = load_parameters(point_parameters(spec, points[i]), spec.strict).params;
            params.name = spec.params_label;
            RunReport report = run_pipeline(spec.trace, params);
            report.config_id = points[i].config_id;
            std::ostringstream row;
            row << points[i].config_id;
            for (const json& v : points[i].axis_values) {
                row << ',' << axis_value_text(v);
            }
            for (double v : flatten(report)) {
                row << ',' << format_double(v);
            }
            rows[i] = row.str();
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            evaluate_point(i);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const Error& e) {
                throw Error(e.kind(), "sweep point " + points[i].config_id + ": " + e.what());
            }
        }
    }

    std::ostringstream out;
    out << "config_id";
    for (const SweepAxis& axis : spec.axes) {
        out << ',' << axis.path;
    }
    for (const MetricDescriptor& m : metric_descriptors()) {
        out << ',' << m.column;
    }
    out << '\n';
    for (const std::string& row : rows) {
        out << row << '\n';
    }
    return out.str();
}

} // namespace cachemodel
