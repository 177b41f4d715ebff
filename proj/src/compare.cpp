#include "cachemodel/explorer.hpp"

#include "cachemodel/error.hpp"
#include "cachemodel/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cachemodel {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return v;
}

void add_value(MetricTable& table, const std::string& id, const std::string& metric, double v,
               std::string_view origin) {
    if (!table.values.contains(id)) {
        table.ids.push_back(id);
    }
    auto& row = table.values[id];
    if (row.contains(metric)) {
        throw ConfigError(std::string(origin), "duplicate value for " + id + "/" + metric);
    }
    row[metric] = v;
    table.column_order[id].push_back(metric);
}

MetricTable from_report_json(const json& doc, std::string_view origin) {
    if (!doc.is_object() || !doc.contains("schema_version")) {
        throw ConfigError(std::string(origin), "not a run report (no schema_version)");
    }
    MetricTable table;
    const std::string id = doc.value("config_id", std::string("run"));
    for (const MetricDescriptor& m : metric_descriptors()) {
        const json::json_pointer ptr{std::string(m.pointer)};
        if (doc.contains(ptr) && doc.at(ptr).is_number()) {
            add_value(table, id, std::string(m.column), doc.at(ptr).get<double>(), origin);
        }
    }
    return table;
}

} // namespace

MetricTable parse_metric_table(std::string_view text, std::string_view origin) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        try {
            return from_report_json(json::parse(text), origin);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string(origin), std::string("malformed JSON: ") + e.what());
        }
    }

    std::vector<std::vector<std::string>> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        lines.push_back(split_csv(line));
    }
    if (lines.empty()) {
        throw ConfigError(std::string(origin), "empty metric file");
    }
    const std::vector<std::string>& header = lines.front();
    MetricTable table;

    if (header.size() == 4 && header[0] == "section" && header[1] == "term" &&
        header[2] == "value") {
        for (std::size_t r = 1; r < lines.size(); ++r) {
            const auto& cells = lines[r];
            if (cells.size() != 4) {
                throw ConfigError(std::string(origin), "row " + std::to_string(r + 1) +
                                                           ": expected 4 columns");
            }
            const auto v = parse_number(cells[2]);
            if (!v) {
                throw ConfigError(std::string(origin), "row " + std::to_string(r + 1) +
                                                           ": non-numeric value '" + cells[2] + "'");
            }
            const MetricDescriptor* m = find_metric(cells[0], cells[1]);
            const std::string metric = m ? std::string(m->column) : cells[0] + "." + cells[1];
            add_value(table, "run", metric, *v, origin);
        }
        return table;
    }

    if (header.empty() || header[0] != "config_id") {
        throw ConfigError(std::string(origin),
                          "unrecognised format: expected a JSON report, a "
                          "section,term,value,unit CSV or a CSV whose first column is config_id");
    }
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& cells = lines[r];
        if (cells.size() != header.size()) {
            throw ConfigError(std::string(origin), "row " + std::to_string(r + 1) + ": expected " +
                                                       std::to_string(header.size()) + " columns");
        }
        const std::string& id = cells[0];
        if (table.values.contains(id)) {
            throw ConfigError(std::string(origin), "duplicate config_id '" + id + "'");
        }
        table.ids.push_back(id);
        table.values[id];
        for (std::size_t c = 1; c < header.size(); ++c) {
            if (cells[c].empty()) {
                continue;
            }
            const auto v = parse_number(cells[c]);
            if (!v) {
                if (find_metric(header[c])) {
                    throw ConfigError(std::string(origin), "row " + std::to_string(r + 1) +
                                                               ": non-numeric " + header[c]);
                }
                continue; // e.g. a string-valued sweep axis
            }
            table.values[id][header[c]] = *v;
            table.column_order[id].push_back(header[c]);
        }
    }
    return table;
}

MetricTable read_metric_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("", "cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_metric_table(ss.str(), path.string());
}

Comparison compare(const MetricTable& predictions, const MetricTable& references) {
    Comparison out;
    std::vector<std::string> metric_order;
    std::map<std::string, MetricSummary> summaries;

    for (const std::string& id : references.ids) {
        const auto pred_row = predictions.values.find(id);
        if (pred_row == predictions.values.end()) {
            throw ConfigError("config_id", "reference id '" + id + "' has no prediction");
        }
        const auto& ref_row = references.values.at(id);
        const auto order = references.column_order.find(id);
        if (order == references.column_order.end()) {
            continue;
        }
        for (const std::string& metric : order->second) {
            const auto p = pred_row->second.find(metric);
            if (p == pred_row->second.end()) {
                throw ConfigError(metric, "no predicted value for config '" + id + "'");
            }
            ComparisonRow row;
            row.config_id = id;
            row.metric = metric;
            row.predicted = p->second;
            row.reference = ref_row.at(metric);

            if (!summaries.contains(metric)) {
                metric_order.push_back(metric);
                summaries[metric].metric = metric;
            }
            MetricSummary& s = summaries[metric];
            if (row.reference == 0.0) {
                ++s.excluded;
                out.warnings.push_back(id + "/" + metric +
                                       ": reference is 0, percent error undefined (excluded)");
            } else {
                const double err =
                    std::fabs(row.predicted - row.reference) / std::fabs(row.reference) * 100.0;
                row.percent_error = err;
                s.max_percent_error = s.rows == 0 ? err : std::max(s.max_percent_error, err);
                s.mean_percent_error += err;
                ++s.rows;
            }
            out.rows.push_back(std::move(row));
        }
    }
    for (const std::string& id : predictions.ids) {
        if (!references.values.contains(id)) {
            out.warnings.push_back("prediction '" + id + "' has no reference (ignored)");
        }
    }
    for (const std::string& metric : metric_order) {
        MetricSummary s = summaries[metric];
        if (s.rows > 0) {
            s.mean_percent_error /= static_cast<double>(s.rows);
        }
        out.summary.push_back(s);
    }
    return out;
}

std::string format_comparison_csv(const Comparison& c) {
    std::ostringstream out;
    out << "config_id,metric,predicted,reference,percent_error,status\n";
    for (const ComparisonRow& r : c.rows) {
        out << r.config_id << ',' << r.metric << ',' << format_double(r.predicted) << ','
            << format_double(r.reference) << ','
            << (r.percent_error ? format_double(*r.percent_error) : "") << ','
            << (r.percent_error ? "ok" : "undefined-error") << '\n';
    }
    out << "# summary\n";
    out << "metric,max_percent_error,mean_percent_error,rows,excluded\n";
    for (const MetricSummary& s : c.summary) {
        out << s.metric << ',' << format_double(s.max_percent_error) << ','
            << format_double(s.mean_percent_error) << ',' << s.rows << ',' << s.excluded << '\n';
    }
    return out.str();
}

json comparison_to_json(const Comparison& c) {
    json rows = json::array();
    for (const ComparisonRow& r : c.rows) {
        rows.push_back({{"config_id", r.config_id},
                        {"metric", r.metric},
                        {"predicted", r.predicted},
                        {"reference", r.reference},
                        {"percent_error", r.percent_error ? json(*r.percent_error) : json(nullptr)},
                        {"status", r.percent_error ? "ok" : "undefined-error"}});
    }
    json summary = json::array();
    for (const MetricSummary& s : c.summary) {
        summary.push_back({{"metric", s.metric},
                           {"max_percent_error", s.max_percent_error},
                           {"mean_percent_error", s.mean_percent_error},
                           {"rows", s.rows},
                           {"excluded", s.excluded}});
    }
    return {{"schema_version", 1}, {"rows", rows}, {"summary", summary}, {"warnings", c.warnings}};
}

} // namespace cachemodel
