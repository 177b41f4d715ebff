#include "cachemodel/config_io.hpp"
#include "cachemodel/error.hpp"
#include "cachemodel/explorer.hpp"
#include "cachemodel/numfmt.hpp"
#include "cachemodel/report.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <sstream>

using namespace cachemodel;
using nlohmann::json;

namespace {

SweepSpec spec_for(const std::string& preset, const json& trace, const json& axes) {
    const json doc = {{"schema_version", 1},
                      {"params", "preset:" + preset},
                      {"trace", trace},
                      {"axes", axes}};
    return parse_sweep_spec(doc, ".", false);
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    FAIL("missing column " << name);
    return 0;
}

} // namespace

TEST_CASE("single-point sweep row equals the run pipeline") {
    const json trace = {{"pattern", "random:3"}, {"length", 400}};
    const SweepSpec spec = spec_for("xeon-foster", trace, json::array({{{"path", "l1d.size_kb"}, {"values", {64}}}}));
    const auto rows = csv_cells(run_sweep(spec, 1));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "config_id");
    CHECK(rows[0][1] == "l1d.size_kb");
    CHECK(rows[1][0] == "p0");
    CHECK(rows[1][1] == "64");

    const std::vector<double> flat = flatten(run_pipeline(spec.trace, load_preset("xeon-foster").params));
    REQUIRE(rows[1].size() == 2 + flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) {
        CHECK(rows[1][2 + i] == format_double(flat[i]));
    }
}

TEST_CASE("sweep output is independent of the job count") {
    const json trace = {{"pattern", "random:11"}, {"length", 300}, {"cores", 2}};
    const json axes = json::array({{{"path", "l1d.associativity"}, {"values", {1, 2, 4}}},
                                   {{"path", "l2.size_kb"}, {"values", {128, 256, 512}}},
                                   {{"path", "penalties.l2_read_miss_cycles"}, {"values", {50, 100}}}});
    SweepSpec spec = spec_for("cacti-default", trace, axes);
    spec.base_params["processor"]["cores"] = 2;
    const std::string one = run_sweep(spec, 1);
    CHECK(one == run_sweep(spec, 8));
    CHECK(one == run_sweep(spec, 3));
    CHECK(csv_cells(one).size() == 1 + 18);
}

TEST_CASE("associativity does not matter when the working set fits") {
    const json trace = {{"pattern", "loop:16:8"}};
    const SweepSpec spec = spec_for("xeon-foster", trace,
                                    json::array({{{"path", "l1d.associativity"}, {"values", {0, 1, 2, 4}}}}));
    const auto rows = csv_cells(run_sweep(spec, 2));
    const std::size_t rm = column(rows[0], "dc_read_misses");
    const std::size_t wm = column(rows[0], "dc_write_misses");
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(rows[i][rm] == rows[1][rm]);
        CHECK(rows[i][wm] == rows[1][wm]);
    }
    CHECK(std::stod(rows[1][rm]) + std::stod(rows[1][wm]) == 16);
}

TEST_CASE("expansion order and parameter overlay") {
    const SweepSpec spec = spec_for("xeon-foster", {{"pattern", "sequential"}, {"length", 4}},
                                    json::array({{{"path", "l1d.size_kb"}, {"values", {8, 16}}},
                                                 {{"path", "l1d.associativity"}, {"values", {1, 2, 4}}}}));
    const auto points = expand_sweep(spec);
    REQUIRE(points.size() == 6);
    CHECK(points[0].config_id == "p0");
    CHECK(points[5].config_id == "p5");
    CHECK(points[1].axis_values[0] == 8);
    CHECK(points[1].axis_values[1] == 2);
    CHECK(points[3].axis_values[0] == 16);
    CHECK(points[3].axis_values[1] == 1);
    const json doc = point_parameters(spec, points[4]);
    CHECK(doc["l1d"]["size_kb"] == 16);
    CHECK(doc["l1d"]["associativity"] == 2);
}

TEST_CASE("sweep spec errors") {
    const json trace = {{"pattern", "sequential"}, {"length", 4}};
    SweepSpec spec = spec_for("xeon-foster", trace,
                              json::array({{{"path", "l1d.size_kb"}, {"values", {8, 16, 32}}},
                                           {{"path", "l2.size_kb"}, {"values", {128, 256}}}}));
    spec.cap = 5;
    CHECK_THROWS_AS(expand_sweep(spec), ConfigError);
    spec.cap = 6;
    CHECK(expand_sweep(spec).size() == 6);

    SweepSpec bad = spec_for("xeon-foster", trace,
                             json::array({{{"path", "l1d.colour"}, {"values", {1}}}}));
    CHECK_THROWS_AS(expand_sweep(bad), ConfigError);

    SweepSpec invalid = spec_for("xeon-foster", trace,
                                 json::array({{{"path", "l1d.size_kb"}, {"values", {-1}}}}));
    CHECK_THROWS(run_sweep(invalid, 1));

    CHECK_THROWS_AS(parse_sweep_spec(json{{"schema_version", 1}, {"params", "preset:nope"},
                                          {"trace", trace}, {"axes", json::array()}},
                                     ".", false),
                    ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(json{{"schema_version", 2}}, ".", false), ConfigError);
    CHECK_THROWS_AS(parse_sweep_spec(json{{"schema_version", 1}, {"params", "preset:xeon-foster"},
                                          {"trace", trace}, {"axes", {{{"path", "l1d.size_kb"}}}}},
                                     ".", false),
                    ConfigError);
}

TEST_CASE("compare computes percent error") {
    const MetricTable pred = parse_metric_table("config_id,a,b,c\nx,110,5,1\ny,90,5,2\n", "pred");
    const MetricTable ref = parse_metric_table("config_id,a,b,c\nx,100,5,0\ny,100,5,0\n", "ref");
    const Comparison c = compare(pred, ref);
    REQUIRE(c.rows.size() == 6);
    CHECK(c.rows[0].config_id == "x");
    CHECK(c.rows[0].metric == "a");
    REQUIRE(c.rows[0].percent_error.has_value());
    CHECK(*c.rows[0].percent_error == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(*c.rows[1].percent_error == 0.0);
    CHECK_FALSE(c.rows[2].percent_error.has_value());

    const MetricSummary* a = nullptr;
    const MetricSummary* cc = nullptr;
    for (const MetricSummary& s : c.summary) {
        if (s.metric == "a") {
            a = &s;
        }
        if (s.metric == "c") {
            cc = &s;
        }
    }
    REQUIRE(a != nullptr);
    REQUIRE(cc != nullptr);
    CHECK(a->rows == 2);
    CHECK(a->max_percent_error == doctest::Approx(10.0));
    CHECK(a->mean_percent_error == doctest::Approx(10.0));
    CHECK(cc->rows == 0);
    CHECK(cc->excluded == 2);
    CHECK(format_comparison_csv(c).find("undefined-error") != std::string::npos);
    CHECK(comparison_to_json(c).is_object());
}

TEST_CASE("compare rejects mismatched ids and metrics") {
    const MetricTable pred = parse_metric_table("config_id,a\nx,1\n", "pred");
    CHECK_THROWS_AS(compare(pred, parse_metric_table("config_id,a\nz,1\n", "ref")), ConfigError);
    CHECK_THROWS_AS(compare(pred, parse_metric_table("config_id,b\nx,1\n", "ref")), ConfigError);
    CHECK_THROWS_AS(parse_metric_table("config_id,a\nx,1\nx,2\n", "dup"), ConfigError);
    CHECK_THROWS_AS(parse_metric_table("config_id,energy_sum_j\nx,abc\n", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_metric_table("", "empty"), ConfigError);
}

TEST_CASE("metric tables read all three formats") {
    SyntheticSpec s;
    s.length = 200;
    const auto trace = generate_synthetic(s);
    RunReport r = run_pipeline(trace, load_preset("xeon-foster").params);
    r.config_id = "base";
    const MetricTable from_json = parse_metric_table(format_report_json(r), "json");
    const MetricTable from_csv = parse_metric_table(format_report_csv(r), "csv");
    REQUIRE(from_json.ids == std::vector<std::string>{"base"});
    REQUIRE(from_csv.ids.size() == 1);
    const auto& jv = from_json.values.at("base");
    const auto& cv = from_csv.values.at(from_csv.ids[0]);
    CHECK(jv.size() == metric_descriptors().size());
    for (const auto& [metric, v] : jv) {
        REQUIRE(cv.contains(metric));
        CHECK(testsupport::rel_close(cv.at(metric), v, 1e-15));
    }
    const Comparison self = compare(from_json, from_json);
    for (const ComparisonRow& row : self.rows) {
        if (row.percent_error) {
            CHECK(*row.percent_error == 0.0);
        }
    }
}
