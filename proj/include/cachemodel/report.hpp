#pragma once

#include "cachemodel/cache_sim.hpp"
#include "cachemodel/config_io.hpp"
#include "cachemodel/model.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cachemodel {

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
    std::string config_id = "run";
    std::string params_label;
    L2MissConvention convention = L2MissConvention::AllTransactions;
    bool misc_estimated = false;
    AccessCounts counts;
    EnergyReport energy;
    TimingReport timing;
    SimResult sim;
};

// simulate -> derive_counts -> both models.
RunReport run_pipeline(std::span<const TraceRecord> trace, const ParameterSet& params);

// One scalar of a report. `column` is the flat name used in wide CSV files
// (sweep output, reference files); `pointer` locates it in the JSON report.
struct MetricDescriptor {
    std::string_view section;
    std::string_view term;
    std::string_view unit;
    std::string_view column;
    std::string_view pointer;
};

std::span<const MetricDescriptor> metric_descriptors();
const MetricDescriptor* find_metric(std::string_view column);
const MetricDescriptor* find_metric(std::string_view section, std::string_view term);

// Values in metric_descriptors() order.
std::vector<double> flatten(const RunReport& report);

nlohmann::json report_to_json(const RunReport& report);
std::string format_report_json(const RunReport& report);
// `section,term,value,unit`, one row per metric.
std::string format_report_csv(const RunReport& report);

} // namespace cachemodel
