#include "cachemodel/report.hpp"

#include "cachemodel/error.hpp"
#include "cachemodel/numfmt.hpp"

#include <array>
#include <sstream>

namespace cachemodel {

using nlohmann::json;

RunReport run_pipeline(std::span<const TraceRecord> trace, const ParameterSet& params) {
    RunReport r;
    r.params_label = params.name;
    r.convention = params.model.l2_miss_convention;
    r.misc_estimated = params.model.estimate_misc;

    const ProcessorParams proc = params.processor_params();
    r.sim = simulate(trace, params.hierarchy(), params.cycle_costs());
    const DerivedCounts derived = derive_counts(r.sim, params.model.idle_time, params.model.cpi);
    r.counts = derived.counts;

    ModelInputs in;
    in.counts = derived.counts;
    in.l1i = params.l1i.tech;
    in.l1d = params.l1d.tech;
    in.l2 = params.l2.tech;
    in.memory = params.memory;
    in.processor = proc;
    in.misc_energy = params.model.estimate_misc ? estimate_misc_energy(derived.counts, proc)
                                                : params.model.misc_energy;
    in.cpi = derived.cpi;
    in.convention = params.model.l2_miss_convention;
    const ModelResult m = evaluate(in);
    r.energy = m.energy;
    r.timing = m.timing;
    return r;
}

namespace {

constexpr std::array<MetricDescriptor, 56> kMetrics = {{
    {"counts", "ic_reads", "count", "ic_reads", "/counts/ic_reads"},
    {"counts", "ic_read_misses", "count", "ic_read_misses", "/counts/ic_read_misses"},
    {"counts", "dc_reads", "count", "dc_reads", "/counts/dc_reads"},
    {"counts", "dc_writes", "count", "dc_writes", "/counts/dc_writes"},
    {"counts", "dc_read_misses", "count", "dc_read_misses", "/counts/dc_read_misses"},
    {"counts", "dc_write_misses", "count", "dc_write_misses", "/counts/dc_write_misses"},
    {"counts", "l2_ifetches", "count", "l2_ifetches", "/counts/l2_ifetches"},
    {"counts", "l2_data_reads", "count", "l2_data_reads", "/counts/l2_data_reads"},
    {"counts", "l2_data_writes", "count", "l2_data_writes", "/counts/l2_data_writes"},
    {"counts", "l2_read_misses", "count", "l2_read_misses", "/counts/l2_read_misses"},
    {"counts", "l2_write_misses", "count", "l2_write_misses", "/counts/l2_write_misses"},
    {"counts", "ram_reads", "count", "ram_reads", "/counts/ram_reads"},
    {"counts", "ram_writes", "count", "ram_writes", "/counts/ram_writes"},
    {"counts", "rom_reads", "count", "rom_reads", "/counts/rom_reads"},
    {"counts", "total_cycles", "count", "total_cycles", "/counts/total_cycles"},
    {"counts", "instruction_count", "count", "instruction_count", "/counts/instruction_count"},
    {"counts", "idle_time", "s", "idle_time_s", "/counts/idle_time"},
    {"model", "cpi", "ratio", "cpi", "/cpi"},
    {"energy", "ic_read", "J", "energy_ic_read_j", "/energy/ic/read"},
    {"energy", "ic_miss_penalty", "J", "energy_ic_miss_penalty_j", "/energy/ic/miss_penalty"},
    {"energy", "ic_total", "J", "energy_ic_total_j", "/energy/ic/total"},
    {"energy", "dc_read", "J", "energy_dc_read_j", "/energy/dc/read"},
    {"energy", "dc_write", "J", "energy_dc_write_j", "/energy/dc/write"},
    {"energy", "dc_miss_penalty", "J", "energy_dc_miss_penalty_j", "/energy/dc/miss_penalty"},
    {"energy", "dc_total", "J", "energy_dc_total_j", "/energy/dc/total"},
    {"energy", "l2_read", "J", "energy_l2_read_j", "/energy/l2/read"},
    {"energy", "l2_write", "J", "energy_l2_write_j", "/energy/l2/write"},
    {"energy", "l2_miss_penalty", "J", "energy_l2_miss_penalty_j", "/energy/l2/miss_penalty"},
    {"energy", "l2_ram", "J", "energy_l2_ram_j", "/energy/l2/ram"},
    {"energy", "l2_rom", "J", "energy_l2_rom_j", "/energy/l2/rom"},
    {"energy", "l2_total", "J", "energy_l2_total_j", "/energy/l2/total"},
    {"energy", "misc", "J", "energy_misc_j", "/energy/misc"},
    {"energy", "leak", "J", "energy_leak_j", "/energy/leak"},
    {"energy", "sum", "J", "energy_sum_j", "/energy/sum"},
    {"energy", "total", "J", "energy_total_j", "/energy/total"},
    {"timing", "ic_read", "s", "time_ic_read_s", "/timing/ic/read"},
    {"timing", "ic_miss_penalty", "s", "time_ic_miss_penalty_s", "/timing/ic/miss_penalty"},
    {"timing", "ic_total", "s", "time_ic_total_s", "/timing/ic/total"},
    {"timing", "dc_read", "s", "time_dc_read_s", "/timing/dc/read"},
    {"timing", "dc_write", "s", "time_dc_write_s", "/timing/dc/write"},
    {"timing", "dc_miss_penalty", "s", "time_dc_miss_penalty_s", "/timing/dc/miss_penalty"},
    {"timing", "dc_total", "s", "time_dc_total_s", "/timing/dc/total"},
    {"timing", "l2_read", "s", "time_l2_read_s", "/timing/l2/read"},
    {"timing", "l2_write", "s", "time_l2_write_s", "/timing/l2/write"},
    {"timing", "l2_miss_penalty", "s", "time_l2_miss_penalty_s", "/timing/l2/miss_penalty"},
    {"timing", "l2_ram", "s", "time_l2_ram_s", "/timing/l2/ram"},
    {"timing", "l2_rom", "s", "time_l2_rom_s", "/timing/l2/rom"},
    {"timing", "l2_total", "s", "time_l2_total_s", "/timing/l2/total"},
    {"timing", "ins", "s", "time_ins_s", "/timing/ins"},
    {"timing", "total", "s", "time_total_s", "/timing/total"},
    {"cache", "l2_lookups", "count", "l2_lookups", "/caches/l2/lookups"},
    {"cache", "l2_hits", "count", "l2_hits", "/caches/l2/hits"},
    {"cache", "l2_misses", "count", "l2_misses", "/caches/l2/misses"},
    {"cache", "l2_evictions", "count", "l2_evictions", "/caches/l2/evictions"},
    {"cache", "l2_writebacks", "count", "l2_writebacks", "/caches/l2/writebacks"},
    {"cache", "l2_fills", "count", "l2_fills", "/caches/l2/fills"},
}};

json counts_json(const AccessCounts& c) {
    return {
        {"ic_reads", c.ic_reads},
        {"ic_read_misses", c.ic_read_misses},
        {"dc_reads", c.dc_reads},
        {"dc_writes", c.dc_writes},
        {"dc_read_misses", c.dc_read_misses},
        {"dc_write_misses", c.dc_write_misses},
        {"l2_ifetches", c.l2_ifetches},
        {"l2_data_reads", c.l2_data_reads},
        {"l2_data_writes", c.l2_data_writes},
        {"l2_read_misses", c.l2_read_misses},
        {"l2_write_misses", c.l2_write_misses},
        {"ram_reads", c.ram_reads},
        {"ram_writes", c.ram_writes},
        {"rom_reads", c.rom_reads},
        {"total_cycles", c.total_cycles},
        {"instruction_count", c.instruction_count},
        {"idle_time", c.idle_time},
    };
}

json stats_json(const CacheStats& s) {
    return {
        {"lookups", s.lookups},       {"hits", s.hits},
        {"misses", s.misses},         {"read_lookups", s.read_lookups},
        {"write_lookups", s.write_lookups}, {"read_misses", s.read_misses},
        {"write_misses", s.write_misses},   {"write_hits", s.write_hits},
        {"fills", s.fills},           {"write_fills", s.write_fills},
        {"evictions", s.evictions},   {"writebacks", s.writebacks},
    };
}

json ic_json(const IcacheTerms& t) {
    return {{"read", t.read}, {"miss_penalty", t.miss_penalty}, {"total", t.total}};
}

json dc_json(const DcacheTerms& t) {
    return {{"read", t.read},
            {"write", t.write},
            {"miss_penalty", t.miss_penalty},
            {"total", t.total}};
}

json l2_json(const L2Terms& t) {
    return {{"read", t.read},
            {"write", t.write},
            {"miss_penalty", t.miss_penalty},
            {"ram", t.ram},
            {"rom", t.rom},
            {"total", t.total}};
}

} // namespace

std::span<const MetricDescriptor> metric_descriptors() { return kMetrics; }

const MetricDescriptor* find_metric(std::string_view column) {
    for (const MetricDescriptor& m : kMetrics) {
        if (m.column == column) {
            return &m;
        }
    }
    return nullptr;
}

const MetricDescriptor* find_metric(std::string_view section, std::string_view term) {
    for (const MetricDescriptor& m : kMetrics) {
        if (m.section == section && m.term == term) {
            return &m;
        }
    }
    return nullptr;
}

json report_to_json(const RunReport& r) {
    json j = json::object();
    j["schema_version"] = kReportSchemaVersion;
    j["config_id"] = r.config_id;
    j["params"] = r.params_label;
    j["l2_miss_convention"] = std::string(to_string(r.convention));
    j["misc_estimated"] = r.misc_estimated;
    j["units"] = {{"energy", "J"}, {"timing", "s"}, {"idle_time", "s"}};
    j["counts"] = counts_json(r.counts);
    j["cpi"] = r.energy.cpi;
    j["energy"] = {
        {"ic", ic_json(r.energy.ic)},
        {"dc", dc_json(r.energy.dc)},
        {"l2", l2_json(r.energy.l2)},
        {"misc", r.energy.misc},
        {"leak", r.energy.leak},
        {"sum", r.energy.sum()},
        {"total", r.energy.total},
    };
    j["timing"] = {
        {"ic", ic_json(r.timing.ic)},
        {"dc", dc_json(r.timing.dc)},
        {"l2", l2_json(r.timing.l2)},
        {"ins", r.timing.ins},
        {"total", r.timing.total},
    };
    json l1i = json::array();
    json l1d = json::array();
    json per_core = json::array();
    for (std::size_t c = 0; c < r.sim.per_core.size(); ++c) {
        l1i.push_back(stats_json(r.sim.l1i[c]));
        l1d.push_back(stats_json(r.sim.l1d[c]));
        per_core.push_back(counts_json(r.sim.per_core[c]));
    }
    j["caches"] = {{"l1i", l1i}, {"l1d", l1d}, {"l2", stats_json(r.sim.l2)}};
    j["per_core_counts"] = per_core;
    return j;
}

std::string format_report_json(const RunReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::vector<double> flatten(const RunReport& report) {
    const json j = report_to_json(report);
    std::vector<double> out;
    out.reserve(kMetrics.size());
    for (const MetricDescriptor& m : kMetrics) {
        out.push_back(j.at(json::json_pointer(std::string(m.pointer))).get<double>());
    }
    return out;
}

std::string format_report_csv(const RunReport& report) {
    const std::vector<double> values = flatten(report);
    std::ostringstream out;
    out << "section,term,value,unit\n";
    for (std::size_t i = 0; i < kMetrics.size(); ++i) {
        out << kMetrics[i].section << ',' << kMetrics[i].term << ',' << format_double(values[i])
            << ',' << kMetrics[i].unit << '\n';
    }
    return out.str();
}

} // namespace cachemodel
