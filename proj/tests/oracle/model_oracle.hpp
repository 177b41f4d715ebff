#pragma once

// Brute-force evaluation of the energy and timing equations, written term by
// term straight from the printed formulas. Shares no code with src/model.cpp.

#include "cachemodel/model.hpp"

#include <map>
#include <string>

namespace oracle {

using Terms = std::map<std::string, double>;

inline double d(std::uint64_t v) { return static_cast<double>(v); }

// Keys: "E_ic-read", "E_ic-mp", "E_ic", ..., "E_total", "t_ic-read", ..., "T_total".
inline Terms evaluate(const cachemodel::AccessCounts& n, const cachemodel::CacheTechParams& ic,
                      const cachemodel::CacheTechParams& dc, const cachemodel::CacheTechParams& l2c,
                      const cachemodel::MemoryTechParams& mem, const cachemodel::ProcessorParams& p,
                      double e_misc, double cpi, bool l2_misses_only) {
    Terms t;
    // L1 instruction cache
    t["E_ic-read"] = ic.read_cycle_energy * d(n.ic_reads);
    t["E_ic-mp"] = p.cycle_energy * p.ic_read_miss_penalty * d(n.ic_read_misses);
    t["E_ic"] = t["E_ic-read"] + t["E_ic-mp"];
    // L1 data cache
    t["E_dc-read"] = dc.read_cycle_energy * d(n.dc_reads);
    t["E_dc-write"] = dc.write_cycle_energy * d(n.dc_writes);
    t["E_dc-mp"] = p.cycle_energy * (p.dc_read_miss_penalty * d(n.dc_read_misses) +
                                     p.dc_write_miss_penalty * d(n.dc_write_misses));
    t["E_dc"] = t["E_dc-read"] + t["E_dc-write"] + t["E_dc-mp"];
    // L2
    const double l2_reads = d(n.l2_ifetches) + d(n.l2_data_reads);
    const double l2_writes = d(n.l2_data_writes);
    const double rmiss_arg = l2_misses_only ? d(n.l2_read_misses) : l2_reads;
    const double wmiss_arg = l2_misses_only ? d(n.l2_write_misses) : l2_writes;
    t["E_l2c-read"] = l2c.read_cycle_energy * l2_reads;
    t["E_l2c-write"] = l2c.write_cycle_energy * l2_writes;
    t["E_l2c-mp"] =
        p.cycle_energy * (p.l2_read_miss_penalty * rmiss_arg + p.l2_write_miss_penalty * wmiss_arg);
    t["E_l2c-ram"] = mem.ram_read_energy * d(n.ram_reads) + mem.ram_write_energy * d(n.ram_writes);
    t["E_l2c-rom"] = mem.rom_read_energy * d(n.rom_reads);
    t["E_l2c"] = t["E_l2c-read"] + t["E_l2c-write"] + t["E_l2c-mp"] + t["E_l2c-ram"] +
                 t["E_l2c-rom"];
    t["E_misc"] = e_misc;
    t["E_leak"] = p.leak_power * n.idle_time;
    t["CPI"] = cpi;
    t["E_total"] = (t["E_ic"] + t["E_dc"] + t["E_l2c"] + t["E_misc"] + t["E_leak"]) / cpi;

    t["t_ic-read"] = ic.read_cycle_time * d(n.ic_reads);
    t["t_ic-mp"] = p.cycle_time * p.ic_read_miss_penalty * d(n.ic_read_misses);
    t["t_ic"] = t["t_ic-read"] + t["t_ic-mp"];
    t["t_dc-read"] = dc.read_cycle_time * d(n.dc_reads);
    t["t_dc-write"] = dc.write_cycle_time * d(n.dc_writes);
    t["t_dc-mp"] = p.cycle_time * (p.dc_read_miss_penalty * d(n.dc_read_misses) +
                                   p.dc_write_miss_penalty * d(n.dc_write_misses));
    t["t_dc"] = t["t_dc-read"] + t["t_dc-write"] + t["t_dc-mp"];
    t["t_l2c-read"] = l2c.read_cycle_time * l2_reads;
    t["t_l2c-write"] = l2c.write_cycle_time * l2_writes;
    t["t_l2c-mp"] =
        p.cycle_time * (p.l2_read_miss_penalty * rmiss_arg + p.l2_write_miss_penalty * wmiss_arg);
    t["t_l2c-ram"] = mem.ram_read_time * d(n.ram_reads) + mem.ram_write_time * d(n.ram_writes);
    t["t_l2c-rom"] = mem.rom_read_time * d(n.rom_reads);
    t["t_l2c"] = t["t_l2c-read"] + t["t_l2c-write"] + t["t_l2c-mp"] + t["t_l2c-ram"] +
                 t["t_l2c-rom"];
    t["t_ins"] = p.cycle_time * d(n.total_cycles) - t["t_ic-read"];
    t["T_total"] = t["t_ic"] + t["t_dc"] + t["t_l2c"] + t["t_ins"];
    return t;
}

// The library's report, keyed the same way.
inline Terms from_reports(const cachemodel::EnergyReport& e, const cachemodel::TimingReport& t) {
    return {
        {"E_ic-read", e.ic.read},       {"E_ic-mp", e.ic.miss_penalty},   {"E_ic", e.ic.total},
        {"E_dc-read", e.dc.read},       {"E_dc-write", e.dc.write},       {"E_dc-mp", e.dc.miss_penalty},
        {"E_dc", e.dc.total},           {"E_l2c-read", e.l2.read},        {"E_l2c-write", e.l2.write},
        {"E_l2c-mp", e.l2.miss_penalty}, {"E_l2c-ram", e.l2.ram},         {"E_l2c-rom", e.l2.rom},
        {"E_l2c", e.l2.total},          {"E_misc", e.misc},               {"E_leak", e.leak},
        {"CPI", e.cpi},                 {"E_total", e.total},             {"t_ic-read", t.ic.read},
        {"t_ic-mp", t.ic.miss_penalty}, {"t_ic", t.ic.total},             {"t_dc-read", t.dc.read},
        {"t_dc-write", t.dc.write},     {"t_dc-mp", t.dc.miss_penalty},   {"t_dc", t.dc.total},
        {"t_l2c-read", t.l2.read},      {"t_l2c-write", t.l2.write},      {"t_l2c-mp", t.l2.miss_penalty},
        {"t_l2c-ram", t.l2.ram},        {"t_l2c-rom", t.l2.rom},          {"t_l2c", t.l2.total},
        {"t_ins", t.ins},               {"T_total", t.total},
    };
}

} // namespace oracle
