#include "cachemodel/config_io.hpp"

#include "cachemodel/error.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace cachemodel {

namespace {

// Cache technology shared by every preset: one table of CACTI figures
// (64 KB 4-way L1 I/D, 256 KB 4-way L2, 64 B lines). Miss penalties and
// memory energies are not part of that data; the penalties below are
// placeholders to be calibrated, and memory energies default to zero.
constexpr std::string_view kCactiSections = R"(  "l1i": {
    "size_kb": 64, "line_size_b": 64, "associativity": 4,
    "write_policy": "write-back-allocate",
    "access_time_ns": 0.894, "cycle_time_ns": 0.32,
    "read_energy_nj": 0.049, "write_energy_nj": 0.0081,
    "read_ports": 0, "write_ports": 1, "rw_ports": 1
  },
  "l1d": {
    "size_kb": 64, "line_size_b": 64, "associativity": 4,
    "write_policy": "write-back-allocate",
    "access_time_ns": 0.894, "cycle_time_ns": 0.32,
    "read_energy_nj": 0.049, "write_energy_nj": 0.0081,
    "read_ports": 0, "write_ports": 1, "rw_ports": 1
  },
  "l2": {
    "size_kb": 256, "line_size_b": 64, "associativity": 4,
    "write_policy": "write-back-allocate",
    "access_time_ns": 0.988, "cycle_time_ns": 0.40,
    "read_energy_nj": 0.064, "write_energy_nj": 0.0137,
    "read_ports": 0, "write_ports": 1, "rw_ports": 1
  },
  "memory": {
    "ram_read_energy_nj": 0, "ram_write_energy_nj": 0, "rom_read_energy_nj": 0,
    "ram_read_time_ns": 0, "ram_write_time_ns": 0, "rom_read_time_ns": 0
  },
  "penalties": {
    "ic_read_miss_cycles": 10, "dc_read_miss_cycles": 10, "dc_write_miss_cycles": 10,
    "l2_read_miss_cycles": 100, "l2_write_miss_cycles": 100
  },
  "model": {
    "misc_energy_j": 0, "estimate_misc": false, "idle_time_s": 0,
    "l2_miss_convention": "all-transactions"
  },
  "simulation": {
    "interleave": "round-robin", "l1_hit_latency_cycles": 0, "l2_hit_latency_cycles": 0
  }
})";

struct Preset {
    std::string_view name;
    std::string_view summary;
    std::string_view head;
};

constexpr std::string_view kCactiDefault = R"({
  "schema_version": 1,
  "name": "cacti-default",
  "description": "Generic single core at 2000 MHz / 80 W with the CACTI cache table. Miss penalties are uncalibrated placeholders.",
  "processor": {
    "brand": "generic", "model": "cacti-default", "cores": 1, "power_w": 80,
    "technology_nm": 45, "l2_kb": 256, "clock_mhz": 2000, "leak_power_w": 0
  },
)";

constexpr std::string_view kXeonFoster = R"({
  "schema_version": 1,
  "name": "xeon-foster",
  "description": "Single-core Intel XEON Foster (180 nm, 2000 MHz, 80 W) with the CACTI cache table. Miss penalties are uncalibrated placeholders.",
  "processor": {
    "brand": "XEON", "model": "Foster", "cores": 1, "power_w": 80,
    "technology_nm": 180, "l2_kb": 256, "clock_mhz": 2000, "leak_power_w": 0
  },
)";

constexpr std::string_view kXeonE5503 = R"({
  "schema_version": 1,
  "name": "xeon-e5503",
  "description": "Dual-core Intel XEON E5503 (45 nm, 2000 MHz, 80 W) with the CACTI cache table. Miss penalties are uncalibrated placeholders.",
  "processor": {
    "brand": "XEON", "model": "E5503", "cores": 2, "power_w": 80,
    "technology_nm": 45, "l2_kb": 256, "clock_mhz": 2000, "leak_power_w": 0
  },
)";

constexpr std::string_view kXeonE5507 = R"({
  "schema_version": 1,
  "name": "xeon-e5507",
  "description": "Quad-core Intel XEON E5507 (45 nm, 2200 MHz, 80 W) with the CACTI cache table. Miss penalties are uncalibrated placeholders.",
  "processor": {
    "brand": "XEON", "model": "E5507", "cores": 4, "power_w": 80,
    "technology_nm": 45, "l2_kb": 256, "clock_mhz": 2200, "leak_power_w": 0
  },
)";

// Sorted by name.
constexpr std::array<Preset, 4> kPresets = {{
    {"cacti-default", "generic 1-core, 2000 MHz, CACTI cache table", kCactiDefault},
    {"xeon-e5503", "XEON E5503: 2 cores, 2000 MHz, 80 W, 45 nm", kXeonE5503},
    {"xeon-e5507", "XEON E5507: 4 cores, 2200 MHz, 80 W, 45 nm", kXeonE5507},
    {"xeon-foster", "XEON Foster: 1 core, 2000 MHz, 80 W, 180 nm", kXeonFoster},
}};

} // namespace

std::vector<PresetInfo> list_presets() {
    std::vector<PresetInfo> out;
    for (const Preset& p : kPresets) {
        out.push_back({std::string(p.name), std::string(p.summary)});
    }
    std::sort(out.begin(), out.end(),
              [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
    return out;
}

std::string_view preset_text(std::string_view name) {
    static const std::array<std::string, kPresets.size()> texts = [] {
        std::array<std::string, kPresets.size()> t;
        for (std::size_t i = 0; i < kPresets.size(); ++i) {
            t[i] = std::string(kPresets[i].head) + std::string(kCactiSections);
        }
        return t;
    }();
    for (std::size_t i = 0; i < kPresets.size(); ++i) {
        if (kPresets[i].name == name) {
            return texts[i];
        }
    }
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

LoadedParameters load_preset(std::string_view name, bool strict) {
    return load_parameters(preset_text(name), strict);
}

} // namespace cachemodel
