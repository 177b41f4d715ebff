#pragma once

// Parameter files: JSON, schema_version 1. Values are written in the units of
// the published tables (nJ, ns, MHz, W, KBytes) and converted to SI exactly
// once, at load. See docs/parameter-format.md for the full schema.

#include "cachemodel/cache_sim.hpp"
#include "cachemodel/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cachemodel {

inline constexpr int kParameterSchemaVersion = 1;

struct ProcessorInfo {
    std::string brand;
    std::string model;
    std::uint32_t cores = 1;
    double power_w = 0.0;
    double technology_nm = 0.0;   // metadata
    std::uint64_t l2_kb = 0;      // metadata
    double clock_hz = 0.0;
    std::optional<double> cycle_energy; // J; defaults to power / clock
    double leak_power_w = 0.0;

    bool operator==(const ProcessorInfo&) const = default;
};

// Port counts are carried for reference only; no model consumes them.
struct PortInfo {
    std::uint32_t read_ports = 0;
    std::uint32_t write_ports = 1;
    std::uint32_t rw_ports = 1;

    bool operator==(const PortInfo&) const = default;
};

struct CacheLevel {
    CacheConfig geometry;
    CacheTechParams tech;
    double access_time = 0.0; // s, metadata
    PortInfo ports;

    bool operator==(const CacheLevel&) const = default;
};

struct MissPenalties {
    double ic_read = 10.0;
    double dc_read = 10.0;
    double dc_write = 10.0;
    double l2_read = 100.0;
    double l2_write = 100.0;

    bool operator==(const MissPenalties&) const = default;
};

struct ModelOptions {
    std::optional<double> cpi;
    double misc_energy = 0.0; // J
    bool estimate_misc = false;
    double idle_time = 0.0; // s
    L2MissConvention l2_miss_convention = L2MissConvention::AllTransactions;

    bool operator==(const ModelOptions&) const = default;
};

struct SimulationOptions {
    InterleavePolicy interleave = InterleavePolicy::RoundRobin;
    std::uint64_t l1_hit_latency = 0;
    std::uint64_t l2_hit_latency = 0;

    bool operator==(const SimulationOptions&) const = default;
};

struct ParameterSet {
    std::string name;
    std::string description;
    ProcessorInfo processor;
    CacheLevel l1i;
    CacheLevel l1d;
    CacheLevel l2;
    MemoryTechParams memory;
    MissPenalties penalties;
    ModelOptions model;
    SimulationOptions simulation;

    [[nodiscard]] ProcessorParams processor_params() const;
    [[nodiscard]] HierarchyConfig hierarchy() const;
    [[nodiscard]] CycleCostTable cycle_costs() const;

    bool operator==(const ParameterSet&) const = default;
};

struct LoadedParameters {
    ParameterSet params;
    std::vector<std::string> warnings; // lax-mode findings
};

// Throws ConfigError for schema problems (with the dotted key path) and
// InvalidParameterError for out-of-range values (named by file key, e.g.
// `l1i.read_energy_nj`). In strict mode unknown keys and implausible unit
// magnitudes are errors; otherwise they become warnings.
LoadedParameters load_parameters(const nlohmann::json& doc, bool strict);
LoadedParameters load_parameters(std::string_view text, bool strict);
LoadedParameters load_parameters_file(const std::filesystem::path& path, bool strict);

nlohmann::json to_json(const ParameterSet& params);
// Pretty-printed JSON; load_parameters(serialize(p)) == p.
std::string serialize(const ParameterSet& params);

// True when `dotted` (e.g. "l1d.size_kb") names a scalar key of the
// parameter file schema.
bool is_parameter_path(std::string_view dotted);

struct PresetInfo {
    std::string name;
    std::string description;
};

// Alphabetical by name.
std::vector<PresetInfo> list_presets();
// Embedded preset source text. Throws ConfigError for an unknown name.
std::string_view preset_text(std::string_view name);
LoadedParameters load_preset(std::string_view name, bool strict = true);

} // namespace cachemodel
