#include "cachemodel/config_io.hpp"

#include "cachemodel/error.hpp"
#include "cachemodel/numfmt.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cachemodel {

using nlohmann::json;

ProcessorParams ParameterSet::processor_params() const {
    ProcessorParams p;
    p.cycle_time = 1.0 / processor.clock_hz;
    p.cycle_energy = processor.cycle_energy.value_or(processor.power_w / processor.clock_hz);
    p.leak_power = processor.leak_power_w;
    p.ic_read_miss_penalty = penalties.ic_read;
    p.dc_read_miss_penalty = penalties.dc_read;
    p.dc_write_miss_penalty = penalties.dc_write;
    p.l2_read_miss_penalty = penalties.l2_read;
    p.l2_write_miss_penalty = penalties.l2_write;
    p.core_count = processor.cores;
    return p;
}

HierarchyConfig ParameterSet::hierarchy() const {
    HierarchyConfig h;
    h.core_count = processor.cores;
    h.l1i = l1i.geometry;
    h.l1d = l1d.geometry;
    h.l2 = l2.geometry;
    h.interleave = simulation.interleave;
    return h;
}

CycleCostTable ParameterSet::cycle_costs() const {
    CycleCostTable t = CycleCostTable::from_processor(processor_params());
    t.l1_hit_latency = simulation.l1_hit_latency;
    t.l2_hit_latency = simulation.l2_hit_latency;
    return t;
}

namespace {

// Upper bounds beyond which a value is almost certainly in the wrong unit.
constexpr double kMaxPlausibleEnergyNj = 1e6;
constexpr double kMaxPlausibleTimeNs = 1e9;
constexpr double kMaxPlausibleClockMhz = 1e5;
constexpr double kMaxPlausiblePowerW = 1e4;
constexpr double kMaxPlausiblePenalty = 1e6;

// Source text of every floating-point number in a parsed document, keyed by
// dotted object path. Numbers inside arrays are not recorded.
using RawNumbers = std::map<std::string, std::string, std::less<>>;

class RawNumberCollector : public nlohmann::json_sax<json> {
public:
    explicit RawNumberCollector(RawNumbers& out) : out_(out) {}

    bool null() override { return true; }
    bool boolean(bool) override { return true; }
    bool number_integer(number_integer_t) override { return true; }
    bool number_unsigned(number_unsigned_t) override { return true; }
    bool number_float(number_float_t, const string_t& text) override {
        std::string path;
        for (const Frame& f : frames_) {
            if (!f.object) {
                return true;
            }
            path += (path.empty() ? "" : ".") + f.key;
        }
        out_[path] = text;
        return true;
    }
    bool string(string_t&) override { return true; }
    bool binary(binary_t&) override { return true; }
    bool start_object(std::size_t) override {
        frames_.push_back({true, ""});
        return true;
    }
    bool key(string_t& k) override {
        frames_.back().key = k;
        return true;
    }
    bool end_object() override {
        frames_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        frames_.push_back({false, ""});
        return true;
    }
    bool end_array() override {
        frames_.pop_back();
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
        return false;
    }

private:
    struct Frame {
        bool object;
        std::string key;
    };
    RawNumbers& out_;
    std::vector<Frame> frames_;
};

class Section {
public:
    Section(const json& node, std::string path, bool strict, std::vector<std::string>& warnings,
            const RawNumbers* raw)
        : node_(node), path_(std::move(path)), strict_(strict), warnings_(warnings), raw_(raw) {
        if (!node_.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    [[nodiscard]] std::string key_path(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    [[nodiscard]] bool has(std::string_view key) const {
        return node_.contains(std::string(key)) && !node_.at(std::string(key)).is_null();
    }

    const json* find(std::string_view key) {
        used_.insert(std::string(key));
        const auto it = node_.find(std::string(key));
        if (it == node_.end() || it->is_null()) {
            return nullptr;
        }
        return &*it;
    }

    Section child(std::string_view key, bool required = true) {
        static const json empty = json::object();
        const json* v = find(key);
        if (!v) {
            if (required) {
                throw ConfigError(key_path(key), "missing required section");
            }
            return Section(empty, key_path(key), strict_, warnings_, raw_);
        }
        return Section(*v, key_path(key), strict_, warnings_, raw_);
    }

    std::optional<double> opt_number(std::string_view key) {
        const json* v = find(key);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number()) {
            throw ConfigError(key_path(key), "expected a number");
        }
        const double d = v->get<double>();
        if (!std::isfinite(d)) {
            throw InvalidParameterError(key_path(key), "must be finite");
        }
        return d;
    }

    // SI value of a key already read as `file_value`: the source text shifted
    // by `exponent` when available, else the shortest form of `file_value`.
    double si(std::string_view key, double file_value, int exponent) {
        if (raw_ != nullptr) {
            if (const auto it = raw_->find(key_path(key)); it != raw_->end()) {
                return decimal_shift_literal(it->second, exponent);
            }
        }
        return decimal_shift(file_value, exponent);
    }

    double number(std::string_view key) {
        auto v = opt_number(key);
        if (!v) {
            throw ConfigError(key_path(key), "missing required key");
        }
        return *v;
    }

    double non_negative(std::string_view key, std::optional<double> fallback, double plausible_max) {
        const std::optional<double> v = fallback ? opt_number(key).value_or(*fallback)
                                                 : std::optional<double>(number(key));
        check_non_negative(key, *v, plausible_max);
        return *v;
    }

    void check_non_negative(std::string_view key, double v, double plausible_max) {
        if (v < 0.0) {
            throw InvalidParameterError(key_path(key),
                                        "must be >= 0, got " + format_double(v));
        }
        plausibility(key, v, plausible_max);
    }

    void plausibility(std::string_view key, double v, double plausible_max) {
        if (v > plausible_max) {
            note(key_path(key) + ": value " + format_double(v) +
                 " is outside the plausible range (<= " + format_double(plausible_max) +
                 "); check the unit");
        }
    }

    std::uint64_t integer(std::string_view key, std::optional<std::uint64_t> fallback) {
        const json* v = find(key);
        if (!v) {
            if (!fallback) {
                throw ConfigError(key_path(key), "missing required key");
            }
            return *fallback;
        }
        if (v->is_number_unsigned()) {
            return v->get<std::uint64_t>();
        }
        if (v->is_number_integer()) {
            if (v->get<std::int64_t>() < 0) {
                throw InvalidParameterError(key_path(key), "must be >= 0");
            }
            return static_cast<std::uint64_t>(v->get<std::int64_t>());
        }
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) {
                return static_cast<std::uint64_t>(d);
            }
            throw InvalidParameterError(key_path(key), "must be a non-negative integer");
        }
        throw ConfigError(key_path(key), "expected an integer");
    }

    std::string string(std::string_view key, std::string fallback) {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_string()) {
            throw ConfigError(key_path(key), "expected a string");
        }
        return v->get<std::string>();
    }

    bool boolean(std::string_view key, bool fallback) {
        const json* v = find(key);
        if (!v) {
            return fallback;
        }
        if (!v->is_boolean()) {
            throw ConfigError(key_path(key), "expected true or false");
        }
        return v->get<bool>();
    }

    // Unknown keys: error in strict mode, warning otherwise.
    void finish() {
        for (const auto& [key, value] : node_.items()) {
            if (!used_.contains(key)) {
                if (strict_) {
                    throw ConfigError(key_path(key), "unknown key");
                }
                warnings_.push_back(key_path(key) + ": unknown key ignored");
            }
        }
    }

    void note(const std::string& message) {
        if (strict_) {
            throw ConfigError("", message);
        }
        warnings_.push_back(message);
    }

private:
    const json& node_;
    std::string path_;
    bool strict_;
    std::vector<std::string>& warnings_;
    const RawNumbers* raw_;
    std::set<std::string> used_;
};

std::uint32_t narrow32(std::uint64_t v, const std::string& path) {
    if (v > 0xffffffffu) {
        throw InvalidParameterError(path, "value too large");
    }
    return static_cast<std::uint32_t>(v);
}

CacheLevel read_cache(Section s, bool data_cache) {
    CacheLevel c;
    const double size_kb = s.number("size_kb");
    const double bytes = size_kb * 1024.0;
    if (!(bytes >= 1.0) || bytes != std::floor(bytes) || bytes > 1.8e19) {
        throw InvalidParameterError(s.key_path("size_kb"),
                                    "must be a positive whole number of bytes, got " +
                                        format_double(size_kb) + " KB");
    }
    c.geometry.size = static_cast<std::uint64_t>(bytes);
    c.geometry.line_size = s.integer("line_size_b", std::nullopt);
    c.geometry.associativity = narrow32(s.integer("associativity", std::nullopt),
                                        s.key_path("associativity"));
    const std::string policy = s.string("write_policy", "write-back-allocate");
    const auto wp = parse_write_policy(policy);
    if (!wp) {
        throw ConfigError(s.key_path("write_policy"),
                          "expected write-back-allocate or write-through-no-allocate, got '" +
                              policy + "'");
    }
    c.geometry.write_policy = *wp;

    const double cycle_ns = s.non_negative("cycle_time_ns", std::nullopt, kMaxPlausibleTimeNs);
    const double write_cycle_ns =
        s.non_negative("write_cycle_time_ns", cycle_ns, kMaxPlausibleTimeNs);
    const double access_ns = s.non_negative("access_time_ns", 0.0, kMaxPlausibleTimeNs);
    const double read_nj = s.non_negative("read_energy_nj", std::nullopt, kMaxPlausibleEnergyNj);
    const double write_nj =
        s.non_negative("write_energy_nj", data_cache ? std::nullopt : std::optional<double>(0.0),
                       kMaxPlausibleEnergyNj);
    c.tech.read_cycle_time = s.si("cycle_time_ns", cycle_ns, -9);
    c.tech.write_cycle_time = s.has("write_cycle_time_ns")
                                  ? s.si("write_cycle_time_ns", write_cycle_ns, -9)
                                  : c.tech.read_cycle_time;
    c.tech.read_cycle_energy = s.si("read_energy_nj", read_nj, -9);
    c.tech.write_cycle_energy = s.si("write_energy_nj", write_nj, -9);
    c.access_time = s.si("access_time_ns", access_ns, -9);

    c.ports.read_ports = narrow32(s.integer("read_ports", 0), s.key_path("read_ports"));
    c.ports.write_ports = narrow32(s.integer("write_ports", 1), s.key_path("write_ports"));
    c.ports.rw_ports = narrow32(s.integer("rw_ports", 1), s.key_path("rw_ports"));
    s.finish();

    try {
        validate(c.geometry);
    } catch (const InvalidParameterError& e) {
        // Re-anchor the field at this section.
        const std::string field = e.field().substr(e.field().find('.') + 1);
        const std::string key = field == "size" ? "size_kb"
                                : field == "line_size" ? "line_size_b"
                                                       : field;
        throw InvalidParameterError(s.key_path(key), std::string(e.what()).substr(e.field().size() + 2));
    }
    return c;
}

} // namespace

namespace {

LoadedParameters load_document(const json& doc, bool strict, const RawNumbers* raw) {
    LoadedParameters out;
    ParameterSet& p = out.params;
    Section root(doc, "", strict, out.warnings, raw);

    const std::uint64_t version = root.integer("schema_version", std::nullopt);
    if (version != kParameterSchemaVersion) {
        throw ConfigError("schema_version",
                          "unsupported version " + std::to_string(version) + " (expected " +
                              std::to_string(kParameterSchemaVersion) + ")");
    }
    p.name = root.string("name", "");
    p.description = root.string("description", "");

    {
        Section s = root.child("processor");
        ProcessorInfo& info = p.processor;
        info.brand = s.string("brand", "");
        info.model = s.string("model", "");
        info.cores = narrow32(s.integer("cores", std::nullopt), s.key_path("cores"));
        if (info.cores < 1) {
            throw InvalidParameterError(s.key_path("cores"), "must be >= 1");
        }
        info.power_w = s.non_negative("power_w", std::nullopt, kMaxPlausiblePowerW);
        info.technology_nm = s.non_negative("technology_nm", 0.0, 1e6);
        info.l2_kb = s.integer("l2_kb", 0);
        const double clock_mhz = s.number("clock_mhz");
        if (clock_mhz <= 0.0) {
            throw InvalidParameterError(s.key_path("clock_mhz"), "must be > 0");
        }
        s.plausibility("clock_mhz", clock_mhz, kMaxPlausibleClockMhz);
        info.clock_hz = s.si("clock_mhz", clock_mhz, 6);
        if (auto e = s.opt_number("cycle_energy_nj")) {
            s.check_non_negative("cycle_energy_nj", *e, kMaxPlausibleEnergyNj);
            info.cycle_energy = s.si("cycle_energy_nj", *e, -9);
        }
        info.leak_power_w = s.non_negative("leak_power_w", 0.0, kMaxPlausiblePowerW);
        s.finish();
    }

    p.l1i = read_cache(root.child("l1i"), false);
    p.l1d = read_cache(root.child("l1d"), true);
    p.l2 = read_cache(root.child("l2"), true);

    {
        Section s = root.child("memory", false);
        auto e = [&](std::string_view key) {
            return s.si(key, s.non_negative(key, 0.0, kMaxPlausibleEnergyNj), -9);
        };
        auto t = [&](std::string_view key) {
            return s.si(key, s.non_negative(key, 0.0, kMaxPlausibleTimeNs), -9);
        };
        p.memory.ram_read_energy = e("ram_read_energy_nj");
        p.memory.ram_write_energy = e("ram_write_energy_nj");
        p.memory.rom_read_energy = e("rom_read_energy_nj");
        p.memory.ram_read_time = t("ram_read_time_ns");
        p.memory.ram_write_time = t("ram_write_time_ns");
        p.memory.rom_read_time = t("rom_read_time_ns");
        s.finish();
    }

    {
        Section s = root.child("penalties", false);
        const MissPenalties d;
        p.penalties.ic_read = s.non_negative("ic_read_miss_cycles", d.ic_read, kMaxPlausiblePenalty);
        p.penalties.dc_read = s.non_negative("dc_read_miss_cycles", d.dc_read, kMaxPlausiblePenalty);
        p.penalties.dc_write =
            s.non_negative("dc_write_miss_cycles", d.dc_write, kMaxPlausiblePenalty);
        p.penalties.l2_read = s.non_negative("l2_read_miss_cycles", d.l2_read, kMaxPlausiblePenalty);
        p.penalties.l2_write =
            s.non_negative("l2_write_miss_cycles", d.l2_write, kMaxPlausiblePenalty);
        s.finish();
    }

    {
        Section s = root.child("model", false);
        if (auto cpi = s.opt_number("cpi")) {
            if (*cpi <= 0.0) {
                throw InvalidParameterError(s.key_path("cpi"), "must be > 0");
            }
            s.plausibility("cpi", *cpi, 1e3);
            p.model.cpi = cpi;
        }
        p.model.misc_energy = s.non_negative("misc_energy_j", 0.0, 1e6);
        p.model.estimate_misc = s.boolean("estimate_misc", false);
        p.model.idle_time = s.non_negative("idle_time_s", 0.0, 1e9);
        const std::string conv = s.string("l2_miss_convention", "all-transactions");
        const auto parsed = parse_l2_miss_convention(conv);
        if (!parsed) {
            throw ConfigError(s.key_path("l2_miss_convention"),
                              "expected all-transactions or misses-only, got '" + conv + "'");
        }
        p.model.l2_miss_convention = *parsed;
        s.finish();
    }

    {
        Section s = root.child("simulation", false);
        const std::string il = s.string("interleave", "round-robin");
        const auto parsed = parse_interleave_policy(il);
        if (!parsed) {
            throw ConfigError(s.key_path("interleave"),
                              "expected round-robin or timestamp, got '" + il + "'");
        }
        p.simulation.interleave = *parsed;
        p.simulation.l1_hit_latency = s.integer("l1_hit_latency_cycles", 0);
        p.simulation.l2_hit_latency = s.integer("l2_hit_latency_cycles", 0);
        s.finish();
    }
    root.finish();

    if (p.processor.l2_kb != 0 && p.processor.l2_kb * 1024 != p.l2.geometry.size) {
        root.note("processor.l2_kb (" + std::to_string(p.processor.l2_kb) +
                  ") disagrees with l2.size_kb");
    }
    if (p.l2.geometry.line_size < p.l1i.geometry.line_size ||
        p.l2.geometry.line_size < p.l1d.geometry.line_size) {
        throw InvalidParameterError("l2.line_size_b", "must be >= the L1 line sizes");
    }
    validate(p.processor_params());
    return out;
}

} // namespace

LoadedParameters load_parameters(const json& doc, bool strict) {
    return load_document(doc, strict, nullptr);
}

LoadedParameters load_parameters(std::string_view text, bool strict) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    RawNumbers raw;
    RawNumberCollector collector(raw);
    json::sax_parse(text, &collector);
    return load_document(doc, strict, &raw);
}

LoadedParameters load_parameters_file(const std::filesystem::path& path, bool strict) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open parameter file '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_parameters(std::string_view(ss.str()), strict);
}

namespace {

// In serialize(), scaled values are emitted as exact decimal literals. They
// travel through the json document as tagged strings and are unquoted after
// dumping.
constexpr std::string_view kLiteralTag = "\x01literal:";

json scaled(double si_value, int exponent, bool literal) {
    if (literal) {
        return std::string(kLiteralTag) + shifted_literal(si_value, exponent);
    }
    return decimal_shift(si_value, exponent);
}

json cache_to_json(const CacheLevel& c, bool literal) {
    json j = json::object();
    j["size_kb"] = static_cast<double>(c.geometry.size) / 1024.0;
    j["line_size_b"] = c.geometry.line_size;
    j["associativity"] = c.geometry.associativity;
    j["write_policy"] = std::string(to_string(c.geometry.write_policy));
    j["access_time_ns"] = scaled(c.access_time, 9, literal);
    j["cycle_time_ns"] = scaled(c.tech.read_cycle_time, 9, literal);
    if (c.tech.write_cycle_time != c.tech.read_cycle_time) {
        j["write_cycle_time_ns"] = scaled(c.tech.write_cycle_time, 9, literal);
    }
    j["read_energy_nj"] = scaled(c.tech.read_cycle_energy, 9, literal);
    j["write_energy_nj"] = scaled(c.tech.write_cycle_energy, 9, literal);
    j["read_ports"] = c.ports.read_ports;
    j["write_ports"] = c.ports.write_ports;
    j["rw_ports"] = c.ports.rw_ports;
    return j;
}

json to_json_impl(const ParameterSet& p, bool literal) {
    json j = json::object();
    j["schema_version"] = kParameterSchemaVersion;
    if (!p.name.empty()) {
        j["name"] = p.name;
    }
    if (!p.description.empty()) {
        j["description"] = p.description;
    }
    json proc = json::object();
    proc["brand"] = p.processor.brand;
    proc["model"] = p.processor.model;
    proc["cores"] = p.processor.cores;
    proc["power_w"] = p.processor.power_w;
    proc["technology_nm"] = p.processor.technology_nm;
    proc["l2_kb"] = p.processor.l2_kb;
    proc["clock_mhz"] = scaled(p.processor.clock_hz, -6, literal);
    if (p.processor.cycle_energy) {
        proc["cycle_energy_nj"] = scaled(*p.processor.cycle_energy, 9, literal);
    }
    proc["leak_power_w"] = p.processor.leak_power_w;
    j["processor"] = proc;
    j["l1i"] = cache_to_json(p.l1i, literal);
    j["l1d"] = cache_to_json(p.l1d, literal);
    j["l2"] = cache_to_json(p.l2, literal);
    j["memory"] = {
        {"ram_read_energy_nj", scaled(p.memory.ram_read_energy, 9, literal)},
        {"ram_write_energy_nj", scaled(p.memory.ram_write_energy, 9, literal)},
        {"rom_read_energy_nj", scaled(p.memory.rom_read_energy, 9, literal)},
        {"ram_read_time_ns", scaled(p.memory.ram_read_time, 9, literal)},
        {"ram_write_time_ns", scaled(p.memory.ram_write_time, 9, literal)},
        {"rom_read_time_ns", scaled(p.memory.rom_read_time, 9, literal)},
    };
    j["penalties"] = {
        {"ic_read_miss_cycles", p.penalties.ic_read},
        {"dc_read_miss_cycles", p.penalties.dc_read},
        {"dc_write_miss_cycles", p.penalties.dc_write},
        {"l2_read_miss_cycles", p.penalties.l2_read},
        {"l2_write_miss_cycles", p.penalties.l2_write},
    };
    json model = json::object();
    if (p.model.cpi) {
        model["cpi"] = *p.model.cpi;
    }
    model["misc_energy_j"] = p.model.misc_energy;
    model["estimate_misc"] = p.model.estimate_misc;
    model["idle_time_s"] = p.model.idle_time;
    model["l2_miss_convention"] = std::string(to_string(p.model.l2_miss_convention));
    j["model"] = model;
    j["simulation"] = {
        {"interleave", std::string(to_string(p.simulation.interleave))},
        {"l1_hit_latency_cycles", p.simulation.l1_hit_latency},
        {"l2_hit_latency_cycles", p.simulation.l2_hit_latency},
    };
    return j;
}

} // namespace

json to_json(const ParameterSet& params) { return to_json_impl(params, false); }

bool is_parameter_path(std::string_view dotted) {
    static const std::set<std::string, std::less<>> kCacheKeys = {
        "size_kb",        "line_size_b",         "associativity",  "write_policy",
        "access_time_ns", "cycle_time_ns",       "write_cycle_time_ns", "read_energy_nj",
        "write_energy_nj", "read_ports",         "write_ports",    "rw_ports"};
    static const std::set<std::string, std::less<>> kPaths = {
        "processor.brand", "processor.model", "processor.cores", "processor.power_w",
        "processor.technology_nm", "processor.l2_kb", "processor.clock_mhz",
        "processor.cycle_energy_nj", "processor.leak_power_w",
        "memory.ram_read_energy_nj", "memory.ram_write_energy_nj", "memory.rom_read_energy_nj",
        "memory.ram_read_time_ns", "memory.ram_write_time_ns", "memory.rom_read_time_ns",
        "penalties.ic_read_miss_cycles", "penalties.dc_read_miss_cycles",
        "penalties.dc_write_miss_cycles", "penalties.l2_read_miss_cycles",
        "penalties.l2_write_miss_cycles",
        "model.cpi", "model.misc_energy_j", "model.estimate_misc", "model.idle_time_s",
        "model.l2_miss_convention",
        "simulation.interleave", "simulation.l1_hit_latency_cycles",
        "simulation.l2_hit_latency_cycles"};
    if (kPaths.contains(dotted)) {
        return true;
    }
    const auto dot = dotted.find('.');
    if (dot == std::string_view::npos) {
        return false;
    }
    const std::string_view section = dotted.substr(0, dot);
    return (section == "l1i" || section == "l1d" || section == "l2") &&
           kCacheKeys.contains(dotted.substr(dot + 1));
}

std::string serialize(const ParameterSet& params) {
    const std::string dumped = to_json_impl(params, true).dump(2);
    const std::string open = "\"\\u0001literal:";
    std::string out;
    std::size_t pos = 0;
    for (std::size_t hit = dumped.find(open); hit != std::string::npos; hit = dumped.find(open, pos)) {
        const std::size_t start = hit + open.size();
        const std::size_t end = dumped.find('"', start);
        out.append(dumped, pos, hit - pos);
        out.append(dumped, start, end - start);
        pos = end + 1;
    }
    out.append(dumped, pos);
    return out + "\n";
}

} // namespace cachemodel
