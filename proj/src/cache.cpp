#include "cachemodel/cache_sim.hpp"

#include "cachemodel/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace cachemodel {

char kind_letter(AccessKind kind) {
    switch (kind) {
    case AccessKind::IFetch:
        return 'I';
    case AccessKind::Read:
        return 'R';
    case AccessKind::Write:
        return 'W';
    }
    return '?';
}

std::optional<AccessKind> kind_from_letter(char letter) {
    switch (letter) {
    case 'I':
        return AccessKind::IFetch;
    case 'R':
        return AccessKind::Read;
    case 'W':
        return AccessKind::Write;
    default:
        return std::nullopt;
    }
}

std::string_view to_string(WritePolicy policy) {
    return policy == WritePolicy::WriteBackAllocate ? "write-back-allocate"
                                                    : "write-through-no-allocate";
}

std::optional<WritePolicy> parse_write_policy(std::string_view text) {
    if (text == "write-back-allocate") {
        return WritePolicy::WriteBackAllocate;
    }
    if (text == "write-through-no-allocate") {
        return WritePolicy::WriteThroughNoAllocate;
    }
    return std::nullopt;
}

std::string_view to_string(InterleavePolicy policy) {
    return policy == InterleavePolicy::RoundRobin ? "round-robin" : "timestamp";
}

std::optional<InterleavePolicy> parse_interleave_policy(std::string_view text) {
    if (text == "round-robin") {
        return InterleavePolicy::RoundRobin;
    }
    if (text == "timestamp") {
        return InterleavePolicy::Timestamp;
    }
    return std::nullopt;
}

void validate(const CacheConfig& config, std::string_view prefix) {
    const std::string p(prefix);
    if (!std::has_single_bit(config.size)) {
        throw InvalidParameterError(p + ".size", "must be a power of two, got " +
                                                     std::to_string(config.size));
    }
    if (!std::has_single_bit(config.line_size)) {
        throw InvalidParameterError(p + ".line_size", "must be a power of two, got " +
                                                          std::to_string(config.line_size));
    }
    if (config.line_size > config.size) {
        throw InvalidParameterError(p + ".line_size", "exceeds cache size");
    }
    if (config.associativity != 0 && config.lines() % config.associativity != 0) {
        throw InvalidParameterError(p + ".associativity",
                                    "does not divide the number of lines (" +
                                        std::to_string(config.lines()) + ")");
    }
}

void validate(const HierarchyConfig& config) {
    if (config.core_count < 1) {
        throw InvalidParameterError("hierarchy.core_count", "must be >= 1");
    }
    if (config.core_count > 256) {
        throw InvalidParameterError("hierarchy.core_count", "at most 256 cores are supported");
    }
    validate(config.l1i, "l1i");
    validate(config.l1d, "l1d");
    validate(config.l2, "l2");
    if (config.l2.line_size < config.l1i.line_size || config.l2.line_size < config.l1d.line_size) {
        throw InvalidParameterError("l2.line_size", "must be >= the L1 line sizes");
    }
}

CycleCostTable CycleCostTable::from_processor(const ProcessorParams& proc) {
    auto cycles = [](double penalty) {
        return static_cast<std::uint64_t>(std::llround(penalty));
    };
    CycleCostTable t;
    t.ic_read_miss_penalty = cycles(proc.ic_read_miss_penalty);
    t.dc_read_miss_penalty = cycles(proc.dc_read_miss_penalty);
    t.dc_write_miss_penalty = cycles(proc.dc_write_miss_penalty);
    t.l2_read_miss_penalty = cycles(proc.l2_read_miss_penalty);
    t.l2_write_miss_penalty = cycles(proc.l2_write_miss_penalty);
    return t;
}

CacheStats& CacheStats::operator+=(const CacheStats& o) {
    lookups += o.lookups;
    hits += o.hits;
    misses += o.misses;
    read_lookups += o.read_lookups;
    write_lookups += o.write_lookups;
    read_misses += o.read_misses;
    write_misses += o.write_misses;
    write_hits += o.write_hits;
    fills += o.fills;
    write_fills += o.write_fills;
    evictions += o.evictions;
    writebacks += o.writebacks;
    return *this;
}

Cache::Cache(const CacheConfig& config) : config_(config) {
    validate(config_);
    ways_ = config_.ways();
    const std::uint64_t sets = config_.num_sets();
    set_mask_ = sets - 1;
    line_shift_ = static_cast<unsigned>(std::countr_zero(config_.line_size));
    set_shift_ = static_cast<unsigned>(std::countr_zero(sets));
    lines_.resize(sets * ways_);
}

bool Cache::contains(std::uint64_t address) const {
    const std::uint64_t line_number = address >> line_shift_;
    const std::uint64_t tag = line_number >> set_shift_;
    const std::size_t base = set_of(line_number) * ways_;
    for (std::size_t w = 0; w < ways_; ++w) {
        const Line& line = lines_[base + w];
        if (line.valid && line.tag == tag) {
            return true;
        }
    }
    return false;
}

AccessOutcome Cache::access(std::uint64_t address, AccessType type) {
    const bool is_write = type == AccessType::Write;
    const bool write_back = config_.write_policy == WritePolicy::WriteBackAllocate;
    const std::uint64_t line_number = address >> line_shift_;
    const std::uint64_t set = set_of(line_number);
    const std::uint64_t tag = line_number >> set_shift_;
    const std::size_t base = set * ways_;

    ++clock_;
    ++stats_.lookups;
    ++(is_write ? stats_.write_lookups : stats_.read_lookups);

    AccessOutcome outcome;
    std::size_t victim = base;
    bool have_invalid = false;
    for (std::size_t w = 0; w < ways_; ++w) {
        Line& line = lines_[base + w];
        if (line.valid && line.tag == tag) {
            line.last_use = clock_;
            if (is_write) {
                ++stats_.write_hits;
                if (write_back) {
                    line.dirty = true;
                }
            }
            ++stats_.hits;
            outcome.hit = true;
            return outcome;
        }
        if (have_invalid) {
            continue;
        }
        if (!line.valid) {
            victim = base + w;
            have_invalid = true;
        } else if (line.last_use < lines_[victim].last_use) {
            victim = base + w;
        }
    }

    ++stats_.misses;
    ++(is_write ? stats_.write_misses : stats_.read_misses);
    if (is_write && !write_back) {
        return outcome; // no-allocate
    }

    Line& slot = lines_[victim];
    if (slot.valid) {
        ++stats_.evictions;
        if (slot.dirty) {
            ++stats_.writebacks;
        }
        const std::uint64_t old_line = (slot.tag << set_shift_) | set;
        outcome.evicted = Eviction{old_line << line_shift_, slot.dirty};
    }
    slot.valid = true;
    slot.tag = tag;
    slot.last_use = clock_;
    slot.dirty = is_write && write_back;
    outcome.allocated = true;
    ++stats_.fills;
    if (is_write) {
        ++stats_.write_fills;
    }
    return outcome;
}

} // namespace cachemodel
