#pragma once

// Trace-driven simulation of a non-inclusive two-level hierarchy: private
// L1 instruction and data caches per core and one shared L2, all LRU.

#include "cachemodel/model.hpp"
#include "cachemodel/trace_record.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cachemodel {

enum class WritePolicy { WriteBackAllocate, WriteThroughNoAllocate };

std::string_view to_string(WritePolicy policy);
std::optional<WritePolicy> parse_write_policy(std::string_view text);

struct CacheConfig {
    std::uint64_t size = 64 * 1024; // bytes
    std::uint64_t line_size = 64;   // bytes
    // Ways per set. 1 = direct mapped, 0 = fully associative.
    std::uint32_t associativity = 4;
    WritePolicy write_policy = WritePolicy::WriteBackAllocate;

    [[nodiscard]] std::uint64_t lines() const { return size / line_size; }
    [[nodiscard]] std::uint64_t ways() const { return associativity == 0 ? lines() : associativity; }
    [[nodiscard]] std::uint64_t num_sets() const { return lines() / ways(); }

    bool operator==(const CacheConfig&) const = default;
};

void validate(const CacheConfig& config, std::string_view prefix = "cache");

enum class InterleavePolicy {
    RoundRobin, // one record per core per turn, per-core order preserved
    Timestamp,  // file order
};

std::string_view to_string(InterleavePolicy policy);
std::optional<InterleavePolicy> parse_interleave_policy(std::string_view text);

struct HierarchyConfig {
    std::uint32_t core_count = 1;
    CacheConfig l1i;
    CacheConfig l1d;
    CacheConfig l2{256 * 1024, 64, 4, WritePolicy::WriteBackAllocate};
    InterleavePolicy interleave = InterleavePolicy::RoundRobin;

    bool operator==(const HierarchyConfig&) const = default;
};

void validate(const HierarchyConfig& config);

// Cycles charged per record: base_cost, plus the hit latency of every level
// looked up, plus the matching penalty on every miss.
struct CycleCostTable {
    std::uint64_t base_cost = 1;
    std::uint64_t l1_hit_latency = 0;
    std::uint64_t l2_hit_latency = 0;
    std::uint64_t ic_read_miss_penalty = 10;
    std::uint64_t dc_read_miss_penalty = 10;
    std::uint64_t dc_write_miss_penalty = 10;
    std::uint64_t l2_read_miss_penalty = 100;
    std::uint64_t l2_write_miss_penalty = 100;

    // Penalties rounded to the nearest whole cycle; latencies left at 0.
    static CycleCostTable from_processor(const ProcessorParams& proc);

    bool operator==(const CycleCostTable&) const = default;
};

enum class AccessType { Read, Write };

struct CacheStats {
    std::uint64_t lookups = 0;
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t read_lookups = 0;
    std::uint64_t write_lookups = 0;
    std::uint64_t read_misses = 0;
    std::uint64_t write_misses = 0;
    std::uint64_t write_hits = 0;
    std::uint64_t fills = 0;       // lines allocated
    std::uint64_t write_fills = 0; // lines allocated by a write miss
    std::uint64_t evictions = 0;   // valid lines displaced
    std::uint64_t writebacks = 0;  // dirty lines displaced

    CacheStats& operator+=(const CacheStats& other);
    bool operator==(const CacheStats&) const = default;
};

struct Eviction {
    std::uint64_t line_address = 0; // byte address of the displaced line
    bool dirty = false;
};

struct AccessOutcome {
    bool hit = false;
    bool allocated = false;
    std::optional<Eviction> evicted;
};

// One set-associative LRU cache. Hits and fills refresh recency; a miss
// fills the first invalid way, else the least recently used one.
class Cache {
public:
    explicit Cache(const CacheConfig& config);

    AccessOutcome access(std::uint64_t address, AccessType type);

    [[nodiscard]] bool contains(std::uint64_t address) const;
    [[nodiscard]] const CacheStats& stats() const { return stats_; }
    [[nodiscard]] const CacheConfig& config() const { return config_; }

private:
    struct Line {
        std::uint64_t tag = 0;
        std::uint64_t last_use = 0;
        bool valid = false;
        bool dirty = false;
    };

    [[nodiscard]] std::uint64_t set_of(std::uint64_t line_number) const {
        return line_number & set_mask_;
    }

    CacheConfig config_;
    std::uint64_t ways_;
    std::uint64_t set_mask_;
    unsigned line_shift_;
    unsigned set_shift_;
    std::uint64_t clock_ = 0;
    std::vector<Line> lines_;
    CacheStats stats_;
};

struct SimResult {
    std::vector<AccessCounts> per_core;
    AccessCounts aggregate;
    std::vector<CacheStats> l1i; // one per core
    std::vector<CacheStats> l1d; // one per core
    CacheStats l2;

    bool operator==(const SimResult&) const = default;
};

// Throws TraceError (with record index) when a record's core is out of range.
SimResult simulate(std::span<const TraceRecord> trace, const HierarchyConfig& config,
                   const CycleCostTable& costs);

// Order in which `simulate` replays the trace, as indices into it.
std::vector<std::size_t> interleave_order(std::span<const TraceRecord> trace,
                                          const HierarchyConfig& config);

struct DerivedCounts {
    AccessCounts counts;
    double cpi = 1.0;
};

// Aggregate model inputs from a simulation. Throws ConsistencyError if the
// result violates any AccessCounts or tally invariant.
DerivedCounts derive_counts(const SimResult& result, double idle_time,
                            std::optional<double> cpi_override);

} // namespace cachemodel
