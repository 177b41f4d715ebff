#pragma once

// Analytical cache energy and throughput models for a two-level hierarchy.
//
// All quantities are SI (joules, seconds, watts). Counts are per-application
// transaction tallies; miss "rates" are taken to be miss counts. Every
// function here is pure.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cachemodel {

struct CacheTechParams {
    double read_cycle_energy = 0.0;  // J per read access
    double write_cycle_energy = 0.0; // J per write access
    double read_cycle_time = 0.0;    // s per read access
    double write_cycle_time = 0.0;   // s per write access

    bool operator==(const CacheTechParams&) const = default;
};

struct MemoryTechParams {
    double ram_read_energy = 0.0;
    double ram_write_energy = 0.0;
    double rom_read_energy = 0.0;
    double ram_read_time = 0.0;
    double ram_write_time = 0.0;
    double rom_read_time = 0.0;

    bool operator==(const MemoryTechParams&) const = default;
};

struct ProcessorParams {
    double cycle_energy = 0.0; // J per processor cycle
    double cycle_time = 0.0;   // s per processor cycle
    double leak_power = 0.0;   // W
    // Miss penalties in processor cycles.
    double ic_read_miss_penalty = 0.0;
    double dc_read_miss_penalty = 0.0;
    double dc_write_miss_penalty = 0.0;
    double l2_read_miss_penalty = 0.0;
    double l2_write_miss_penalty = 0.0;
    std::uint32_t core_count = 1;

    bool operator==(const ProcessorParams&) const = default;
};

struct AccessCounts {
    std::uint64_t ic_reads = 0;
    std::uint64_t ic_read_misses = 0;
    std::uint64_t dc_reads = 0;
    std::uint64_t dc_writes = 0;
    std::uint64_t dc_read_misses = 0;
    std::uint64_t dc_write_misses = 0;
    std::uint64_t l2_ifetches = 0;
    std::uint64_t l2_data_reads = 0;
    std::uint64_t l2_data_writes = 0;
    std::uint64_t l2_read_misses = 0;
    std::uint64_t l2_write_misses = 0;
    std::uint64_t ram_reads = 0;
    std::uint64_t ram_writes = 0;
    std::uint64_t rom_reads = 0;
    std::uint64_t total_cycles = 0;
    std::uint64_t instruction_count = 0;
    double idle_time = 0.0; // s

    AccessCounts& operator+=(const AccessCounts& other);
    friend AccessCounts operator+(AccessCounts a, const AccessCounts& b) { return a += b; }
    bool operator==(const AccessCounts&) const = default;
};

// How the L2 miss-penalty term is charged.
//   AllTransactions: P_rmiss * (ifetches + data reads) + P_wmiss * data writes,
//                    i.e. the penalty multiplies every L2 transaction.
//   MissesOnly:      P_rmiss * l2_read_misses + P_wmiss * l2_write_misses.
enum class L2MissConvention { AllTransactions, MissesOnly };

std::string_view to_string(L2MissConvention convention);
std::optional<L2MissConvention> parse_l2_miss_convention(std::string_view text);

// Per-level breakdowns. The same shapes carry joules (EnergyReport) or
// seconds (TimingReport).
struct IcacheTerms {
    double read = 0.0;
    double miss_penalty = 0.0;
    double total = 0.0;
    bool operator==(const IcacheTerms&) const = default;
};

struct DcacheTerms {
    double read = 0.0;
    double write = 0.0;
    double miss_penalty = 0.0;
    double total = 0.0;
    bool operator==(const DcacheTerms&) const = default;
};

struct L2Terms {
    double read = 0.0;
    double write = 0.0;
    double miss_penalty = 0.0;
    double ram = 0.0;
    double rom = 0.0;
    double total = 0.0;
    bool operator==(const L2Terms&) const = default;
};

struct EnergyReport {
    IcacheTerms ic;
    DcacheTerms dc;
    L2Terms l2;
    double misc = 0.0;
    double leak = 0.0;
    double cpi = 1.0;
    double total = 0.0; // (ic + dc + l2 + misc + leak) / cpi

    // The undivided sum of the five top-level terms.
    [[nodiscard]] double sum() const { return ic.total + dc.total + l2.total + misc + leak; }
    bool operator==(const EnergyReport&) const = default;
};

struct TimingReport {
    IcacheTerms ic;
    DcacheTerms dc;
    L2Terms l2;
    double ins = 0.0;
    double total = 0.0;
    bool operator==(const TimingReport&) const = default;
};

// Validation. Each throws InvalidParameterError naming the field as
// `<prefix>.<field>`.
void validate(const CacheTechParams& tech, std::string_view prefix = "tech");
void validate(const MemoryTechParams& mem, std::string_view prefix = "memory");
void validate(const ProcessorParams& proc, std::string_view prefix = "processor");
void validate(const AccessCounts& counts, std::string_view prefix = "counts");

// Energy.
IcacheTerms icache_energy(const AccessCounts& counts, const CacheTechParams& tech,
                          const ProcessorParams& proc);
DcacheTerms dcache_energy(const AccessCounts& counts, const CacheTechParams& tech,
                          const ProcessorParams& proc);
L2Terms l2_energy(const AccessCounts& counts, const CacheTechParams& tech,
                  const MemoryTechParams& mem, const ProcessorParams& proc,
                  L2MissConvention convention = L2MissConvention::AllTransactions);
double leakage_energy(const ProcessorParams& proc, const AccessCounts& counts);

// total_cycles / instruction_count. Throws MissingCpiError when
// instruction_count is zero.
double compute_cpi(const AccessCounts& counts);

// CPI used by the end-to-end pipeline: the override if present, otherwise
// compute_cpi. An empty workload (no instructions and no cycles) resolves to
// 1.
double resolve_cpi(const AccessCounts& counts, std::optional<double> cpi_override);

EnergyReport total_energy(const IcacheTerms& ic, const DcacheTerms& dc, const L2Terms& l2,
                          double misc, double leak, double cpi);

// Approximate E_misc as cycle_energy * max(0, total_cycles - data accesses).
// Opt-in only; the models otherwise take E_misc as a direct input.
double estimate_misc_energy(const AccessCounts& counts, const ProcessorParams& proc);

// Timing.
IcacheTerms icache_time(const AccessCounts& counts, const CacheTechParams& tech,
                        const ProcessorParams& proc);
DcacheTerms dcache_time(const AccessCounts& counts, const CacheTechParams& tech,
                        const ProcessorParams& proc);
L2Terms l2_time(const AccessCounts& counts, const CacheTechParams& tech,
                const MemoryTechParams& mem, const ProcessorParams& proc,
                L2MissConvention convention = L2MissConvention::AllTransactions);

// cycle_time * total_cycles - ic_read_time. Throws InconsistentCountsError
// if the result would be negative.
double ins_time(const AccessCounts& counts, const ProcessorParams& proc, double ic_read_time);

TimingReport total_time(const IcacheTerms& ic, const DcacheTerms& dc, const L2Terms& l2,
                        double ins);

// Everything needed to evaluate both models once.
struct ModelInputs {
    AccessCounts counts;
    CacheTechParams l1i;
    CacheTechParams l1d;
    CacheTechParams l2;
    MemoryTechParams memory;
    ProcessorParams processor;
    double misc_energy = 0.0;
    double cpi = 1.0;
    L2MissConvention convention = L2MissConvention::AllTransactions;
};

struct ModelResult {
    EnergyReport energy;
    TimingReport timing;
    bool operator==(const ModelResult&) const = default;
};

ModelResult evaluate(const ModelInputs& inputs);

} // namespace cachemodel
