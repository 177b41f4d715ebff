#include "cachemodel/model.hpp"

#include "cachemodel/error.hpp"

#include <cmath>
#include <string>

namespace cachemodel {

namespace {

// Counts above 2^53 no longer convert to double exactly.
constexpr std::uint64_t kMaxExactCount = std::uint64_t{1} << 53;

std::string join(std::string_view prefix, std::string_view field) {
    std::string out(prefix);
    out += '.';
    out += field;
    return out;
}

void require_non_negative(double value, std::string_view prefix, std::string_view field) {
    if (!std::isfinite(value) || value < 0.0) {
        throw InvalidParameterError(join(prefix, field),
                                    "must be finite and >= 0, got " + std::to_string(value));
    }
}

void require_exact(std::uint64_t value, std::string_view prefix, std::string_view field) {
    if (value > kMaxExactCount) {
        throw InvalidParameterError(join(prefix, field), "count exceeds 2^53");
    }
}

double as_real(std::uint64_t count) { return static_cast<double>(count); }

} // namespace

AccessCounts& AccessCounts::operator+=(const AccessCounts& other) {
    ic_reads += other.ic_reads;
    ic_read_misses += other.ic_read_misses;
    dc_reads += other.dc_reads;
    dc_writes += other.dc_writes;
    dc_read_misses += other.dc_read_misses;
    dc_write_misses += other.dc_write_misses;
    l2_ifetches += other.l2_ifetches;
    l2_data_reads += other.l2_data_reads;
    l2_data_writes += other.l2_data_writes;
    l2_read_misses += other.l2_read_misses;
    l2_write_misses += other.l2_write_misses;
    ram_reads += other.ram_reads;
    ram_writes += other.ram_writes;
    rom_reads += other.rom_reads;
    total_cycles += other.total_cycles;
    instruction_count += other.instruction_count;
    idle_time += other.idle_time;
    return *this;
}

std::string_view to_string(L2MissConvention convention) {
    switch (convention) {
    case L2MissConvention::AllTransactions:
        return "all-transactions";
    case L2MissConvention::MissesOnly:
        return "misses-only";
    }
    return "all-transactions";
}

std::optional<L2MissConvention> parse_l2_miss_convention(std::string_view text) {
    if (text == "all-transactions") {
        return L2MissConvention::AllTransactions;
    }
    if (text == "misses-only") {
        return L2MissConvention::MissesOnly;
    }
    return std::nullopt;
}

void validate(const CacheTechParams& tech, std::string_view prefix) {
    require_non_negative(tech.read_cycle_energy, prefix, "read_cycle_energy");
    require_non_negative(tech.write_cycle_energy, prefix, "write_cycle_energy");
    require_non_negative(tech.read_cycle_time, prefix, "read_cycle_time");
    require_non_negative(tech.write_cycle_time, prefix, "write_cycle_time");
}

void validate(const MemoryTechParams& mem, std::string_view prefix) {
    require_non_negative(mem.ram_read_energy, prefix, "ram_read_energy");
    require_non_negative(mem.ram_write_energy, prefix, "ram_write_energy");
    require_non_negative(mem.rom_read_energy, prefix, "rom_read_energy");
    require_non_negative(mem.ram_read_time, prefix, "ram_read_time");
    require_non_negative(mem.ram_write_time, prefix, "ram_write_time");
    require_non_negative(mem.rom_read_time, prefix, "rom_read_time");
}

void validate(const ProcessorParams& proc, std::string_view prefix) {
    require_non_negative(proc.cycle_energy, prefix, "cycle_energy");
    if (!std::isfinite(proc.cycle_time) || proc.cycle_time <= 0.0) {
        throw InvalidParameterError(join(prefix, "cycle_time"), "must be finite and > 0");
    }
    require_non_negative(proc.leak_power, prefix, "leak_power");
    require_non_negative(proc.ic_read_miss_penalty, prefix, "ic_read_miss_penalty");
    require_non_negative(proc.dc_read_miss_penalty, prefix, "dc_read_miss_penalty");
    require_non_negative(proc.dc_write_miss_penalty, prefix, "dc_write_miss_penalty");
    require_non_negative(proc.l2_read_miss_penalty, prefix, "l2_read_miss_penalty");
    require_non_negative(proc.l2_write_miss_penalty, prefix, "l2_write_miss_penalty");
    if (proc.core_count < 1) {
        throw InvalidParameterError(join(prefix, "core_count"), "must be >= 1");
    }
}

void validate(const AccessCounts& c, std::string_view prefix) {
    require_exact(c.ic_reads, prefix, "ic_reads");
    require_exact(c.ic_read_misses, prefix, "ic_read_misses");
    require_exact(c.dc_reads, prefix, "dc_reads");
    require_exact(c.dc_writes, prefix, "dc_writes");
    require_exact(c.dc_read_misses, prefix, "dc_read_misses");
    require_exact(c.dc_write_misses, prefix, "dc_write_misses");
    require_exact(c.l2_ifetches, prefix, "l2_ifetches");
    require_exact(c.l2_data_reads, prefix, "l2_data_reads");
    require_exact(c.l2_data_writes, prefix, "l2_data_writes");
    require_exact(c.l2_read_misses, prefix, "l2_read_misses");
    require_exact(c.l2_write_misses, prefix, "l2_write_misses");
    require_exact(c.ram_reads, prefix, "ram_reads");
    require_exact(c.ram_writes, prefix, "ram_writes");
    require_exact(c.rom_reads, prefix, "rom_reads");
    require_exact(c.total_cycles, prefix, "total_cycles");
    require_exact(c.instruction_count, prefix, "instruction_count");
    require_non_negative(c.idle_time, prefix, "idle_time");

    if (c.ic_read_misses > c.ic_reads) {
        throw InvalidParameterError(join(prefix, "ic_read_misses"), "exceeds ic_reads");
    }
    if (c.dc_read_misses > c.dc_reads) {
        throw InvalidParameterError(join(prefix, "dc_read_misses"), "exceeds dc_reads");
    }
    if (c.dc_write_misses > c.dc_writes) {
        throw InvalidParameterError(join(prefix, "dc_write_misses"), "exceeds dc_writes");
    }
    if (c.l2_read_misses > c.l2_ifetches + c.l2_data_reads) {
        throw InvalidParameterError(join(prefix, "l2_read_misses"),
                                    "exceeds l2_ifetches + l2_data_reads");
    }
    if (c.l2_write_misses > c.l2_data_writes) {
        throw InvalidParameterError(join(prefix, "l2_write_misses"), "exceeds l2_data_writes");
    }
}

IcacheTerms icache_energy(const AccessCounts& counts, const CacheTechParams& tech,
                          const ProcessorParams& proc) {
    validate(counts);
    validate(tech, "l1i");
    validate(proc);
    IcacheTerms t;
    t.read = tech.read_cycle_energy * as_real(counts.ic_reads);
    t.miss_penalty =
        proc.cycle_energy * proc.ic_read_miss_penalty * as_real(counts.ic_read_misses);
    t.total = t.read + t.miss_penalty;
    return t;
}

DcacheTerms dcache_energy(const AccessCounts& counts, const CacheTechParams& tech,
                          const ProcessorParams& proc) {
    validate(counts);
    validate(tech, "l1d");
    validate(proc);
    DcacheTerms t;
    t.read = tech.read_cycle_energy * as_real(counts.dc_reads);
    t.write = tech.write_cycle_energy * as_real(counts.dc_writes);
    t.miss_penalty = proc.cycle_energy *
                     (proc.dc_read_miss_penalty * as_real(counts.dc_read_misses) +
                      proc.dc_write_miss_penalty * as_real(counts.dc_write_misses));
    t.total = t.read + t.write + t.miss_penalty;
    return t;
}

namespace {

// The cycle count charged by the L2 miss-penalty term under `convention`.
double l2_penalty_cycles(const AccessCounts& counts, const ProcessorParams& proc,
                         L2MissConvention convention) {
    if (convention == L2MissConvention::MissesOnly) {
        return proc.l2_read_miss_penalty * as_real(counts.l2_read_misses) +
               proc.l2_write_miss_penalty * as_real(counts.l2_write_misses);
    }
    return proc.l2_read_miss_penalty * as_real(counts.l2_ifetches + counts.l2_data_reads) +
           proc.l2_write_miss_penalty * as_real(counts.l2_data_writes);
}

} // namespace

L2Terms l2_energy(const AccessCounts& counts, const CacheTechParams& tech,
                  const MemoryTechParams& mem, const ProcessorParams& proc,
                  L2MissConvention convention) {
    validate(counts);
    validate(tech, "l2");
    validate(mem);
    validate(proc);
    L2Terms t;
    t.read = tech.read_cycle_energy * as_real(counts.l2_ifetches + counts.l2_data_reads);
    t.write = tech.write_cycle_energy * as_real(counts.l2_data_writes);
    t.miss_penalty = proc.cycle_energy * l2_penalty_cycles(counts, proc, convention);
    t.ram = mem.ram_read_energy * as_real(counts.ram_reads) +
            mem.ram_write_energy * as_real(counts.ram_writes);
    t.rom = mem.rom_read_energy * as_real(counts.rom_reads);
    t.total = t.read + t.write + t.miss_penalty + t.ram + t.rom;
    return t;
}

double leakage_energy(const ProcessorParams& proc, const AccessCounts& counts) {
    validate(proc);
    require_non_negative(counts.idle_time, "counts", "idle_time");
    return proc.leak_power * counts.idle_time;
}

double compute_cpi(const AccessCounts& counts) {
    if (counts.instruction_count == 0) {
        throw MissingCpiError();
    }
    return as_real(counts.total_cycles) / as_real(counts.instruction_count);
}

double resolve_cpi(const AccessCounts& counts, std::optional<double> cpi_override) {
    if (cpi_override) {
        if (!std::isfinite(*cpi_override) || *cpi_override <= 0.0) {
            throw InvalidParameterError("model.cpi", "must be finite and > 0");
        }
        return *cpi_override;
    }
    if (counts.instruction_count == 0 && counts.total_cycles == 0) {
        return 1.0;
    }
    return compute_cpi(counts);
}

EnergyReport total_energy(const IcacheTerms& ic, const DcacheTerms& dc, const L2Terms& l2,
                          double misc, double leak, double cpi) {
    if (!std::isfinite(cpi) || cpi <= 0.0) {
        throw InvalidParameterError("cpi", "must be finite and > 0");
    }
    require_non_negative(misc, "energy", "misc");
    require_non_negative(leak, "energy", "leak");
    EnergyReport r;
    r.ic = ic;
    r.dc = dc;
    r.l2 = l2;
    r.misc = misc;
    r.leak = leak;
    r.cpi = cpi;
    r.total = r.sum() / cpi;
    return r;
}

double estimate_misc_energy(const AccessCounts& counts, const ProcessorParams& proc) {
    validate(counts);
    validate(proc);
    const std::uint64_t data_accesses = counts.dc_reads + counts.dc_writes;
    const std::uint64_t free_cycles =
        counts.total_cycles > data_accesses ? counts.total_cycles - data_accesses : 0;
    return proc.cycle_energy * as_real(free_cycles);
}

IcacheTerms icache_time(const AccessCounts& counts, const CacheTechParams& tech,
                        const ProcessorParams& proc) {
    validate(counts);
    validate(tech, "l1i");
    validate(proc);
    IcacheTerms t;
    t.read = tech.read_cycle_time * as_real(counts.ic_reads);
    t.miss_penalty =
        proc.cycle_time * proc.ic_read_miss_penalty * as_real(counts.ic_read_misses);
    t.total = t.read + t.miss_penalty;
    return t;
}

DcacheTerms dcache_time(const AccessCounts& counts, const CacheTechParams& tech,
                        const ProcessorParams& proc) {
    validate(counts);
    validate(tech, "l1d");
    validate(proc);
    DcacheTerms t;
    t.read = tech.read_cycle_time * as_real(counts.dc_reads);
    t.write = tech.write_cycle_time * as_real(counts.dc_writes);
    t.miss_penalty = proc.cycle_time *
                     (proc.dc_read_miss_penalty * as_real(counts.dc_read_misses) +
                      proc.dc_write_miss_penalty * as_real(counts.dc_write_misses));
    t.total = t.read + t.write + t.miss_penalty;
    return t;
}

L2Terms l2_time(const AccessCounts& counts, const CacheTechParams& tech,
                const MemoryTechParams& mem, const ProcessorParams& proc,
                L2MissConvention convention) {
    validate(counts);
    validate(tech, "l2");
    validate(mem);
    validate(proc);
    L2Terms t;
    t.read = tech.read_cycle_time * as_real(counts.l2_ifetches + counts.l2_data_reads);
    t.write = tech.write_cycle_time * as_real(counts.l2_data_writes);
    t.miss_penalty = proc.cycle_time * l2_penalty_cycles(counts, proc, convention);
    t.ram = mem.ram_read_time * as_real(counts.ram_reads) +
            mem.ram_write_time * as_real(counts.ram_writes);
    t.rom = mem.rom_read_time * as_real(counts.rom_reads);
    t.total = t.read + t.write + t.miss_penalty + t.ram + t.rom;
    return t;
}

double ins_time(const AccessCounts& counts, const ProcessorParams& proc, double ic_read_time) {
    validate(proc);
    require_non_negative(ic_read_time, "timing", "ic_read");
    const double busy = proc.cycle_time * as_real(counts.total_cycles);
    if (busy < ic_read_time) {
        throw InconsistentCountsError(
            "cycle_time * total_cycles (" + std::to_string(busy) +
            " s) is smaller than the instruction-cache read time (" +
            std::to_string(ic_read_time) + " s)");
    }
    return busy - ic_read_time;
}

TimingReport total_time(const IcacheTerms& ic, const DcacheTerms& dc, const L2Terms& l2,
                        double ins) {
    require_non_negative(ic.total, "timing", "ic.total");
    require_non_negative(dc.total, "timing", "dc.total");
    require_non_negative(l2.total, "timing", "l2.total");
    require_non_negative(ins, "timing", "ins");
    TimingReport r;
    r.ic = ic;
    r.dc = dc;
    r.l2 = l2;
    r.ins = ins;
    r.total = ic.total + dc.total + l2.total + ins;
    return r;
}

ModelResult evaluate(const ModelInputs& in) {
    ModelResult out;
    const IcacheTerms ic_e = icache_energy(in.counts, in.l1i, in.processor);
    const DcacheTerms dc_e = dcache_energy(in.counts, in.l1d, in.processor);
    const L2Terms l2_e = l2_energy(in.counts, in.l2, in.memory, in.processor, in.convention);
    const double leak = leakage_energy(in.processor, in.counts);
    out.energy = total_energy(ic_e, dc_e, l2_e, in.misc_energy, leak, in.cpi);

    const IcacheTerms ic_t = icache_time(in.counts, in.l1i, in.processor);
    const DcacheTerms dc_t = dcache_time(in.counts, in.l1d, in.processor);
    const L2Terms l2_t = l2_time(in.counts, in.l2, in.memory, in.processor, in.convention);
    const double ins = ins_time(in.counts, in.processor, ic_t.read);
    out.timing = total_time(ic_t, dc_t, l2_t, ins);
    return out;
}

} // namespace cachemodel
