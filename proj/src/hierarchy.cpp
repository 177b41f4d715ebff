#include "cachemodel/cache_sim.hpp"

#include "cachemodel/error.hpp"

#include <deque>
#include <string>

namespace cachemodel {

namespace {

enum class Origin { Code, Data };

class Hierarchy {
public:
    Hierarchy(const HierarchyConfig& config, const CycleCostTable& costs)
        : config_(config), costs_(costs), l2_(config.l2) {
        l1i_.reserve(config.core_count);
        l1d_.reserve(config.core_count);
        for (std::uint32_t c = 0; c < config.core_count; ++c) {
            l1i_.emplace_back(config.l1i);
            l1d_.emplace_back(config.l1d);
        }
        counts_.resize(config.core_count);
    }

    void step(const TraceRecord& record) {
        AccessCounts& n = counts_[record.core];
        n.total_cycles += costs_.base_cost + costs_.l1_hit_latency;
        switch (record.kind) {
        case AccessKind::IFetch:
            fetch(n, record);
            break;
        case AccessKind::Read:
            read(n, record);
            break;
        case AccessKind::Write:
            write(n, record);
            break;
        }
    }

    SimResult finish() && {
        SimResult r;
        r.per_core = std::move(counts_);
        for (const AccessCounts& c : r.per_core) {
            r.aggregate += c;
        }
        for (std::uint32_t c = 0; c < config_.core_count; ++c) {
            r.l1i.push_back(l1i_[c].stats());
            r.l1d.push_back(l1d_[c].stats());
        }
        r.l2 = l2_.stats();
        return r;
    }

private:
    void fetch(AccessCounts& n, const TraceRecord& rec) {
        ++n.instruction_count;
        ++n.ic_reads;
        const AccessOutcome o = l1i_[rec.core].access(rec.address, AccessType::Read);
        if (o.hit) {
            return;
        }
        ++n.ic_read_misses;
        n.total_cycles += costs_.ic_read_miss_penalty;
        ++n.l2_ifetches;
        l2_read(n, rec.address, Origin::Code);
    }

    void read(AccessCounts& n, const TraceRecord& rec) {
        ++n.dc_reads;
        const AccessOutcome o = l1d_[rec.core].access(rec.address, AccessType::Read);
        if (o.hit) {
            return;
        }
        ++n.dc_read_misses;
        n.total_cycles += costs_.dc_read_miss_penalty;
        ++n.l2_data_reads;
        l2_read(n, rec.address, Origin::Data);
        write_back_victim(n, o);
    }

    void write(AccessCounts& n, const TraceRecord& rec) {
        ++n.dc_writes;
        const AccessOutcome o = l1d_[rec.core].access(rec.address, AccessType::Write);
        if (!o.hit) {
            ++n.dc_write_misses;
            n.total_cycles += costs_.dc_write_miss_penalty;
        }
        if (config_.l1d.write_policy == WritePolicy::WriteThroughNoAllocate) {
            ++n.l2_data_writes;
            l2_write(n, rec.address);
            return;
        }
        if (o.allocated) {
            ++n.l2_data_reads; // write-allocate fill
            l2_read(n, rec.address, Origin::Data);
        }
        write_back_victim(n, o);
    }

    void write_back_victim(AccessCounts& n, const AccessOutcome& o) {
        if (o.evicted && o.evicted->dirty) {
            ++n.l2_data_writes;
            l2_write(n, o.evicted->line_address);
        }
    }

    void l2_read(AccessCounts& n, std::uint64_t address, Origin origin) {
        n.total_cycles += costs_.l2_hit_latency;
        const AccessOutcome o = l2_.access(address, AccessType::Read);
        if (o.hit) {
            return;
        }
        ++n.l2_read_misses;
        n.total_cycles += costs_.l2_read_miss_penalty;
        ++(origin == Origin::Code ? n.rom_reads : n.ram_reads);
        if (o.evicted && o.evicted->dirty) {
            ++n.ram_writes;
        }
    }

    void l2_write(AccessCounts& n, std::uint64_t address) {
        n.total_cycles += costs_.l2_hit_latency;
        const AccessOutcome o = l2_.access(address, AccessType::Write);
        if (!o.hit) {
            ++n.l2_write_misses;
            n.total_cycles += costs_.l2_write_miss_penalty;
        }
        if (config_.l2.write_policy == WritePolicy::WriteThroughNoAllocate) {
            ++n.ram_writes;
        } else if (o.evicted && o.evicted->dirty) {
            ++n.ram_writes;
        }
    }

    const HierarchyConfig& config_;
    const CycleCostTable& costs_;
    std::vector<Cache> l1i_;
    std::vector<Cache> l1d_;
    Cache l2_;
    std::vector<AccessCounts> counts_;
};

void check_cores(std::span<const TraceRecord> trace, std::uint32_t core_count) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i].core >= core_count) {
            throw TraceError(i, "core " + std::to_string(trace[i].core) +
                                    " out of range for " + std::to_string(core_count) +
                                    " core(s)");
        }
    }
}

} // namespace

std::vector<std::size_t> interleave_order(std::span<const TraceRecord> trace,
                                          const HierarchyConfig& config) {
    check_cores(trace, config.core_count);
    std::vector<std::size_t> order;
    order.reserve(trace.size());
    if (config.interleave == InterleavePolicy::Timestamp || config.core_count == 1) {
        for (std::size_t i = 0; i < trace.size(); ++i) {
            order.push_back(i);
        }
        return order;
    }
    std::vector<std::deque<std::size_t>> queues(config.core_count);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        queues[trace[i].core].push_back(i);
    }
    while (order.size() < trace.size()) {
        for (auto& q : queues) {
            if (!q.empty()) {
                order.push_back(q.front());
                q.pop_front();
            }
        }
    }
    return order;
}

SimResult simulate(std::span<const TraceRecord> trace, const HierarchyConfig& config,
                   const CycleCostTable& costs) {
    validate(config);
    Hierarchy h(config, costs);
    for (std::size_t i : interleave_order(trace, config)) {
        h.step(trace[i]);
    }
    return std::move(h).finish();
}

DerivedCounts derive_counts(const SimResult& result, double idle_time,
                            std::optional<double> cpi_override) {
    AccessCounts sum;
    for (const AccessCounts& c : result.per_core) {
        sum += c;
    }
    if (!(sum == result.aggregate)) {
        throw ConsistencyError("aggregate counts differ from the per-core sum");
    }
    auto check_tally = [](const CacheStats& s, const std::string& name) {
        if (s.hits + s.misses != s.lookups || s.read_lookups + s.write_lookups != s.lookups ||
            s.read_misses + s.write_misses != s.misses) {
            throw ConsistencyError(name + ": hit/miss tallies do not add up");
        }
    };
    for (std::size_t c = 0; c < result.l1i.size(); ++c) {
        check_tally(result.l1i[c], "l1i[" + std::to_string(c) + "]");
    }
    for (std::size_t c = 0; c < result.l1d.size(); ++c) {
        check_tally(result.l1d[c], "l1d[" + std::to_string(c) + "]");
    }
    check_tally(result.l2, "l2");

    DerivedCounts out;
    out.counts = result.aggregate;
    out.counts.idle_time = idle_time;
    try {
        validate(out.counts);
    } catch (const InvalidParameterError& e) {
        if (e.field() == "counts.idle_time") {
            throw;
        }
        throw ConsistencyError(std::string("simulator produced invalid counts: ") + e.what());
    }
    out.cpi = resolve_cpi(out.counts, cpi_override);
    return out;
}

} // namespace cachemodel
