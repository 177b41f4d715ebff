#pragma once

// Naive reference hierarchy: every set is a std::list ordered most recently
// used first, lookups are linear scans and set indices use plain modulo. It
// is deliberately slow and shares no code with src/cache.cpp or
// src/hierarchy.cpp.

#include "cachemodel/cache_sim.hpp"
#include "cachemodel/trace_record.hpp"

#include <algorithm>
#include <cstdint>
#include <list>
#include <optional>
#include <vector>

namespace oracle {

struct RefLine {
    std::uint64_t line_number;
    bool dirty;
};

struct RefOutcome {
    bool hit = false;
    bool allocated = false;
    std::optional<RefLine> victim;
};

class RefCache {
public:
    RefCache(std::uint64_t size, std::uint64_t line_size, std::uint32_t assoc, bool write_back)
        : line_size_(line_size), write_back_(write_back) {
        const std::uint64_t lines = size / line_size;
        ways_ = assoc == 0 ? lines : assoc;
        sets_.resize(lines / ways_);
    }

    explicit RefCache(const cachemodel::CacheConfig& c)
        : RefCache(c.size, c.line_size, c.associativity,
                   c.write_policy == cachemodel::WritePolicy::WriteBackAllocate) {}

    RefOutcome access(std::uint64_t address, bool is_write) {
        const std::uint64_t ln = address / line_size_;
        std::list<RefLine>& set = sets_[ln % sets_.size()];
        RefOutcome out;
        auto it = std::find_if(set.begin(), set.end(),
                               [&](const RefLine& l) { return l.line_number == ln; });
        if (it != set.end()) {
            out.hit = true;
            RefLine l = *it;
            set.erase(it);
            if (is_write && write_back_) {
                l.dirty = true;
            }
            set.push_front(l);
            return out;
        }
        if (is_write && !write_back_) {
            return out;
        }
        out.allocated = true;
        if (set.size() == ways_) {
            out.victim = set.back();
            set.pop_back();
        }
        set.push_front(RefLine{ln, is_write});
        return out;
    }

    [[nodiscard]] std::uint64_t line_size() const { return line_size_; }

private:
    std::uint64_t line_size_;
    std::uint64_t ways_;
    bool write_back_;
    std::vector<std::list<RefLine>> sets_;
};

struct RefCosts {
    std::uint64_t base = 1, l1_hit = 0, l2_hit = 0;
    std::uint64_t ic_miss = 10, dc_rmiss = 10, dc_wmiss = 10, l2_rmiss = 100, l2_wmiss = 100;
};

// Replays a trace and returns per-core counts.
inline std::vector<cachemodel::AccessCounts>
reference_simulate(const std::vector<cachemodel::TraceRecord>& trace,
                   const cachemodel::HierarchyConfig& cfg, const RefCosts& k = {}) {
    using cachemodel::AccessKind;
    std::vector<RefCache> l1i, l1d;
    for (std::uint32_t c = 0; c < cfg.core_count; ++c) {
        l1i.emplace_back(cfg.l1i);
        l1d.emplace_back(cfg.l1d);
    }
    RefCache l2(cfg.l2);
    const bool l1d_wt = cfg.l1d.write_policy == cachemodel::WritePolicy::WriteThroughNoAllocate;
    const bool l2_wt = cfg.l2.write_policy == cachemodel::WritePolicy::WriteThroughNoAllocate;
    std::vector<cachemodel::AccessCounts> n(cfg.core_count);

    auto l2_read = [&](cachemodel::AccessCounts& c, std::uint64_t addr, bool code) {
        c.total_cycles += k.l2_hit;
        const RefOutcome o = l2.access(addr, false);
        if (o.hit) {
            return;
        }
        c.l2_read_misses += 1;
        c.total_cycles += k.l2_rmiss;
        if (code) {
            c.rom_reads += 1;
        } else {
            c.ram_reads += 1;
        }
        if (o.victim && o.victim->dirty) {
            c.ram_writes += 1;
        }
    };
    auto l2_write = [&](cachemodel::AccessCounts& c, std::uint64_t addr) {
        c.l2_data_writes += 1;
        c.total_cycles += k.l2_hit;
        const RefOutcome o = l2.access(addr, true);
        if (!o.hit) {
            c.l2_write_misses += 1;
            c.total_cycles += k.l2_wmiss;
        }
        if (l2_wt || (o.victim && o.victim->dirty)) {
            c.ram_writes += 1;
        }
    };

    // Round robin: repeatedly take the next unconsumed record of core 0, 1, ...
    std::vector<std::size_t> order;
    if (cfg.interleave == cachemodel::InterleavePolicy::Timestamp) {
        for (std::size_t i = 0; i < trace.size(); ++i) {
            order.push_back(i);
        }
    } else {
        std::vector<std::size_t> cursor(cfg.core_count, 0);
        while (order.size() < trace.size()) {
            for (std::uint32_t core = 0; core < cfg.core_count; ++core) {
                std::size_t& i = cursor[core];
                while (i < trace.size() && trace[i].core != core) {
                    ++i;
                }
                if (i < trace.size()) {
                    order.push_back(i);
                    ++i;
                }
            }
        }
    }

    for (std::size_t i : order) {
        const cachemodel::TraceRecord& r = trace[i];
        cachemodel::AccessCounts& c = n[r.core];
        c.total_cycles += k.base + k.l1_hit;
        if (r.kind == AccessKind::IFetch) {
            c.instruction_count += 1;
            c.ic_reads += 1;
            if (!l1i[r.core].access(r.address, false).hit) {
                c.ic_read_misses += 1;
                c.total_cycles += k.ic_miss;
                c.l2_ifetches += 1;
                l2_read(c, r.address, true);
            }
            continue;
        }
        const bool is_write = r.kind == AccessKind::Write;
        RefCache& d = l1d[r.core];
        const RefOutcome o = d.access(r.address, is_write);
        if (is_write) {
            c.dc_writes += 1;
        } else {
            c.dc_reads += 1;
        }
        if (!o.hit) {
            if (is_write) {
                c.dc_write_misses += 1;
                c.total_cycles += k.dc_wmiss;
            } else {
                c.dc_read_misses += 1;
                c.total_cycles += k.dc_rmiss;
            }
        }
        if (is_write && l1d_wt) {
            l2_write(c, r.address);
            continue;
        }
        if (o.allocated) {
            c.l2_data_reads += 1;
            l2_read(c, r.address, false);
        }
        if (o.victim && o.victim->dirty) {
            l2_write(c, o.victim->line_number * d.line_size());
        }
    }
    return n;
}

inline cachemodel::AccessCounts sum(const std::vector<cachemodel::AccessCounts>& v) {
    cachemodel::AccessCounts s;
    for (const auto& c : v) {
        s += c;
    }
    return s;
}

} // namespace oracle
