#include "cachemodel/trace_io.hpp"

#include "cachemodel/error.hpp"

#include <charconv>
#include <random>

namespace cachemodel {

namespace {

std::uint64_t parse_positive(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("pattern: bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

// Produces the data-line index sequence for one core.
class LineSource {
public:
    LineSource(const Pattern& pattern, std::uint64_t footprint, std::uint32_t core)
        : pattern_(pattern), footprint_(footprint) {
        if (const auto* r = std::get_if<RandomPattern>(&pattern_)) {
            rng_.seed(r->seed + core);
        }
    }

    std::uint64_t line(std::uint64_t i) {
        return std::visit(
            [&](const auto& p) -> std::uint64_t {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, SequentialPattern>) {
                    return i;
                } else if constexpr (std::is_same_v<P, StridedPattern>) {
                    return i * p.stride_lines;
                } else if constexpr (std::is_same_v<P, RandomPattern>) {
                    return rng_() % footprint_;
                } else {
                    return i % p.size_lines;
                }
            },
            pattern_);
    }

private:
    const Pattern& pattern_;
    std::uint64_t footprint_;
    std::mt19937_64 rng_;
};

} // namespace

Pattern parse_pattern(std::string_view text, std::uint64_t default_seed) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    const std::string_view name = parts[0];
    if (name == "sequential" && parts.size() == 1) {
        return SequentialPattern{};
    }
    if (name == "strided" && parts.size() == 2) {
        const std::uint64_t k = parse_positive(parts[1], "stride");
        if (k == 0) {
            throw UsageError("pattern: stride must be positive");
        }
        return StridedPattern{k};
    }
    if (name == "random" && parts.size() <= 2) {
        return RandomPattern{parts.size() == 2 ? parse_positive(parts[1], "seed") : default_seed};
    }
    if (name == "loop" && parts.size() == 3) {
        const std::uint64_t size = parse_positive(parts[1], "loop size");
        const std::uint64_t iters = parse_positive(parts[2], "iteration count");
        if (size == 0 || iters == 0) {
            throw UsageError("pattern: loop size and iterations must be positive");
        }
        return LoopPattern{size, iters};
    }
    throw UsageError("unknown pattern '" + std::string(text) +
                     "' (expected sequential, strided:K, random[:SEED] or loop:SIZE:ITERATIONS)");
}

std::string to_string(const Pattern& pattern) {
    return std::visit(
        [](const auto& p) -> std::string {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, SequentialPattern>) {
                return "sequential";
            } else if constexpr (std::is_same_v<P, StridedPattern>) {
                return "strided:" + std::to_string(p.stride_lines);
            } else if constexpr (std::is_same_v<P, RandomPattern>) {
                return "random:" + std::to_string(p.seed);
            } else {
                return "loop:" + std::to_string(p.size_lines) + ":" + std::to_string(p.iterations);
            }
        },
        pattern);
}

std::vector<TraceRecord> generate_synthetic(const SyntheticSpec& spec) {
    if (spec.core_count < 1) {
        throw InvalidParameterError("synthetic.core_count", "must be >= 1");
    }
    if (spec.line_size == 0) {
        throw InvalidParameterError("synthetic.line_size", "must be positive");
    }
    if (spec.code_footprint < 4) {
        throw InvalidParameterError("synthetic.code_footprint", "must be at least 4 bytes");
    }
    if (std::holds_alternative<RandomPattern>(spec.pattern) && spec.random_footprint_lines == 0) {
        throw InvalidParameterError("synthetic.random_footprint_lines", "must be positive");
    }
    if (const auto* s = std::get_if<StridedPattern>(&spec.pattern); s && s->stride_lines == 0) {
        throw InvalidParameterError("synthetic.stride", "must be positive");
    }
    std::uint64_t data_records = spec.length;
    if (const auto* loop = std::get_if<LoopPattern>(&spec.pattern)) {
        if (loop->size_lines == 0 || loop->iterations == 0) {
            throw InvalidParameterError("synthetic.loop", "size and iterations must be positive");
        }
        data_records = loop->size_lines * loop->iterations;
    }

    std::vector<LineSource> sources;
    sources.reserve(spec.core_count);
    for (std::uint32_t c = 0; c < spec.core_count; ++c) {
        sources.emplace_back(spec.pattern, spec.random_footprint_lines, c);
    }
    std::vector<std::uint64_t> pc(spec.core_count, 0);

    std::vector<TraceRecord> out;
    out.reserve(data_records * spec.core_count * (1 + spec.ifetch_per_data));
    for (std::uint64_t i = 0; i < data_records; ++i) {
        for (std::uint32_t c = 0; c < spec.core_count; ++c) {
            for (std::uint32_t f = 0; f < spec.ifetch_per_data; ++f) {
                out.push_back({AccessKind::IFetch, spec.code_base + pc[c], c});
                pc[c] = (pc[c] + 4) % spec.code_footprint;
            }
            const bool write = spec.write_every != 0 && (i + 1) % spec.write_every == 0;
            const std::uint64_t address =
                spec.data_base + c * spec.core_stride + sources[c].line(i) * spec.line_size;
            out.push_back({write ? AccessKind::Write : AccessKind::Read, address, c});
        }
    }
    return out;
}

} // namespace cachemodel
