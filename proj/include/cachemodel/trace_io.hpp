#pragma once

// Trace formats.
//
// Text (.trc): one record per line, `<kind> <hex-address> [core]` with kind
// one of I, R, W. `#` starts a comment, blank lines are ignored. An optional
// directive line `#!ctrace version=1 [records=N] [cores=M]` before the first
// record declares a header.
//
// Binary (.ctrc): 8-byte magic "CTRC\0\1\0\0", then 16-byte little-endian
// records: kind (0=I, 1=R, 2=W), core, 6 reserved zero bytes, 8-byte address.

#include "cachemodel/trace_record.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cachemodel {

struct TraceFileHeader {
    std::uint32_t version = 1;
    std::optional<std::uint64_t> record_count;
    std::optional<std::uint32_t> core_count;

    bool operator==(const TraceFileHeader&) const = default;
};

inline constexpr std::array<char, 8> kBinaryTraceMagic = {'C', 'T', 'R', 'C', 0, 1, 0, 0};
inline constexpr std::size_t kBinaryRecordSize = 16;

// Streaming text parser; holds one line at a time.
class TextTraceReader {
public:
    explicit TextTraceReader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of stream. Throws ParseError.
    std::optional<TraceRecord> next();

    [[nodiscard]] const TraceFileHeader& header() const { return header_; }
    [[nodiscard]] bool has_header() const { return has_header_; }

private:
    void parse_directive(std::string_view text);

    std::istream& in_;
    std::uint64_t line_number_ = 0;
    std::uint64_t records_ = 0;
    TraceFileHeader header_;
    bool has_header_ = false;
    bool done_ = false;
};

// Streaming binary parser. In strict mode nonzero reserved bytes are an error.
class BinaryTraceReader {
public:
    explicit BinaryTraceReader(std::istream& in, bool strict = true);

    std::optional<TraceRecord> next();

private:
    std::istream& in_;
    bool strict_;
    std::uint64_t offset_ = 0;
};

std::vector<TraceRecord> parse_text_trace(std::istream& in);
std::vector<TraceRecord> parse_text_trace(std::string_view text);
std::vector<TraceRecord> parse_binary_trace(std::istream& in, bool strict = true);

void write_text_trace(std::ostream& out, std::span<const TraceRecord> records,
                      const std::optional<TraceFileHeader>& header = std::nullopt);
void write_binary_trace(std::ostream& out, std::span<const TraceRecord> records);

// Reads either format; the binary magic decides.
std::vector<TraceRecord> read_trace_file(const std::filesystem::path& path, bool strict = true);
// `.ctrc` paths are written as binary, everything else as text.
void write_trace_file(const std::filesystem::path& path, std::span<const TraceRecord> records);

// Synthetic workloads. Each data record is preceded by `ifetch_per_data`
// instruction fetches walking a small code footprint.
struct SequentialPattern {};
struct StridedPattern {
    std::uint64_t stride_lines = 1;
};
struct RandomPattern {
    std::uint64_t seed = 1;
};
// Cycles over `size_lines` lines `iterations` times; emits
// size_lines * iterations data records and ignores SyntheticSpec::length.
struct LoopPattern {
    std::uint64_t size_lines = 1;
    std::uint64_t iterations = 1;
};

using Pattern = std::variant<SequentialPattern, StridedPattern, RandomPattern, LoopPattern>;

// Accepts "sequential", "strided:K", "random[:SEED]", "loop:SIZE:ITERATIONS".
// `default_seed` applies to a bare "random".
Pattern parse_pattern(std::string_view text, std::uint64_t default_seed = 1);
std::string to_string(const Pattern& pattern);

struct SyntheticSpec {
    Pattern pattern = SequentialPattern{};
    std::uint64_t length = 0; // data records per core
    std::uint32_t core_count = 1;
    std::uint64_t line_size = 64;
    std::uint32_t ifetch_per_data = 3;
    std::uint32_t write_every = 4; // every k-th data record is a write; 0 = reads only
    std::uint64_t data_base = 0;
    std::uint64_t core_stride = 0x10000000; // data region offset between cores
    std::uint64_t code_base = 0x400000;
    std::uint64_t code_footprint = 1024; // bytes of code fetched cyclically
    std::uint64_t random_footprint_lines = 4096;
};

// Deterministic for a given spec. Random addresses come from std::mt19937_64
// seeded with seed + core, reduced modulo the footprint.
std::vector<TraceRecord> generate_synthetic(const SyntheticSpec& spec);

} // namespace cachemodel
