#include "cachemodel/trace_io.hpp"

#include "cachemodel/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace cachemodel {

namespace {

std::size_t read_fully(std::istream& in, char* buf, std::size_t n) {
    in.read(buf, static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount());
}

} // namespace

BinaryTraceReader::BinaryTraceReader(std::istream& in, bool strict) : in_(in), strict_(strict) {
    std::array<char, 8> magic{};
    const std::size_t got = read_fully(in_, magic.data(), magic.size());
    if (got != magic.size() || magic != kBinaryTraceMagic) {
        throw ParseError(0, "", "bad magic: not a CTRC v1 binary trace");
    }
    offset_ = magic.size();
}

std::optional<TraceRecord> BinaryTraceReader::next() {
    std::array<unsigned char, kBinaryRecordSize> buf{};
    const std::size_t got = read_fully(in_, reinterpret_cast<char*>(buf.data()), buf.size());
    if (got == 0) {
        return std::nullopt;
    }
    if (got != buf.size()) {
        throw ParseError(offset_, "",
                         "truncated record at byte offset " + std::to_string(offset_) + " (" +
                             std::to_string(got) + " of 16 bytes)");
    }
    if (buf[0] > 2) {
        throw ParseError(offset_, std::to_string(buf[0]),
                         "unknown kind " + std::to_string(buf[0]) + " at byte offset " +
                             std::to_string(offset_));
    }
    if (strict_ && std::any_of(buf.begin() + 2, buf.begin() + 8, [](unsigned char b) { return b != 0; })) {
        throw ParseError(offset_, "", "nonzero reserved bytes at byte offset " +
                                          std::to_string(offset_));
    }
    TraceRecord rec;
    rec.kind = static_cast<AccessKind>(buf[0]);
    rec.core = buf[1];
    for (int i = 7; i >= 0; --i) {
        rec.address = (rec.address << 8) | buf[8 + i];
    }
    offset_ += buf.size();
    return rec;
}

std::vector<TraceRecord> parse_binary_trace(std::istream& in, bool strict) {
    BinaryTraceReader reader(in, strict);
    std::vector<TraceRecord> out;
    while (auto rec = reader.next()) {
        out.push_back(*rec);
    }
    return out;
}

void write_binary_trace(std::ostream& out, std::span<const TraceRecord> records) {
    out.write(kBinaryTraceMagic.data(), kBinaryTraceMagic.size());
    std::array<char, kBinaryRecordSize> buf{};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TraceRecord& r = records[i];
        if (r.core > 0xff) {
            throw TraceError(i, "core " + std::to_string(r.core) +
                                    " does not fit the binary format's 1-byte core field");
        }
        buf.fill(0);
        buf[0] = static_cast<char>(r.kind);
        buf[1] = static_cast<char>(r.core);
        for (int b = 0; b < 8; ++b) {
            buf[8 + b] = static_cast<char>((r.address >> (8 * b)) & 0xff);
        }
        out.write(buf.data(), buf.size());
    }
}

std::vector<TraceRecord> read_trace_file(const std::filesystem::path& path, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot open trace file '" + path.string() + "'");
    }
    std::array<char, 8> head{};
    in.read(head.data(), head.size());
    const bool binary = in.gcount() == 8 && head == kBinaryTraceMagic;
    in.clear();
    in.seekg(0);
    return binary ? parse_binary_trace(in, strict) : parse_text_trace(in);
}

void write_trace_file(const std::filesystem::path& path, std::span<const TraceRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("io", "cannot open '" + path.string() + "' for writing");
    }
    if (path.extension() == ".ctrc") {
        write_binary_trace(out, records);
    } else {
        write_text_trace(out, records);
    }
    if (!out) {
        throw Error("io", "failed writing '" + path.string() + "'");
    }
}

} // namespace cachemodel
