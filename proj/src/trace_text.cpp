#include "cachemodel/trace_io.hpp"

#include "cachemodel/error.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace cachemodel {

namespace {

constexpr std::string_view kDirective = "#!ctrace";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

template <typename T>
bool parse_uint(std::string_view text, T& out, int base) {
    if (text.empty()) {
        return false;
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, base);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace

void TextTraceReader::parse_directive(std::string_view text) {
    auto fail = [&](std::string_view token, const std::string& msg) {
        throw ParseError(line_number_, std::string(token),
                         "line " + std::to_string(line_number_) + ": " + msg);
    };
    if (records_ > 0 || has_header_) {
        fail(text, "header directive must precede all records");
    }
    has_header_ = true;
    bool saw_version = false;
    for (std::string_view tok : split_ws(text.substr(kDirective.size()))) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) {
            fail(tok, "malformed header field '" + std::string(tok) + "'");
        }
        const std::string_view key = tok.substr(0, eq);
        const std::string_view value = tok.substr(eq + 1);
        if (key == "version") {
            if (!parse_uint(value, header_.version, 10)) {
                fail(tok, "bad version '" + std::string(value) + "'");
            }
            if (header_.version != 1) {
                fail(tok, "unsupported trace version " + std::to_string(header_.version));
            }
            saw_version = true;
        } else if (key == "records") {
            std::uint64_t n = 0;
            if (!parse_uint(value, n, 10)) {
                fail(tok, "bad record count '" + std::string(value) + "'");
            }
            header_.record_count = n;
        } else if (key == "cores") {
            std::uint32_t n = 0;
            if (!parse_uint(value, n, 10) || n == 0) {
                fail(tok, "bad core count '" + std::string(value) + "'");
            }
            header_.core_count = n;
        } else {
            fail(tok, "unknown header field '" + std::string(key) + "'");
        }
    }
    if (!saw_version) {
        fail(text, "header directive lacks version");
    }
}

std::optional<TraceRecord> TextTraceReader::next() {
    if (done_) {
        return std::nullopt;
    }
    std::string line;
    while (std::getline(in_, line)) {
        ++line_number_;
        std::string_view view = trim(line);
        if (view.starts_with(kDirective)) {
            parse_directive(view);
            continue;
        }
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = trim(view.substr(0, hash));
        }
        if (view.empty()) {
            continue;
        }

        auto fail = [&](std::string_view token, const std::string& msg) {
            throw ParseError(line_number_, std::string(token),
                             "line " + std::to_string(line_number_) + ": " + msg);
        };
        const auto tokens = split_ws(view);
        if (tokens.size() < 2 || tokens.size() > 3) {
            fail(view, "expected '<kind> <hex-address> [core]'");
        }
        TraceRecord rec;
        const std::optional<AccessKind> kind =
            tokens[0].size() == 1 ? kind_from_letter(tokens[0][0]) : std::nullopt;
        if (!kind) {
            fail(tokens[0], "unknown kind '" + std::string(tokens[0]) + "'");
        }
        rec.kind = *kind;
        std::string_view addr = tokens[1];
        if (addr.starts_with("0x") || addr.starts_with("0X")) {
            addr.remove_prefix(2);
        }
        if (addr.size() > 16 || !parse_uint(addr, rec.address, 16)) {
            fail(tokens[1], "non-hex address '" + std::string(tokens[1]) + "'");
        }
        if (tokens.size() == 3 && !parse_uint(tokens[2], rec.core, 10)) {
            fail(tokens[2], "bad core index '" + std::string(tokens[2]) + "'");
        }
        ++records_;
        return rec;
    }
    done_ = true;
    if (header_.record_count && *header_.record_count != records_) {
        throw ParseError(line_number_, "",
                         "header declares " + std::to_string(*header_.record_count) +
                             " records but the body has " + std::to_string(records_));
    }
    return std::nullopt;
}

std::vector<TraceRecord> parse_text_trace(std::istream& in) {
    TextTraceReader reader(in);
    std::vector<TraceRecord> out;
    while (auto rec = reader.next()) {
        out.push_back(*rec);
    }
    return out;
}

std::vector<TraceRecord> parse_text_trace(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_text_trace(in);
}

void write_text_trace(std::ostream& out, std::span<const TraceRecord> records,
                      const std::optional<TraceFileHeader>& header) {
    if (header) {
        out << kDirective << " version=" << header->version;
        if (header->record_count) {
            out << " records=" << *header->record_count;
        }
        if (header->core_count) {
            out << " cores=" << *header->core_count;
        }
        out << '\n';
    }
    char buf[32];
    for (const TraceRecord& r : records) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), r.address, 16);
        out << kind_letter(r.kind) << " 0x" << std::string_view(buf, res.ptr - buf) << ' '
            << r.core << '\n';
    }
}

} // namespace cachemodel
