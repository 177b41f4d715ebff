#pragma once

#include <cstdint>
#include <optional>

namespace cachemodel {

enum class AccessKind : std::uint8_t { IFetch = 0, Read = 1, Write = 2 };

struct TraceRecord {
    AccessKind kind = AccessKind::Read;
    std::uint64_t address = 0; // raw byte address
    std::uint32_t core = 0;

    bool operator==(const TraceRecord&) const = default;
};

// Single-letter trace mnemonics: I, R, W.
char kind_letter(AccessKind kind);
std::optional<AccessKind> kind_from_letter(char letter);

} // namespace cachemodel
