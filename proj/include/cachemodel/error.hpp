#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cachemodel {

// Base class for every error raised by the library. `kind()` is the stable
// machine-readable tag used in the CLI's JSON error output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    [[nodiscard]] const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// A parameter violates its type invariant. `field()` names the offending field.
class InvalidParameterError : public Error {
public:
    InvalidParameterError(std::string field, const std::string& message)
        : Error("invalid-parameter", field + ": " + message), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

class MissingCpiError : public Error {
public:
    MissingCpiError()
        : Error("missing-cpi",
                "instruction_count is 0 and no CPI override was supplied") {}
};

class InconsistentCountsError : public Error {
public:
    explicit InconsistentCountsError(const std::string& message)
        : Error("inconsistent-counts", message) {}
};

// Simulator output failed an AccessCounts invariant. Always a bug.
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& message)
        : Error("consistency", message) {}
};

// A trace record is unusable at simulation time (e.g. core out of range).
class TraceError : public Error {
public:
    TraceError(std::size_t record_index, const std::string& message)
        : Error("trace", "record " + std::to_string(record_index) + ": " + message),
          record_index_(record_index) {}

    [[nodiscard]] std::size_t record_index() const { return record_index_; }

private:
    std::size_t record_index_;
};

// Malformed trace file. For text traces `position()` is a 1-based line
// number, for binary traces it is a byte offset.
class ParseError : public Error {
public:
    ParseError(std::uint64_t position, std::string token, const std::string& message)
        : Error("parse", message), position_(position), token_(std::move(token)) {}

    [[nodiscard]] std::uint64_t position() const { return position_; }
    [[nodiscard]] const std::string& token() const { return token_; }

private:
    std::uint64_t position_;
    std::string token_;
};

// Parameter file, sweep spec or reference file problem. `path()` is the
// dotted key path of the offending entry (may be empty).
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error("config", path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error("usage", message) {}
};

} // namespace cachemodel
