#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermoporo {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the byte offset at which parsing failed.
class FormatError : public Error {
public:
    FormatError(const std::string& message, std::size_t offset)
        : Error(message + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Bad key/value configuration (unknown key, unparsable value, missing key).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Physical parameters outside the admissible set.
class InadmissibleParameters : public Error {
public:
    using Error::Error;
};

/// A geometry a solver cannot work with (single phase, disconnected pores, ...).
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to reach its tolerance, or a compatibility condition failed.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A computed quantity violated a published invariant (e.g. tensor asymmetry).
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace thermoporo
