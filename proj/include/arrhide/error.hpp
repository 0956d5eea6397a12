#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arrhide {

/// 1-based source position. A zero line means "no position".
struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;

    bool known() const { return line != 0; }
    std::string str() const;
};

/// Base for every error the toolchain raises.
class Error : public std::runtime_error {
public:
    Error(std::string what, SourcePos pos = {});

    const SourcePos& pos() const { return pos_; }
    /// Message without the position prefix.
    const std::string& message() const { return message_; }

private:
    std::string message_;
    SourcePos pos_;
};

/// Constant hiding received a value outside its domain (negative, too large, ...).
class DomainError : public Error {
    using Error::Error;
};

/// F depth index outside the y-factor table.
class DepthRangeError : public Error {
    using Error::Error;
};

/// Invalid configuration (bad prime table, bad layout parameters).
class ConfigError : public Error {
    using Error::Error;
};

/// Unterminated comment, string or char literal.
class LexError : public Error {
    using Error::Error;
};

/// Unbalanced delimiters or a MiniJ syntax error.
class ParseError : public Error {
    using Error::Error;
};

/// A literal could not be rewritten.
class RewriteError : public Error {
    using Error::Error;
};

/// Container access outside the logical length.
class BoundsError : public Error {
    using Error::Error;
};

/// Malformed F call while counting.
class MetricError : public Error {
    using Error::Error;
};

}  // namespace arrhide
