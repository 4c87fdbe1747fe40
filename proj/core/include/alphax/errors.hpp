#pragma once

#include <stdexcept>
#include <string>

namespace alphax {

/// Input file could not be parsed (bad row, bad field, missing column).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(file), line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Parsed data violates a domain invariant (e.g. low > high).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad run configuration or bad arguments to an operation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An open position has no bar on a trading day.
class DataGapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace alphax
