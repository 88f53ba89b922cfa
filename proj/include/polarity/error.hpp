#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polarity {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad flags, missing resources, invalid feature specs. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Unreadable or malformed input data. CLI exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : DataError(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace polarity
