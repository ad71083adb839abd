#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liesup {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

/// Text that does not conform to one of the expression grammars.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A numeric formula was evaluated outside its domain (division by zero, negative radicand, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Schema or parameter validation failure; `path` locates the offending item.
class ValidationError : public Error {
public:
    ValidationError(const std::string& path, const std::string& message)
        : Error(path + ": " + message), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace liesup
