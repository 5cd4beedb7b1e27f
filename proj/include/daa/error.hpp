// Error types shared by every daa module.

#ifndef DAA_ERROR_HPP
#define DAA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace daa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (e.g. entropy of nothing).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Fewer bytes available than the operation needs.
class ShortFileError : public Error {
public:
    ShortFileError(const std::string& what, std::size_t available, std::size_t needed)
        : Error(what), available_(available), needed_(needed) {}

    std::size_t available() const noexcept { return available_; }
    std::size_t needed() const noexcept { return needed_; }

private:
    std::size_t available_;
    std::size_t needed_;
};

/// Curves or bounds that do not share a sampling grid.
class GridError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Line numbers are 1-based; 0 means "not line specific".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class VersionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid parameter combination supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A type profile lacks the requested grid point.
class ProfileError : public Error {
public:
    using Error::Error;
};

} // namespace daa

#endif // DAA_ERROR_HPP
