#pragma once

#include <stdexcept>
#include <string>

namespace orbitcancel {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { config = 2, precondition = 3, resource = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// A mathematical hypothesis of an operation does not hold for its input.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what)
        : Error(ErrorKind::precondition, what) {}
};

/// A configured budget (precision, degree cap, term count, integer size) was exhausted.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

}  // namespace orbitcancel
