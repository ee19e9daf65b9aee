#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cloudstore {

enum class ErrorKind {
    Config,
    Alignment,
    Unit,
    Domain,
    Parse,
    Validation,
    Infeasible,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error thrown by the toolkit. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct AlignmentError : Error {
    explicit AlignmentError(const std::string& what) : Error(ErrorKind::Alignment, what) {}
};

struct UnitError : Error {
    explicit UnitError(const std::string& what) : Error(ErrorKind::Unit, what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(ErrorKind::Parse, source + ":" + std::to_string(line) + ": " + what) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

/// Raised when a physical battery cannot follow a command and external resources are not allowed.
struct InfeasibleError : Error {
    explicit InfeasibleError(const std::string& what) : Error(ErrorKind::Infeasible, what) {}
};

}  // namespace cloudstore
