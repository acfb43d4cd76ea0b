#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace balint {

enum class ErrorKind {
    Parameter,       // invalid distribution / model parameter
    UndefinedMoment, // requested moment does not exist (Cauchy mean)
    Domain,          // argument outside a function's domain, or divergent MGF
    NoMgf,           // distribution has no moment generating function
    Unsupported,     // operation not defined for this variant
    Index,           // level index out of range
    WrongLink,       // solver requires a different link
    EngineMismatch,  // exact enumeration requested for continuous support
    NoRoot,          // numeric solver failed to bracket or converge
    OutOfRange,      // Bernoulli mean outside [0,1] under RejectOutOfRange
    Config,          // malformed configuration document
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for the kinds that signal a mathematically infeasible request
/// (CLI exit code 2) rather than a malformed one.
bool is_infeasibility(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace balint
