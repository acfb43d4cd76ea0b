#include "balint/error.hpp"

namespace balint {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::UndefinedMoment: return "undefined-moment";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NoMgf: return "no-mgf";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Index: return "index";
    case ErrorKind::WrongLink: return "wrong-link";
    case ErrorKind::EngineMismatch: return "engine-mismatch";
    case ErrorKind::NoRoot: return "no-root";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

bool is_infeasibility(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::NoMgf:
    case ErrorKind::NoRoot:
    case ErrorKind::UndefinedMoment:
    case ErrorKind::OutOfRange:
        return true;
    default:
        return false;
    }
}

} // namespace balint
