#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbitcoh {

enum class ErrorKind {
    InvalidParams,
    NotPrime,
    DuplicateGenerator,
    NonHomogeneousRelation,
    NonterminatingRewrite,
    NonConfluentRelations,
    DegreeOutOfWindow,
    DegreeOverflow,
    WindowTooSmall,
    UnassignedGenerator,
    InvalidDifferential,
    IncompatibleDifferential,
    DifferentialNotSquareZero,
    WrongDegreeAlpha,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// All engine failures are reported through this exception; `kind()` is the
/// machine-readable reason, `what()` carries the human detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace orbitcoh
