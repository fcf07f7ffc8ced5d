#pragma once

#include <stdexcept>
#include <string>

namespace qchaos {

enum class ErrorKind {
    InvalidGeometry,
    InvalidParameter,
    Capacity,
    Input,
    Convergence,
    InsufficientStatistics,
    DegenerateWindow,
    Domain,
    EmptySample,
    DimensionMismatch,
    NotBracketed,
    Blocked,
    Config,
    Backend,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qchaos
