#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cnduality {

enum class ErrorKind {
    InvalidDimension,
    RegularityViolation,
    NotInExpP,
    StructureViolation,
    NotPositiveDefinite,
    SingularInput,
    PoleError,
    SingularCauchy,
    DomainError,
    InvalidOrbitVector,
    IntegrationAborted,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the failure class.
///
/// Flow solvers attach `last_safe_t` when they abort part way: the largest
/// time (same sign as the requested one) at which the answer was still regular.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<double> last_safe_t = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind), last_safe_t_(last_safe_t) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> last_safe_t() const noexcept { return last_safe_t_; }

private:
    ErrorKind kind_;
    std::optional<double> last_safe_t_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::RegularityViolation: return "regularity-violation";
    case ErrorKind::NotInExpP: return "not-in-exp-p";
    case ErrorKind::StructureViolation: return "structure-violation";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::SingularInput: return "singular-input";
    case ErrorKind::PoleError: return "pole-error";
    case ErrorKind::SingularCauchy: return "singular-cauchy";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::InvalidOrbitVector: return "invalid-orbit-vector";
    case ErrorKind::IntegrationAborted: return "integration-aborted";
    case ErrorKind::ConfigError: return "config-error";
    }
    return "unknown";
}

}  // namespace cnduality
