#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fvp {

enum class ErrorKind {
    invalid_input,
    center_mismatch,
    singular_denominator,
    depth_exhausted,
    pole_at_center,
    non_finite,
    capability,
    quadrature,
    stage_singular,
    recursion_depth,
    tail_not_converged,
    oracle_failure,
    oracle_singular,
    config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the
/// pipeline's per-point reporting, the CLI's exit codes) can branch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace fvp
