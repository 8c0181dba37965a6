#pragma once

#include <vector>

#include "fvp/jet.hpp"

namespace fvp {

/// Coefficients expressing y^(n) through the lower derivatives of an
/// order-k equation:
///
///   y^(n) = e[0] y^(k-1) + e[1] y^(k-2) + ... + e[k-1] y + e[k]
///
/// The row with n == stage_order is the equation itself (the base row).
struct CoefficientRow {
    int stage_order = 0;
    int n = 0;
    std::vector<Jet> entries;

    double center() const { return entries.front().center(); }
};

/// Checks the structural invariants (entry count, shared center); throws
/// ErrorKind::invalid_input.
void validate_row(const CoefficientRow& row);

/// Row n+1 from row n: differentiate row n and substitute the base equation
/// for the y^(k) that appears.
///
///   next[j] = D prev[j] + prev[0] * base[j] + prev[j+1]   (j < k-1)
///   next[j] = D prev[j] + prev[0] * base[j]               (j = k-1, k)
///
/// Throws ErrorKind::recursion_depth once the jets run out of coefficients.
CoefficientRow advance_row(const CoefficientRow& prev, const CoefficientRow& base);

/// Rows for n = k .. n_max; element 0 is `base` itself.
std::vector<CoefficientRow> generate_rows(const CoefficientRow& base, int n_max);

}  // namespace fvp
