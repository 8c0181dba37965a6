#pragma once

#include <span>
#include <vector>

#include "fvp/jet.hpp"
#include "fvp/recursion.hpp"

namespace fvp {

struct Condition {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Condition&, const Condition&) = default;
};

/// Series sums of one reduction stage. With m the stage order and x_m the
/// condition it absorbs, the reduced relation reads
///
///   entries[0] y^(m-1) + entries[1] y^(m-2) + ... + entries[m-1] y + entries[m] = 0
struct QVector {
    int stage_order = 0;
    Condition condition;
    int n_trunc = 0;
    std::vector<Jet> entries;
    /// Per entry: largest |coefficient| of the last (n = n_trunc) summand
    /// over the examined powers.
    std::vector<double> tail_estimates;
    /// Per entry: the same coefficients relative to max(1, |entry coefficient|).
    std::vector<double> tail_ratios;
};

/// Sums  sum_{n=m..n_trunc} (-1)^n (x - x_m)^n / n! * rows[n].entries[i]
/// plus the closing term (-1)^(m-1-i) (x - x_m)^(m-1-i) / (m-1-i)! for
/// i < m, or -y_m for the inhomogeneous entry i = m.
///
/// Tail estimates examine the `tail_powers` lowest powers present in the
/// entries; those are the coefficients the value at the center depends on.
QVector compute_q(std::span<const CoefficientRow> rows, const Condition& cond, int n_trunc,
                  int tail_powers = 8);

/// Base row of the order-(m-1) equation: entry j = -Q[j+1] / Q[0].
/// Throws ErrorKind::stage_singular when Q[0] vanishes on every retained
/// coefficient. Requires m >= 2; the m == 1 case is solve_order_zero.
CoefficientRow reduce_once(const QVector& q);

/// Terminal stage (m == 1): the solution jet y = -Q[1] / Q[0].
Jet solve_order_zero(const QVector& q);

}  // namespace fvp
