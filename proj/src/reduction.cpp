#include "fvp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fvp/error.hpp"

namespace fvp {

namespace {

std::string stage_context(const QVector& q) {
    return "stage order " + std::to_string(q.stage_order) + ", condition x = " +
           std::to_string(q.condition.x) + ", n_trunc = " + std::to_string(q.n_trunc);
}

Jet checked_ratio(const Jet& num, const QVector& q) {
    try {
        return -(num / q.entries[0]);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::singular_denominator) {
            throw;
        }
        throw Error(ErrorKind::stage_singular,
                    "leading Q coefficient vanishes identically (" + stage_context(q) + ")");
    }
}

}  // namespace

QVector compute_q(std::span<const CoefficientRow> rows, const Condition& cond, int n_trunc,
                  int tail_powers) {
    if (rows.empty()) {
        throw Error(ErrorKind::invalid_input, "compute_q needs at least the base row");
    }
    const int m = rows.front().stage_order;
    if (n_trunc < m) {
        throw Error(ErrorKind::invalid_input, "compute_q: n_trunc below the stage order");
    }
    if (rows.front().n != m || static_cast<int>(rows.size()) < n_trunc - m + 1) {
        throw Error(ErrorKind::invalid_input,
                    "compute_q: rows must cover n = " + std::to_string(m) + " .. " +
                        std::to_string(n_trunc));
    }
    const double center = rows.front().center();
    int depth = 1;
    for (const Jet& e : rows.front().entries) depth = std::max(depth, e.order() + 1);
    const JetSpec spec{depth, center};

    QVector q;
    q.stage_order = m;
    q.condition = cond;
    q.n_trunc = n_trunc;
    q.tail_estimates.assign(static_cast<std::size_t>(m) + 1, 0.0);
    q.tail_ratios.assign(static_cast<std::size_t>(m) + 1, 0.0);
    if (tail_powers < 1) {
        throw Error(ErrorKind::invalid_input, "compute_q: tail_powers must be >= 1");
    }

    // (-1)^n / n! for n = m, carried forward term by term.
    double scale = 1.0;
    for (int n = 1; n <= m; ++n) scale *= -1.0 / n;

    std::vector<Jet> sums;
    std::vector<Jet> last_terms;
    for (int n = m; n <= n_trunc; ++n) {
        const CoefficientRow& row = rows[static_cast<std::size_t>(n - m)];
        if (row.n != n || row.stage_order != m) {
            throw Error(ErrorKind::invalid_input, "compute_q: rows out of sequence");
        }
        const Jet weight = pow_linear(cond.x, n, spec) * scale;
        for (int i = 0; i <= m; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            Jet term = weight * row.entries[ui];
            if (n == n_trunc) {
                last_terms.push_back(term);
            }
            if (sums.size() <= ui) {
                sums.push_back(std::move(term));
            } else {
                sums[ui] = sums[ui] + term;
            }
        }
        scale *= -1.0 / (n + 1);
    }

    for (int i = 0; i < m; ++i) {
        const int e = m - 1 - i;
        double closing = 1.0;
        for (int j = 1; j <= e; ++j) closing *= -1.0 / j;
        sums[static_cast<std::size_t>(i)] =
            sums[static_cast<std::size_t>(i)] + pow_linear(cond.x, e, spec) * closing;
    }
    sums[static_cast<std::size_t>(m)] =
        sums[static_cast<std::size_t>(m)] - Jet::constant(cond.y, spec);

    // Only the lowest powers feed the value at the center; the high ones
    // converge more slowly and are not judged.
    int lo = sums.front().start();
    for (const Jet& e : sums) lo = std::min(lo, e.start());
    const int hi = lo + tail_powers - 1;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const Jet& last = last_terms[i];
        for (int p = std::max(lo, last.start()); p <= std::min(hi, last.order()); ++p) {
            const double t = std::abs(last.coeff(p));
            const double ref = p <= sums[i].order() ? std::abs(sums[i].coeff(p)) : 0.0;
            q.tail_estimates[i] = std::max(q.tail_estimates[i], t);
            q.tail_ratios[i] = std::max(q.tail_ratios[i], t / std::max(1.0, ref));
        }
    }

    q.entries = std::move(sums);
    return q;
}

CoefficientRow reduce_once(const QVector& q) {
    const int m = q.stage_order;
    if (m < 2) {
        throw Error(ErrorKind::invalid_input, "reduce_once needs stage order >= 2");
    }
    if (static_cast<int>(q.entries.size()) != m + 1) {
        throw Error(ErrorKind::invalid_input, "QVector entry count does not match its stage order");
    }
    CoefficientRow row{m - 1, m - 1, {}};
    row.entries.reserve(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        row.entries.push_back(checked_ratio(q.entries[static_cast<std::size_t>(j)], q));
    }
    return row;
}

Jet solve_order_zero(const QVector& q) {
    if (q.stage_order != 1 || q.entries.size() != 2) {
        throw Error(ErrorKind::invalid_input, "solve_order_zero needs a stage-order-1 QVector");
    }
    return checked_ratio(q.entries[1], q);
}

}  // namespace fvp
