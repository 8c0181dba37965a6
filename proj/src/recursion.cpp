#include "fvp/recursion.hpp"

#include <string>

#include "fvp/error.hpp"

namespace fvp {

void validate_row(const CoefficientRow& row) {
    if (row.stage_order < 1) {
        throw Error(ErrorKind::invalid_input, "coefficient row needs stage order >= 1");
    }
    if (static_cast<int>(row.entries.size()) != row.stage_order + 1) {
        throw Error(ErrorKind::invalid_input,
                    "coefficient row of stage order " + std::to_string(row.stage_order) + " needs " +
                        std::to_string(row.stage_order + 1) + " entries, got " +
                        std::to_string(row.entries.size()));
    }
    for (const Jet& e : row.entries) {
        if (e.center() != row.entries.front().center()) {
            throw Error(ErrorKind::invalid_input, "coefficient row entries must share one center");
        }
    }
}

CoefficientRow advance_row(const CoefficientRow& prev, const CoefficientRow& base) {
    const int k = base.stage_order;
    if (prev.stage_order != k || base.n != k) {
        throw Error(ErrorKind::invalid_input, "advance_row: rows belong to different equations");
    }
    CoefficientRow next{k, prev.n + 1, {}};
    next.entries.reserve(prev.entries.size());
    try {
        const Jet& lead = prev.entries[0];
        for (int j = 0; j <= k; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            Jet e = derivative(prev.entries[uj]) + lead * base.entries[uj];
            if (j < k - 1) {
                e = e + prev.entries[uj + 1];
            }
            next.entries.push_back(std::move(e));
        }
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::depth_exhausted) {
            throw;
        }
        throw Error(ErrorKind::recursion_depth,
                    "jet depth exhausted while generating coefficient row n = " +
                        std::to_string(prev.n + 1) + " (stage order " + std::to_string(k) + ")");
    }
    return next;
}

std::vector<CoefficientRow> generate_rows(const CoefficientRow& base, int n_max) {
    validate_row(base);
    if (base.n != base.stage_order) {
        throw Error(ErrorKind::invalid_input, "generate_rows needs the base row (n == stage order)");
    }
    if (n_max < base.stage_order) {
        throw Error(ErrorKind::invalid_input, "generate_rows: n_max below the stage order");
    }
    std::vector<CoefficientRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max - base.stage_order + 1));
    rows.push_back(base);
    while (rows.back().n < n_max) {
        rows.push_back(advance_row(rows.back(), base));
    }
    return rows;
}

}  // namespace fvp
