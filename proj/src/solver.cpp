#include "fvp/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "fvp/recursion.hpp"

namespace fvp {

namespace {

constexpr int kMaxTruncation = 150;  // keeps n! and the weights inside double range

}  // namespace

void validate(const FunctionValueProblem& problem) {
    const int k = problem.order;
    if (k < 1) {
        throw Error(ErrorKind::invalid_input, "order must be >= 1");
    }
    if (static_cast<int>(problem.base_coeffs.size()) != k + 1) {
        throw Error(ErrorKind::invalid_input, "an order-" + std::to_string(k) + " problem needs " +
                                                  std::to_string(k + 1) + " coefficient polynomials");
    }
    for (std::size_t i = 0; i < problem.base_coeffs.size(); ++i) {
        const auto& poly = problem.base_coeffs[i];
        if (poly.empty()) {
            throw Error(ErrorKind::invalid_input,
                        "coefficient polynomial p" + std::to_string(i + 1) + " is empty");
        }
        if (!std::all_of(poly.begin(), poly.end(), [](double c) { return std::isfinite(c); })) {
            throw Error(ErrorKind::invalid_input,
                        "coefficient polynomial p" + std::to_string(i + 1) + " is not finite");
        }
    }
    if (static_cast<int>(problem.conditions.size()) != k) {
        throw Error(ErrorKind::invalid_input, "an order-" + std::to_string(k) + " problem needs " +
                                                  std::to_string(k) + " function value conditions");
    }
    for (std::size_t i = 0; i < problem.conditions.size(); ++i) {
        const Condition& c = problem.conditions[i];
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
            throw Error(ErrorKind::invalid_input, "condition " + std::to_string(i + 1) + " is not finite");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (problem.conditions[j].x == c.x) {
                throw Error(ErrorKind::invalid_input,
                            "condition abscissae must be pairwise distinct (x = " +
                                std::to_string(c.x) + " appears twice)");
            }
        }
    }
}

void validate(const SolverConfig& cfg) {
    if (cfg.n_trunc < 1 || cfg.n_trunc > kMaxTruncation) {
        throw Error(ErrorKind::invalid_input,
                    "n_trunc must lie in [1, " + std::to_string(kMaxTruncation) + "]");
    }
    if (cfg.depth_margin < 0) {
        throw Error(ErrorKind::invalid_input, "depth_margin must be >= 0");
    }
    if (!(cfg.tail_tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "tail_tol must be positive");
    }
    if (cfg.stability_step < 1) {
        throw Error(ErrorKind::invalid_input, "stability_step must be >= 1");
    }
    if (cfg.tail_powers < 1) {
        throw Error(ErrorKind::invalid_input, "tail_powers must be >= 1");
    }
    if (!(cfg.coincidence_tol >= 0.0)) {
        throw Error(ErrorKind::invalid_input, "coincidence_tol must be >= 0");
    }
}

int jet_depth(int order, const SolverConfig& cfg) {
    int consumed = 0;
    for (int m = 1; m <= order; ++m) {
        consumed += std::max(cfg.n_trunc - m, 0);
    }
    return consumed + 1 + cfg.depth_margin * order;
}

std::vector<Condition> condition_ordering(const FunctionValueProblem& problem) {
    return {problem.conditions.rbegin(), problem.conditions.rend()};
}

std::vector<Condition> condition_ordering(const FunctionValueProblem& problem, double center,
                                          ConditionOrder policy) {
    std::vector<Condition> seq = condition_ordering(problem);
    if (policy == ConditionOrder::nearest_last) {
        std::stable_sort(seq.begin(), seq.end(), [center](const Condition& a, const Condition& b) {
            return std::abs(a.x - center) > std::abs(b.x - center);
        });
    }
    return seq;
}

std::string_view to_string(PointRoute route) noexcept {
    switch (route) {
        case PointRoute::series: return "series";
        case PointRoute::coincident: return "coincident";
        case PointRoute::condition_value: return "condition_value";
        case PointRoute::recentered: return "recentered";
    }
    return "unknown";
}

bool SolutionReport::all_ok() const {
    return std::all_of(points.begin(), points.end(), [](const PointResult& p) { return p.ok; });
}

Jet solve_jet_at(const FunctionValueProblem& problem, double center, const SolverConfig& cfg,
                 std::span<const Condition> consumption, std::vector<StageDiagnostics>* diagnostics) {
    validate(problem);
    validate(cfg);
    const int k = problem.order;
    if (static_cast<int>(consumption.size()) != k) {
        throw Error(ErrorKind::invalid_input, "consumption sequence must list every condition once");
    }
    if (cfg.n_trunc < k) {
        throw Error(ErrorKind::invalid_input, "n_trunc must be at least the equation order");
    }
    const JetSpec spec{jet_depth(k, cfg), center};

    CoefficientRow base{k, k, {}};
    for (const auto& poly : problem.base_coeffs) {
        base.entries.push_back(from_polynomial(poly, spec));
    }

    for (int m = k; m >= 1; --m) {
        const Condition& cond = consumption[static_cast<std::size_t>(k - m)];
        const std::vector<CoefficientRow> rows = generate_rows(base, cfg.n_trunc);
        QVector q = compute_q(rows, cond, cfg.n_trunc, cfg.tail_powers);

        StageDiagnostics diag;
        diag.stage_order = m;
        diag.condition = cond;
        diag.n_trunc = cfg.n_trunc;
        diag.q1_valuation = q.entries[0].valuation();
        for (std::size_t i = 0; i < q.entries.size(); ++i) {
            diag.max_tail = std::max(diag.max_tail, q.tail_estimates[i]);
            diag.max_tail_ratio = std::max(diag.max_tail_ratio, q.tail_ratios[i]);
        }
        if (diagnostics != nullptr) {
            diagnostics->push_back(diag);
        }
        if (diag.max_tail_ratio > cfg.tail_tol) {
            throw Error(ErrorKind::tail_not_converged,
                        fmt::format("Q series at stage order {} (condition x = {:g}) has relative tail {:.3g} "
                                    "at n_trunc = {}",
                                    m, cond.x, diag.max_tail_ratio, cfg.n_trunc));
        }
        if (m == 1) {
            return solve_order_zero(q);
        }
        base = reduce_once(q);
    }
    throw Error(ErrorKind::invalid_input, "unreachable: no stages ran");
}

double evaluate_taylor(const Jet& jet, double offset, double tail_tol) {
    if (jet.start() < 0) {
        throw Error(ErrorKind::pole_at_center, "cannot re-expand a jet with a pole at its center");
    }
    if (offset == 0.0) {
        return value(jet);
    }
    double sum = 0.0;
    double last = 0.0;
    double before_last = 0.0;
    double power = std::pow(offset, jet.start());
    for (int p = jet.start(); p <= jet.order(); ++p) {
        const double term = jet.coeff(p) * power;
        sum += term;
        before_last = last;
        last = std::abs(term);
        power *= offset;
    }
    const double tail = std::max(last, before_last) / std::max(1.0, std::abs(sum));
    if (tail > tail_tol) {
        throw Error(ErrorKind::tail_not_converged,
                    fmt::format("Taylor jet of order {} at offset {:g} has relative tail {:.3g}", jet.order(),
                                offset, tail));
    }
    return sum;
}

namespace {

/// Worst ratio, over the stages, of the distance to the absorbed condition
/// and the distance to the nearest condition absorbed before it (a pole of
/// that stage's coefficients), with the nearest condition absorbed last.
double convergence_ratio(const FunctionValueProblem& problem, double center) {
    std::vector<double> dist;
    for (const Condition& c : problem.conditions) dist.push_back(std::abs(c.x - center));
    std::sort(dist.begin(), dist.end());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
        worst = std::max(worst, dist[i] / dist[i + 1]);
    }
    return worst;
}

/// Leading coefficients of `fine` whose change against `rough`, weighted by
/// |offset|^p, stays within tol relative to max(1, |value|).
Jet stable_prefix(const Jet& fine, const Jet& rough, double offset, double tol) {
    if (fine.start() < 0 || rough.start() < 0) {
        throw Error(ErrorKind::pole_at_center, "cannot re-expand a jet with a pole at its center");
    }
    const double scale = std::max(1.0, std::abs(fine.coeff(0)));
    const int hi = std::min(fine.order(), rough.order());
    std::vector<double> kept;
    double power = 1.0;
    for (int p = 0; p <= hi; ++p) {
        if (std::abs(fine.coeff(p) - rough.coeff(p)) * power > tol * scale) {
            break;
        }
        kept.push_back(fine.coeff(p));
        power *= std::abs(offset);
    }
    if (kept.empty()) {
        throw Error(ErrorKind::tail_not_converged,
                    "solution jet value changes with the truncation beyond tail_tol");
    }
    return Jet(fine.center(), 0, std::move(kept));
}

/// The series at x reaches a condition about as far away as a pole of the
/// reduced coefficients. At a condition abscissa the last stage's sums are
/// finite, so form the solution jet there and re-expand it at x. Centers
/// are tried in order of their convergence ratio.
double solve_recentered(const FunctionValueProblem& problem, double x, const SolverConfig& cfg,
                        const Error& direct, std::vector<StageDiagnostics>& stages) {
    std::vector<double> centers;
    for (const Condition& c : problem.conditions) centers.push_back(c.x);
    std::stable_sort(centers.begin(), centers.end(), [&](double a, double b) {
        const double ra = convergence_ratio(problem, a);
        const double rb = convergence_ratio(problem, b);
        return ra != rb ? ra < rb : std::abs(a - x) < std::abs(b - x);
    });
    // A second solve with a shorter truncation tells which jet coefficients
    // have converged; only those are re-expanded.
    SolverConfig coarse = cfg;
    coarse.n_trunc = std::max(problem.order, cfg.n_trunc - cfg.stability_step);
    std::string attempts;
    for (double center : centers) {
        try {
            std::vector<StageDiagnostics> diag;
            const std::vector<Condition> seq = condition_ordering(problem, center, cfg.ordering);
            const Jet fine = solve_jet_at(problem, center, cfg, seq, &diag);
            const Jet rough = solve_jet_at(problem, center, coarse, seq);
            const double v = evaluate_taylor(stable_prefix(fine, rough, x - center, cfg.tail_tol),
                                             x - center, cfg.tail_tol);
            stages = std::move(diag);
            return v;
        } catch (const Error& e) {
            const bool retry = e.kind() == ErrorKind::tail_not_converged ||
                               e.kind() == ErrorKind::pole_at_center ||
                               e.kind() == ErrorKind::stage_singular;
            if (!retry) {
                throw;
            }
            attempts += fmt::format("; from x = {:g}: {}", center, e.what());
        }
    }
    throw Error(ErrorKind::tail_not_converged, std::string(direct.what()) + attempts);
}

}  // namespace

PointResult solve_point(const FunctionValueProblem& problem, double x, const SolverConfig& cfg) {
    PointResult r;
    r.x = x;
    r.value = std::numeric_limits<double>::quiet_NaN();
    try {
        validate(problem);
        validate(cfg);
        if (!std::isfinite(x)) {
            throw Error(ErrorKind::invalid_input, "evaluation point is not finite");
        }
        const Condition* nearest = nullptr;
        for (const Condition& c : problem.conditions) {
            const double dist = std::abs(c.x - x);
            if (dist > cfg.interval_warn) {
                r.interval_warning = true;
            }
            if (nearest == nullptr || dist < std::abs(nearest->x - x)) {
                nearest = &c;
            }
        }
        const bool coincident = std::abs(nearest->x - x) <= cfg.coincidence_tol;
        const double center = coincident ? nearest->x : x;
        r.route = coincident ? PointRoute::coincident : PointRoute::series;
        try {
            const std::vector<Condition> seq = condition_ordering(problem, center, cfg.ordering);
            r.value = value(solve_jet_at(problem, center, cfg, seq, &r.stages));
        } catch (const Error& e) {
            // At a condition abscissa the reduced equations may keep a pole
            // that rounding prevents from cancelling; the prescribed value is
            // the limit.
            const bool removable = e.kind() == ErrorKind::pole_at_center ||
                                   e.kind() == ErrorKind::stage_singular ||
                                   e.kind() == ErrorKind::singular_denominator;
            if (coincident && removable) {
                r.value = nearest->y;
                r.route = PointRoute::condition_value;
            } else if (e.kind() == ErrorKind::tail_not_converged) {
                r.value = solve_recentered(problem, x, cfg, e, r.stages);
                r.route = PointRoute::recentered;
            } else {
                throw;
            }
        }
        r.ok = true;
    } catch (const Error& e) {
        r.ok = false;
        r.value = std::numeric_limits<double>::quiet_NaN();
        r.error_kind = e.kind();
        r.error_message = e.what();
    }
    return r;
}

SolutionReport solve(const FunctionValueProblem& problem, std::span<const double> eval_points,
                     const SolverConfig& cfg) {
    SolutionReport report;
    report.eval_points.assign(eval_points.begin(), eval_points.end());
    report.points.resize(eval_points.size());

    const std::size_t n = eval_points.size();
    const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            report.points[i] = solve_point(problem, eval_points[i], cfg);
        }
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) {
                    report.points[i] = solve_point(problem, eval_points[i], cfg);
                }
            });
        }
    }

    report.values.reserve(n);
    for (const PointResult& p : report.points) {
        report.values.push_back(p.value);
    }
    return report;
}

}  // namespace fvp
