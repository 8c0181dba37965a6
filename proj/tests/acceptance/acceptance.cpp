// One pass/fail line per acceptance criterion; exit status 1 if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fvp/error.hpp"
#include "fvp/expansion.hpp"
#include "fvp/jet.hpp"
#include "fvp/oracle.hpp"
#include "fvp/recursion.hpp"
#include "fvp/reduction.hpp"
#include "fvp/solver.hpp"
#include "testing.hpp"

namespace {

using Poly = std::vector<double>;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    fmt::print("[{}] criterion {}: {} -- {}\n", o.pass ? "PASS" : "FAIL", id, title, o.detail);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    v.back() = hi;
    return v;
}

double two_point_exp(double a, double ya, double b, double yb, double x) {
    const double c1 = (ya * std::exp(-b) - yb * std::exp(-a)) / (std::exp(a - b) - std::exp(b - a));
    const double c2 = (yb * std::exp(a) - ya * std::exp(b)) / (std::exp(a - b) - std::exp(b - a));
    return c1 * std::exp(x) + c2 * std::exp(-x);
}

fvp::FunctionValueProblem exp_problem(double a, double ya, double b, double yb) {
    return {2, {{0.0}, {1.0}, {0.0}}, {{b, yb}, {a, ya}}};
}

fvp::CoefficientRow base_row(const std::vector<Poly>& polys, const fvp::JetSpec& spec) {
    const int k = static_cast<int>(polys.size()) - 1;
    fvp::CoefficientRow row{k, k, {}};
    for (const Poly& p : polys) row.entries.push_back(fvp::from_polynomial(p, spec));
    return row;
}

fvp::Jet hyperbolic_jet(bool sinh_like, double a, double c, int depth) {
    std::vector<double> coeffs;
    double fact = 1.0;
    for (int p = 0; p < depth; ++p) {
        if (p > 0) fact *= p;
        const bool odd = p % 2 == 1;
        coeffs.push_back(((odd == sinh_like) ? std::cosh(c - a) : std::sinh(c - a)) / fact);
    }
    return fvp::Jet(c, 0, coeffs);
}

Outcome closed_form_grid() {
    const struct { double a, ya, b, yb; } cases[] = {{0.0, 1.0, 1.0, 2.0}, {-0.5, 0.7, 0.8, -1.2}};
    double worst = 0.0;
    double slowest = 0.0;
    int recentered = 0;
    for (const auto& c : cases) {
        const auto grid = linspace(c.a, c.b, 21);
        const auto t0 = std::chrono::steady_clock::now();
        const auto report = fvp::solve(exp_problem(c.a, c.ya, c.b, c.yb), grid, fvp::SolverConfig{});
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, secs);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!report.points[i].ok) return {false, "point failed: " + report.points[i].error_message};
            worst = std::max(worst, std::abs(report.values[i] - two_point_exp(c.a, c.ya, c.b, c.yb, grid[i])));
            recentered += report.points[i].route == fvp::PointRoute::recentered ? 1 : 0;
        }
    }
    return {worst < 1e-8 && slowest < 5.0,
            fmt::format("max |error| {:.2e} (< 1e-8), slowest grid {:.3f} s (< 5 s), {} of 42 points re-expanded "
                        "from a condition abscissa",
                        worst, slowest, recentered)};
}

Outcome q_closed_forms() {
    const int n_trunc = 40;
    const int depth = 20;
    double worst = 0.0;
    for (double a : {0.0, -0.5}) {
        for (double c : {a, a + 0.4, a + 1.0}) {
            // Enough base coefficients that every Q entry keeps `depth` of them.
            const fvp::JetSpec spec{n_trunc - 2 + depth + 1, c};
            const auto rows = fvp::generate_rows(base_row({{0.0}, {1.0}, {0.0}}, spec), n_trunc);
            const double ya = 1.3;
            const fvp::QVector q = fvp::compute_q(rows, {a, ya}, n_trunc);
            for (const auto& e : q.entries) {
                if (e.order() < depth - 1) return {false, "Q entry retained too few coefficients"};
            }
            worst = std::max(worst, fvp::testing::max_coeff_diff(q.entries[0], -hyperbolic_jet(true, a, c, depth)));
            worst = std::max(worst, fvp::testing::max_coeff_diff(q.entries[1], hyperbolic_jet(false, a, c, depth)));
            worst = std::max(worst, fvp::testing::max_coeff_diff(q.entries[2], fvp::Jet::constant(-ya, {depth, c})));
        }
    }
    return {worst <= 1e-12, fmt::format("max coefficient difference {:.2e} (<= 1e-12) over 6 (a, center) pairs", worst)};
}

Outcome airy_rows() {
    const std::vector<std::vector<Poly>> expected{
        {{0.0, 1.0}, {1.0}},
        {{2.0}, {0.0, 0.0, 1.0}},
        {{0.0, 0.0, 1.0}, {0.0, 4.0}},
        {{0.0, 6.0}, {4.0, 0.0, 0.0, 1.0}},
    };
    double worst = 0.0;
    for (double c : {0.0, 0.5, 1.0}) {
        const fvp::JetSpec spec{12, c};
        const auto rows = fvp::generate_rows(base_row({{0.0}, {0.0, 1.0}, {0.0}}, spec), 6);
        for (std::size_t r = 0; r < expected.size(); ++r) {
            for (std::size_t j = 0; j < 2; ++j) {
                worst = std::max(worst, fvp::testing::max_coeff_diff(rows[r + 1].entries[j],
                                                                     fvp::from_polynomial(expected[r][j], spec)));
            }
        }
    }
    return {worst <= 1e-12, fmt::format("rows n = 3..6 at centers 0, 0.5, 1: max difference {:.2e} (<= 1e-12)", worst)};
}

Outcome variable_coefficients() {
    // Manufacture the conditions from an initial value solution.
    const fvp::LinearOdeSystem sys(2, {{0.0}, {0.0, 1.0}, {0.0}});
    const std::vector<double> s0{1.0, -0.3};
    const double y1 = fvp::integrate_ivp(sys, 0.0, s0, 1.0)[0];
    const fvp::FunctionValueProblem problem{2, {{0.0}, {0.0, 1.0}, {0.0}}, {{1.0, y1}, {0.0, 1.0}}};
    const auto grid = linspace(0.1, 0.9, 9);
    const auto oracle = fvp::evaluate_oracle(problem, grid);
    fvp::SolverConfig n40;
    fvp::SolverConfig n30;
    n30.n_trunc = 30;
    // At N = 30 the last retained Q coefficients sit near 1e-9 of the value, so
    // the default 1e-10 gate would reject the midpoint; loosen it for this run
    // and let the N 30 -> 40 change measure the truncation error instead.
    n30.tail_tol = 1e-8;
    const auto r40 = fvp::solve(problem, grid, n40);
    const auto r30 = fvp::solve(problem, grid, n30);
    double dev = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!r40.points[i].ok || !r30.points[i].ok) {
            return {false, fmt::format("x = {}: N=40 {} / N=30 {}", grid[i], r40.points[i].error_message,
                                       r30.points[i].error_message)};
        }
        dev = std::max(dev, std::abs(r40.values[i] - oracle[i]));
        drift = std::max(drift, std::abs(r40.values[i] - r30.values[i]));
    }
    return {dev < 1e-5 && drift < 1e-9,
            fmt::format("max deviation from superposition {:.2e} (< 1e-5), N 30 -> 40 change {:.2e} (< 1e-9)", dev,
                        drift)};
}

Outcome expansion_identity() {
    const std::vector<fvp::FunctionUnderTest> fns{
        fvp::exp_function(), fvp::sin_function(),
        fvp::polynomial_function({1.0, -2.0, 0.5, 0.25, -0.125, 0.3, -0.05})};
    const auto grid = linspace(-1.5, 1.5, 5);
    double worst = 0.0;
    int cases = 0;
    for (const auto& f : fns) {
        for (double a : grid) {
            for (double x : grid) {
                for (int n : {0, 2, 5, 10}) {
                    worst = std::max(worst, fvp::expand(f, a, x, n).identity_residual);
                    ++cases;
                }
            }
        }
    }
    return {worst < 1e-9, fmt::format("max |f - Z_n - R_n| {:.2e} (< 1e-9) over {} cases", worst, cases)};
}

Outcome residual_probe() {
    double transcendental = 0.0;
    for (const auto& f : {fvp::sin_function(), fvp::exp_function()}) {
        for (double x : linspace(-1.5, 1.5, 7)) {
            transcendental = std::max(transcendental, std::abs(fvp::ode_residual(f, 0.0, x, 30)));
        }
    }
    const Poly coeffs{1.0, -2.0, 0.5, 0.25, -0.125, 0.3, -0.05};
    const auto poly = fvp::polynomial_function(coeffs);
    double polynomial = 0.0;
    for (int n = 6; n <= 12; ++n) {
        for (double x : linspace(-1.5, 1.5, 7)) {
            polynomial = std::max(polynomial, std::abs(fvp::ode_residual(poly, 0.3, x, n)));
        }
    }
    return {transcendental < 1e-10 && polynomial < 1e-12,
            fmt::format("sin/exp at N = 30: {:.2e} (< 1e-10); degree-6 polynomial, N >= 6: {:.2e} (< 1e-12)",
                        transcendental, polynomial)};
}

Outcome property_suites() {
    std::mt19937_64 rng(0xacce97);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int bad_ring = 0;
    int bad_div = 0;
    int bad_deriv = 0;
    for (int i = 0; i < 1000; ++i) {
        const fvp::Jet a = fvp::testing::random_jet(rng, 0.3, 10);
        const fvp::Jet b = fvp::testing::random_jet(rng, 0.3, 10);
        const fvp::Jet c = fvp::testing::random_jet(rng, 0.3, 10);
        const double ring = std::max({fvp::testing::max_coeff_diff(a * (b + c), a * b + a * c),
                                      fvp::testing::max_coeff_diff((a * b) * c, a * (b * c)),
                                      fvp::testing::max_coeff_diff(a * b, b * a)});
        bad_ring += ring > 1e-12 ? 1 : 0;

        const fvp::Jet den = fvp::testing::random_unit_jet(rng, 0.3, i % 3, 10);
        const fvp::Jet back = (a / den) * den;
        bad_div += fvp::testing::max_coeff_diff(back, a) > 1e-10 * std::max(1.0, a.max_abs()) ? 1 : 0;

        Poly poly(static_cast<std::size_t>(3 + i % 6));
        for (double& x : poly) x = u(rng);
        const fvp::Jet f = fvp::from_polynomial(poly, {static_cast<int>(poly.size()), 0.1});
        const fvp::Jet df = fvp::derivative(f);
        const auto fd = [&](double h) {
            return std::abs(fvp::evaluate(df, h) - (fvp::evaluate(f, 2 * h) - fvp::evaluate(f, 0.0)) / (2 * h));
        };
        bad_deriv += fd(5e-4) > fd(1e-3) / 4.0 * 1.3 + 1e-11 ? 1 : 0;
    }

    // Rows against the independent Taylor recurrence, k = 1..4.
    int bad_rows = 0;
    for (int k = 1; k <= 4; ++k) {
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<Poly> polys;
            for (int j = 0; j <= k; ++j) {
                Poly p(static_cast<std::size_t>(1 + trial % 3));
                for (double& x : p) x = u(rng);
                polys.push_back(p);
            }
            std::vector<double> init(static_cast<std::size_t>(k));
            for (double& x : init) x = u(rng);
            const double c = u(rng);
            const auto rows = fvp::generate_rows(base_row(polys, {16, c}), 14);
            const auto truth = fvp::testing::taylor_derivatives(polys, c, init, 14);
            for (const auto& row : rows) {
                const double want = static_cast<double>(truth[static_cast<std::size_t>(row.n)]);
                const double got = static_cast<double>(fvp::testing::row_prediction(row, init));
                bad_rows += std::abs(got - want) > 1e-10 * std::max(1.0, std::abs(want)) ? 1 : 0;
            }
        }
    }

    // Solver: interpolation at the conditions and linearity.
    int bad_solver = 0;
    const fvp::FunctionValueProblem airy{2, {{0.0}, {0.0, 1.0}, {0.0}}, {{1.0, -0.4}, {0.0, 0.9}}};
    for (const auto& p : {exp_problem(0.0, 1.0, 1.0, std::exp(1.0)), airy}) {
        for (const auto& cond : p.conditions) {
            const auto r = fvp::solve_point(p, cond.x, fvp::SolverConfig{});
            bad_solver += (!r.ok || std::abs(r.value - cond.y) > 1e-8) ? 1 : 0;
        }
    }
    fvp::FunctionValueProblem scaled = airy;
    for (auto& cond : scaled.conditions) cond.y *= 3.7;
    const auto grid = linspace(-0.2, 1.2, 15);
    const auto r1 = fvp::solve(airy, grid, fvp::SolverConfig{});
    const auto r2 = fvp::solve(scaled, grid, fvp::SolverConfig{});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double want = 3.7 * r1.values[i];
        bad_solver += !(std::abs(r2.values[i] - want) <= 1e-9 * std::max(1.0, std::abs(want))) ? 1 : 0;
    }

    const int bad = bad_ring + bad_div + bad_deriv + bad_rows + bad_solver;
    return {bad == 0, fmt::format("violations: ring {}/1000, division {}/1000, derivative {}/1000, "
                                  "row oracle {}, solver interpolation+linearity {}",
                                  bad_ring, bad_div, bad_deriv, bad_rows, bad_solver)};
}

Outcome order_robustness() {
    // Swap the consumption order by listing the conditions both ways and
    // consuming them exactly as listed.
    double worst_listed = 0.0;
    double worst_default = 0.0;
    int recentered = 0;
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{-0.5, 0.8}}) {
        const double ya = 1.0;
        const double yb = 2.0;
        for (bool swap : {false, true}) {
            auto p = exp_problem(a, ya, b, yb);
            if (swap) std::swap(p.conditions[0], p.conditions[1]);
            fvp::SolverConfig listed;
            listed.ordering = fvp::ConditionOrder::as_given;
            const auto grid = linspace(a, b, 21);
            const auto rl = fvp::solve(p, grid, listed);
            const auto rd = fvp::solve(p, grid, fvp::SolverConfig{});
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double truth = two_point_exp(a, ya, b, yb, grid[i]);
                if (!rl.points[i].ok || !rd.points[i].ok) return {false, "point failed"};
                worst_listed = std::max(worst_listed, std::abs(rl.values[i] - truth));
                worst_default = std::max(worst_default, std::abs(rd.values[i] - truth));
                recentered += rl.points[i].route == fvp::PointRoute::recentered ? 1 : 0;
            }
        }
    }
    // Without re-expansion the listed order diverges near the first condition absorbed.
    fvp::SolverConfig listed;
    listed.ordering = fvp::ConditionOrder::as_given;
    const auto p = exp_problem(0.0, 1.0, 1.0, 2.0);
    const double x = 0.25;
    const auto seq = fvp::condition_ordering(p, x, listed.ordering);
    listed.tail_tol = 1e300;  // accept whatever the direct series gives
    const double direct = fvp::value(fvp::solve_jet_at(p, x, listed, seq));
    const double raw_error = std::abs(direct - two_point_exp(0.0, 1.0, 1.0, 2.0, x));
    return {worst_listed < 1e-8 && worst_default < 1e-8,
            fmt::format("both listed orders: max |error| {:.2e}, nearest-last: {:.2e} (< 1e-8); {} of 84 listed-order "
                        "points needed re-expansion; ungated direct series at x = 0.25 in listed order errs by {:.2e}",
                        worst_listed, worst_default, recentered, raw_error)};
}

}  // namespace

int main() {
    report(1, "y'' = y matches its two-point closed form", closed_form_grid);
    report(2, "Q entries of y'' = y are -sinh, cosh, -y(a)", q_closed_forms);
    report(3, "rows of y'' = x y reproduce the listed polynomials", airy_rows);
    report(4, "y'' = x y against superposition, truncation stable", variable_coefficients);
    report(5, "expansion identity f = Z_n + R_n", expansion_identity);
    report(6, "ode residual vanishes for sin, exp and polynomials", residual_probe);
    report(7, "property suites", property_suites);
    report(8, "condition consumption order does not change the answer", order_robustness);
    fmt::print("{} of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
