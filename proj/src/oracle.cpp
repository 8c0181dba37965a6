#include "fvp/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fvp/error.hpp"

namespace fvp {

namespace {

double horner(const std::vector<double>& poly, double x) {
    double acc = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

std::vector<double> rk4_fixed(const LinearOdeSystem& sys, double x0, std::span<const double> s0,
                              double x1, long steps, bool inhomogeneous) {
    const auto k = static_cast<std::size_t>(sys.order());
    std::vector<double> y(s0.begin(), s0.end());
    std::vector<double> k1(k), k2(k), k3(k), k4(k), tmp(k);
    const double h = (x1 - x0) / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) {
        const double x = x0 + static_cast<double>(i) * h;
        sys.rhs(x, y, k1, inhomogeneous);
        for (std::size_t j = 0; j < k; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
        sys.rhs(x + 0.5 * h, tmp, k2, inhomogeneous);
        for (std::size_t j = 0; j < k; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
        sys.rhs(x + 0.5 * h, tmp, k3, inhomogeneous);
        for (std::size_t j = 0; j < k; ++j) tmp[j] = y[j] + h * k3[j];
        sys.rhs(x + h, tmp, k4, inhomogeneous);
        for (std::size_t j = 0; j < k; ++j) {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    return y;
}

}  // namespace

LinearOdeSystem::LinearOdeSystem(int order, std::vector<std::vector<double>> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
    if (order_ < 1 || static_cast<int>(coeffs_.size()) != order_ + 1) {
        throw Error(ErrorKind::invalid_input, "linear ODE of order k needs k+1 coefficient polynomials");
    }
    for (auto& p : coeffs_) {
        if (p.empty()) p.push_back(0.0);
    }
}

LinearOdeSystem::LinearOdeSystem(const FunctionValueProblem& problem)
    : LinearOdeSystem(problem.order, problem.base_coeffs) {}

void LinearOdeSystem::rhs(double x, std::span<const double> state, std::span<double> out,
                          bool inhomogeneous) const {
    const auto k = static_cast<std::size_t>(order_);
    for (std::size_t j = 0; j + 1 < k; ++j) {
        out[j] = state[j + 1];
    }
    // p_j multiplies y^(k-j), i.e. state[k-j].
    double top = inhomogeneous ? horner(coeffs_[k], x) : 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
        top += horner(coeffs_[j - 1], x) * state[k - j];
    }
    out[k - 1] = top;
}

std::vector<double> integrate_ivp(const LinearOdeSystem& sys, double x0,
                                  std::span<const double> state0, double x1,
                                  const IvpOptions& opts) {
    if (static_cast<int>(state0.size()) != sys.order()) {
        throw Error(ErrorKind::invalid_input, "initial state size does not match the ODE order");
    }
    if (!std::isfinite(x0) || !std::isfinite(x1) ||
        !std::all_of(state0.begin(), state0.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorKind::invalid_input, "integrate_ivp: non-finite input");
    }
    if (x0 == x1) {
        return {state0.begin(), state0.end()};
    }
    long steps = std::max(opts.initial_steps, 1);
    std::vector<double> coarse = rk4_fixed(sys, x0, state0, x1, steps, opts.inhomogeneous);
    while (true) {
        steps *= 2;
        if (steps > opts.max_steps) {
            throw Error(ErrorKind::oracle_failure,
                        "RK4 step halving did not reach tolerance " + std::to_string(opts.step_tol) +
                            " between x = " + std::to_string(x0) + " and " + std::to_string(x1));
        }
        std::vector<double> fine = rk4_fixed(sys, x0, state0, x1, steps, opts.inhomogeneous);
        double diff = 0.0;
        for (std::size_t j = 0; j < fine.size(); ++j) {
            diff = std::max(diff, std::abs(fine[j] - coarse[j]));
        }
        if (diff < opts.step_tol) {
            for (std::size_t j = 0; j < fine.size(); ++j) {
                fine[j] += (fine[j] - coarse[j]) / 15.0;
            }
            return fine;
        }
        coarse = std::move(fine);
    }
}

SuperpositionSolution::SuperpositionSolution(LinearOdeSystem sys,
                                             std::span<const Condition> conditions,
                                             const IvpOptions& opts)
    : sys_(std::move(sys)), opts_(opts) {
    const int k = sys_.order();
    if (static_cast<int>(conditions.size()) != k) {
        throw Error(ErrorKind::invalid_input, "superposition needs exactly k conditions");
    }
    anchor_ = std::min_element(conditions.begin(), conditions.end(),
                               [](const Condition& a, const Condition& b) { return a.x < b.x; })
                  ->x;

    Eigen::MatrixXd matching(k, k);
    Eigen::VectorXd rhs(k);
    IvpOptions homogeneous = opts_;
    homogeneous.inhomogeneous = false;
    IvpOptions particular = opts_;
    particular.inhomogeneous = true;
    const std::vector<double> zero(static_cast<std::size_t>(k), 0.0);

    for (int i = 0; i < k; ++i) {
        const Condition& c = conditions[static_cast<std::size_t>(i)];
        rhs(i) = c.y - integrate_ivp(sys_, anchor_, zero, c.x, particular)[0];
        for (int j = 0; j < k; ++j) {
            std::vector<double> basis(static_cast<std::size_t>(k), 0.0);
            basis[static_cast<std::size_t>(j)] = 1.0;
            matching(i, j) = integrate_ivp(sys_, anchor_, basis, c.x, homogeneous)[0];
        }
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(matching);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    condition_number_ = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(smallest > 1e-13 * sv(0))) {
        throw Error(ErrorKind::oracle_singular,
                    "matching matrix is singular (condition number " +
                        std::to_string(condition_number_) + ")");
    }
    const Eigen::VectorXd coeffs = matching.fullPivLu().solve(rhs);
    initial_state_.assign(coeffs.data(), coeffs.data() + k);
}

std::vector<double> SuperpositionSolution::state_at(double x) const {
    IvpOptions full = opts_;
    full.inhomogeneous = true;
    // Initial state c at the anchor gives sum_j c_j phi_j + phi_p by linearity.
    return integrate_ivp(sys_, anchor_, initial_state_, x, full);
}

double SuperpositionSolution::operator()(double x) const { return state_at(x)[0]; }

SuperpositionSolution solve_bvp_superposition(const LinearOdeSystem& sys,
                                              std::span<const Condition> conditions,
                                              const IvpOptions& opts) {
    return SuperpositionSolution(sys, conditions, opts);
}

std::vector<double> evaluate_oracle(const FunctionValueProblem& problem,
                                    std::span<const double> points, const IvpOptions& opts) {
    validate(problem);
    const SuperpositionSolution sol =
        solve_bvp_superposition(LinearOdeSystem(problem), problem.conditions, opts);
    std::vector<double> out;
    out.reserve(points.size());
    for (double x : points) {
        out.push_back(sol(x));
    }
    return out;
}

}  // namespace fvp
