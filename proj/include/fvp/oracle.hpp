#pragma once

#include <span>
#include <vector>

#include "fvp/reduction.hpp"
#include "fvp/solver.hpp"

namespace fvp {

/// Companion first-order form of y^(k) = p_1 y^(k-1) + ... + p_k y + p_{k+1}
/// with state (y, y', ..., y^(k-1)).
class LinearOdeSystem {
public:
    LinearOdeSystem(int order, std::vector<std::vector<double>> coeffs);
    explicit LinearOdeSystem(const FunctionValueProblem& problem);

    int order() const noexcept { return order_; }

    /// d/dx of the state. `inhomogeneous` toggles the p_{k+1} term.
    void rhs(double x, std::span<const double> state, std::span<double> out,
             bool inhomogeneous = true) const;

private:
    int order_;
    std::vector<std::vector<double>> coeffs_;
};

struct IvpOptions {
    double step_tol = 1e-12;
    int initial_steps = 16;
    /// Refinement stops with ErrorKind::oracle_failure beyond this many steps.
    long max_steps = 1L << 22;
    bool inhomogeneous = true;
};

/// Fixed-step RK4 from x0 to x1, halving the step until two successive
/// answers agree to step_tol (max norm); returns the Richardson-combined
/// final pair.
std::vector<double> integrate_ivp(const LinearOdeSystem& sys, double x0,
                                  std::span<const double> state0, double x1,
                                  const IvpOptions& opts = {});

/// Linear superposition solution of a function value problem: k homogeneous
/// basis solutions plus one particular solution, all started at the
/// smallest condition abscissa, matched to the prescribed values.
class SuperpositionSolution {
public:
    SuperpositionSolution(LinearOdeSystem sys, std::span<const Condition> conditions,
                          const IvpOptions& opts = {});

    /// Re-integrates from the anchor to x with the matched initial state.
    double operator()(double x) const;
    std::vector<double> state_at(double x) const;

    double anchor() const noexcept { return anchor_; }
    const std::vector<double>& initial_state() const noexcept { return initial_state_; }
    /// 2-norm condition number of the matching matrix.
    double matching_condition_number() const noexcept { return condition_number_; }

private:
    LinearOdeSystem sys_;
    IvpOptions opts_;
    double anchor_ = 0.0;
    std::vector<double> initial_state_;
    double condition_number_ = 0.0;
};

/// Throws ErrorKind::oracle_singular when the conditions do not determine a
/// unique solution of this equation.
SuperpositionSolution solve_bvp_superposition(const LinearOdeSystem& sys,
                                              std::span<const Condition> conditions,
                                              const IvpOptions& opts = {});

/// Superposition values of the problem's solution at each point.
std::vector<double> evaluate_oracle(const FunctionValueProblem& problem,
                                    std::span<const double> points, const IvpOptions& opts = {});

}  // namespace fvp
