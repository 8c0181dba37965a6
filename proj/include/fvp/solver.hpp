#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fvp/error.hpp"
#include "fvp/jet.hpp"
#include "fvp/reduction.hpp"

namespace fvp {

/// y^(k) = p_1 y^(k-1) + ... + p_k y + p_{k+1}, with y(x_i) = y_i for
/// i = 1..k. Coefficients are polynomials in x, lowest power first.
struct FunctionValueProblem {
    int order = 0;
    std::vector<std::vector<double>> base_coeffs;
    /// x_1 .. x_k. The top stage absorbs x_k, the last stage x_1.
    std::vector<Condition> conditions;
};

/// Throws ErrorKind::invalid_input naming the violated requirement.
void validate(const FunctionValueProblem& problem);

enum class ConditionOrder {
    /// Per evaluation point, absorb the farthest condition first and the
    /// nearest one last.
    nearest_last,
    /// Absorb x_k, x_{k-1}, ..., x_1 exactly as listed.
    as_given,
};

struct SolverConfig {
    int n_trunc = 40;
    int depth_margin = 8;
    double tail_tol = 1e-10;
    /// Lowest powers of each Q entry examined by the tail gate.
    int tail_powers = 8;
    /// A re-expanded jet keeps only the coefficients that agree with a
    /// second solve at n_trunc - stability_step.
    int stability_step = 8;
    ConditionOrder ordering = ConditionOrder::nearest_last;
    /// Evaluation points this close to a condition abscissa are snapped onto it.
    double coincidence_tol = 1e-9;
    /// Distances beyond this from any condition point raise a warning flag.
    double interval_warn = 3.0;
    unsigned threads = 1;
};

void validate(const SolverConfig& cfg);

/// Jet depth requested up front. Stage m differentiates its base row
/// n_trunc - m times, so the stages together consume
/// sum_{m=1..k} (n_trunc - m) coefficients; depth_margin per stage on top.
int jet_depth(int order, const SolverConfig& cfg);

/// Consumption sequence: element 0 is absorbed by the top (order-k) stage.
/// This overload keeps the listed order (x_k first).
std::vector<Condition> condition_ordering(const FunctionValueProblem& problem);
std::vector<Condition> condition_ordering(const FunctionValueProblem& problem, double center,
                                          ConditionOrder policy);

struct StageDiagnostics {
    int stage_order = 0;
    Condition condition;
    int n_trunc = 0;
    double max_tail = 0.0;
    /// max over entries of tail / max(1, |entry|); the gate compares this to tail_tol.
    double max_tail_ratio = 0.0;
    int q1_valuation = 0;
};

enum class PointRoute {
    series,           ///< regular evaluation at the requested point
    coincident,       ///< center snapped onto a condition abscissa, series value used
    condition_value,  ///< series failed at a condition abscissa; its prescribed value returned
    recentered,       ///< series at the point did not converge; Taylor jet from the nearest condition abscissa
};

std::string_view to_string(PointRoute route) noexcept;

struct PointResult {
    double x = 0.0;
    double value = 0.0;
    bool ok = false;
    std::optional<ErrorKind> error_kind;
    std::string error_message;
    PointRoute route = PointRoute::series;
    bool interval_warning = false;
    std::vector<StageDiagnostics> stages;
};

struct SolutionReport {
    std::vector<double> eval_points;
    /// NaN where the corresponding point failed.
    std::vector<double> values;
    std::vector<PointResult> points;
    std::optional<std::vector<double>> oracle_deviation;

    bool all_ok() const;
};

/// Runs every stage at one center with an explicit consumption sequence and
/// returns the solution jet. Throws on any stage failure; no coincidence
/// handling. `diagnostics`, when given, receives one record per stage.
Jet solve_jet_at(const FunctionValueProblem& problem, double center, const SolverConfig& cfg,
                 std::span<const Condition> consumption,
                 std::vector<StageDiagnostics>* diagnostics = nullptr);

/// Value of a Taylor jet at `offset` from its center. Throws
/// ErrorKind::tail_not_converged when the last two retained terms exceed
/// tail_tol relative to max(1, |value|), ErrorKind::pole_at_center for a
/// Laurent jet.
double evaluate_taylor(const Jet& jet, double offset, double tail_tol);

/// One evaluation point with errors captured. The series is first formed at
/// the point itself (snapped onto a condition abscissa within
/// coincidence_tol). If its Q series do not converge there, the solution jet
/// is formed at the nearest condition abscissa and evaluated at the point.
PointResult solve_point(const FunctionValueProblem& problem, double x, const SolverConfig& cfg);

/// Evaluates the solution at every point. Failures are recorded per point and
/// never abort the others. Results do not depend on cfg.threads.
SolutionReport solve(const FunctionValueProblem& problem, std::span<const double> eval_points,
                     const SolverConfig& cfg);

}  // namespace fvp
