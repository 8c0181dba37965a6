#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "fvp/oracle.hpp"
#include "fvp/solver.hpp"

namespace fvp {

/// Everything a CLI run needs, read from a sectioned key-value file:
///
///   [problem]      order = 2, p1 = ..., p{k+1} = ... (monomial coefficients,
///                  lowest power first, whitespace separated)
///   [conditions]   one "x y" pair per line, x_1 first
///   [grid]         start/stop/count, or points = x0 x1 ...
///   [solver]       n_trunc, depth_margin, tail_tol, ordering, threads
///   [oracle]       enabled, tolerance, step_tol
///
/// '#' starts a comment anywhere on a line. See configs/ for examples.
struct ProblemConfig {
    FunctionValueProblem problem;
    std::vector<double> grid;
    SolverConfig solver;
    bool oracle = false;
    double oracle_tolerance = 1e-8;
    IvpOptions oracle_ivp;
};

/// Throws ErrorKind::config with a message naming the offending key (or
/// line) on any malformed or inconsistent input.
ProblemConfig parse_problem_config(std::istream& in);
ProblemConfig load_problem_config(const std::filesystem::path& path);

/// count evenly spaced points from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, int count);

}  // namespace fvp
