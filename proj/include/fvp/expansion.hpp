#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fvp {

/// A test function with analytic derivatives of every order.
struct FunctionUnderTest {
    std::string name;
    /// derivative(k, x) = f^(k)(x); derivative(0, x) is the value.
    std::function<double(int, double)> derivative;
    /// Highest derivative order available, or -1 for unbounded.
    int max_order = -1;

    double value_at(double x) const { return derivative(0, x); }
    double derivative_at(int k, double x) const;
};

FunctionUnderTest exp_function(double lambda = 1.0);
FunctionUnderTest sin_function(double lambda = 1.0);
FunctionUnderTest cos_function(double lambda = 1.0);
/// Monomial coefficients, lowest power first.
FunctionUnderTest polynomial_function(std::vector<double> coeffs);

struct ExpansionReport {
    int n = 0;
    double point_x = 0.0;
    double point_a = 0.0;
    double z_value = 0.0;
    double r_value = 0.0;
    double identity_residual = 0.0;
};

/// f(a) + sum_{k=1..n} (-1)^(k-1) f^(k)(x) (x-a)^k / k!
double z_expand(const FunctionUnderTest& f, double a, double x, int n);

struct QuadratureOptions {
    double abs_tol = 1e-12;
    /// Maximum bisection depth; 20 levels caps the work at 2^20 panels.
    int max_depth = 20;
};

/// (1/n!) * integral_a^x (a - t)^n f^(n+1)(t) dt, by adaptive Simpson.
double remainder_quadrature(const FunctionUnderTest& f, double a, double x, int n,
                            const QuadratureOptions& opts = {});

/// sum_{k=1..N} (-1)^k (x-a)^k / k! f^(k)(x) + f(x) - f(a); tends to zero
/// with N for functions whose remainder vanishes in the limit.
double ode_residual(const FunctionUnderTest& f, double a, double x, int n_terms);

ExpansionReport expand(const FunctionUnderTest& f, double a, double x, int n,
                       const QuadratureOptions& opts = {});

/// Adaptive Simpson with Richardson correction; throws ErrorKind::quadrature
/// when a panel cannot meet its share of the tolerance before max_depth.
double adaptive_simpson(const std::function<double(double)>& g, double lo, double hi,
                        const QuadratureOptions& opts);

}  // namespace fvp
