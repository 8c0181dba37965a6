#include "fvp/expansion.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "fvp/error.hpp"

namespace fvp {

double FunctionUnderTest::derivative_at(int k, double x) const {
    if (k < 0 || (max_order >= 0 && k > max_order) || !derivative) {
        throw Error(ErrorKind::capability,
                    name + ": derivative of order " + std::to_string(k) + " not available");
    }
    return derivative(k, x);
}

FunctionUnderTest exp_function(double lambda) {
    return {"exp", [lambda](int k, double x) { return std::pow(lambda, k) * std::exp(lambda * x); }};
}

FunctionUnderTest sin_function(double lambda) {
    return {"sin", [lambda](int k, double x) {
                const double s = std::pow(lambda, k);
                switch (k % 4) {
                    case 0: return s * std::sin(lambda * x);
                    case 1: return s * std::cos(lambda * x);
                    case 2: return -s * std::sin(lambda * x);
                    default: return -s * std::cos(lambda * x);
                }
            }};
}

FunctionUnderTest cos_function(double lambda) {
    return {"cos", [lambda](int k, double x) {
                const double s = std::pow(lambda, k);
                switch (k % 4) {
                    case 0: return s * std::cos(lambda * x);
                    case 1: return -s * std::sin(lambda * x);
                    case 2: return -s * std::cos(lambda * x);
                    default: return s * std::sin(lambda * x);
                }
            }};
}

FunctionUnderTest polynomial_function(std::vector<double> coeffs) {
    if (coeffs.empty()) {
        throw Error(ErrorKind::invalid_input, "polynomial needs at least one coefficient");
    }
    return {"poly", [c = std::move(coeffs)](int k, double x) {
                // k-th derivative via falling factorials, Horner in x.
                const int deg = static_cast<int>(c.size()) - 1;
                double acc = 0.0;
                for (int i = deg; i >= k; --i) {
                    double ff = 1.0;
                    for (int j = 0; j < k; ++j) ff *= static_cast<double>(i - j);
                    acc = acc * x + ff * c[static_cast<std::size_t>(i)];
                }
                return acc;
            }};
}

double z_expand(const FunctionUnderTest& f, double a, double x, int n) {
    if (n < 0) {
        throw Error(ErrorKind::invalid_input, "expansion order must be >= 0");
    }
    double sum = f.derivative_at(0, a);
    double weight = 1.0;  // (x-a)^k / k!, built incrementally
    double sign = 1.0;    // (-1)^(k-1)
    for (int k = 1; k <= n; ++k) {
        weight *= (x - a) / k;
        sum += sign * weight * f.derivative_at(k, x);
        sign = -sign;
    }
    return sum;
}

double ode_residual(const FunctionUnderTest& f, double a, double x, int n_terms) {
    if (n_terms < 0) {
        throw Error(ErrorKind::invalid_input, "residual order must be >= 0");
    }
    double sum = f.derivative_at(0, x) - f.derivative_at(0, a);
    double weight = 1.0;
    for (int k = 1; k <= n_terms; ++k) {
        weight *= -(x - a) / k;
        sum += weight * f.derivative_at(k, x);
    }
    return sum;
}

namespace {

struct Panel {
    double lo, mid, hi;
    double f_lo, f_mid, f_hi;
    double whole;
};

double simpson(double lo, double hi, double f_lo, double f_mid, double f_hi) {
    return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

double refine(const std::function<double(double)>& g, const Panel& p, double tol, int depth,
              const QuadratureOptions& opts) {
    const double lm = 0.5 * (p.lo + p.mid);
    const double rm = 0.5 * (p.mid + p.hi);
    const double f_lm = g(lm);
    const double f_rm = g(rm);
    const double left = simpson(p.lo, p.mid, p.f_lo, f_lm, p.f_mid);
    const double right = simpson(p.mid, p.hi, p.f_mid, f_rm, p.f_hi);
    const double delta = left + right - p.whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    if (depth >= opts.max_depth) {
        throw Error(ErrorKind::quadrature, "adaptive Simpson did not converge on [" +
                                               std::to_string(p.lo) + ", " + std::to_string(p.hi) +
                                               "], panel error estimate " +
                                               std::to_string(std::abs(delta) / 15.0));
    }
    return refine(g, {p.lo, lm, p.mid, p.f_lo, f_lm, p.f_mid, left}, 0.5 * tol, depth + 1, opts) +
           refine(g, {p.mid, rm, p.hi, p.f_mid, f_rm, p.f_hi, right}, 0.5 * tol, depth + 1, opts);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& g, double lo, double hi,
                        const QuadratureOptions& opts) {
    if (lo == hi) {
        return 0.0;
    }
    const double mid = 0.5 * (lo + hi);
    const double f_lo = g(lo);
    const double f_mid = g(mid);
    const double f_hi = g(hi);
    const Panel root{lo, mid, hi, f_lo, f_mid, f_hi, simpson(lo, hi, f_lo, f_mid, f_hi)};
    return refine(g, root, opts.abs_tol, 0, opts);
}

double remainder_quadrature(const FunctionUnderTest& f, double a, double x, int n,
                            const QuadratureOptions& opts) {
    if (n < 0) {
        throw Error(ErrorKind::invalid_input, "remainder order must be >= 0");
    }
    if (x == a) {
        return 0.0;
    }
    // Probe availability once so a missing derivative surfaces as a
    // capability error rather than from inside the integrator.
    (void)f.derivative_at(n + 1, a);
    const auto integrand = [&](double t) {
        double w = 1.0;  // (a - t)^n / n!
        for (int j = 1; j <= n; ++j) w *= (a - t) / j;
        return w * f.derivative_at(n + 1, t);
    };
    // Signed integral a -> x; Simpson handles lo > hi with a negative width.
    return adaptive_simpson(integrand, a, x, opts);
}

ExpansionReport expand(const FunctionUnderTest& f, double a, double x, int n,
                       const QuadratureOptions& opts) {
    ExpansionReport r;
    r.n = n;
    r.point_x = x;
    r.point_a = a;
    r.z_value = z_expand(f, a, x, n);
    r.r_value = remainder_quadrature(f, a, x, n, opts);
    r.identity_residual = std::abs(f.value_at(x) - r.z_value - r.r_value);
    return r;
}

}  // namespace fvp
