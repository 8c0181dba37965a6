#include "fvp/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fvp/error.hpp"

namespace fvp {

namespace {

void require_same_center(const Jet& a, const Jet& b, const char* op) {
    if (a.center() != b.center()) {
        throw Error(ErrorKind::center_mismatch,
                    std::string(op) + ": jets centred at " + std::to_string(a.center()) + " and " +
                        std::to_string(b.center()));
    }
}

void require_finite(std::span<const double> coeffs, const char* op) {
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw Error(ErrorKind::non_finite, std::string(op) + ": non-finite coefficient");
        }
    }
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid_input";
        case ErrorKind::center_mismatch: return "center_mismatch";
        case ErrorKind::singular_denominator: return "singular_denominator";
        case ErrorKind::depth_exhausted: return "depth_exhausted";
        case ErrorKind::pole_at_center: return "pole_at_center";
        case ErrorKind::non_finite: return "non_finite";
        case ErrorKind::capability: return "capability";
        case ErrorKind::quadrature: return "quadrature";
        case ErrorKind::stage_singular: return "stage_singular";
        case ErrorKind::recursion_depth: return "recursion_depth";
        case ErrorKind::tail_not_converged: return "tail_not_converged";
        case ErrorKind::oracle_failure: return "oracle_failure";
        case ErrorKind::oracle_singular: return "oracle_singular";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

Jet::Jet(double center, int start, std::vector<double> coeffs)
    : center_(center), start_(start), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error(ErrorKind::invalid_input, "jet needs at least one coefficient");
    }
    if (!std::isfinite(center_)) {
        throw Error(ErrorKind::invalid_input, "jet center must be finite");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw Error(ErrorKind::invalid_input, "jet coefficients must be finite");
        }
    }
    normalize();
}

Jet Jet::constant(double value, const JetSpec& spec) {
    if (spec.depth < 1) {
        throw Error(ErrorKind::invalid_input, "jet depth must be >= 1");
    }
    std::vector<double> c(static_cast<std::size_t>(spec.depth), 0.0);
    c[0] = value;
    return Jet(spec.center, 0, std::move(c));
}

Jet Jet::zero(double center, int order) {
    if (order < 0) {
        return Jet(center, order, {0.0});
    }
    return Jet(center, 0, std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0));
}

void Jet::normalize() {
    // Strip exact leading zeros of the principal part so that a negative
    // start always names a genuine pole.
    std::size_t lead = 0;
    while (start_ + static_cast<int>(lead) < 0 && lead + 1 < coeffs_.size() && coeffs_[lead] == 0.0) {
        ++lead;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        start_ += static_cast<int>(lead);
    }
}

double Jet::coeff(int power) const {
    if (power > order()) {
        throw Error(ErrorKind::depth_exhausted,
                    "coefficient of power " + std::to_string(power) + " beyond retained order " +
                        std::to_string(order()));
    }
    if (power < start_) {
        return 0.0;
    }
    return coeffs_[static_cast<std::size_t>(power - start_)];
}

int Jet::valuation() const noexcept {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != 0.0) {
            return start_ + static_cast<int>(i);
        }
    }
    return 0;
}

bool Jet::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

int Jet::effective_valuation() const noexcept {
    return is_zero() ? order() + 1 : valuation();
}

double Jet::max_abs() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& c : r.coeffs_) {
        c = -c;
    }
    return r;
}

Jet& Jet::operator*=(double s) {
    if (!std::isfinite(s)) {
        throw Error(ErrorKind::non_finite, "scale: non-finite factor");
    }
    for (double& c : coeffs_) {
        c *= s;
    }
    require_finite(coeffs_, "scale");
    if (s == 0.0) {
        *this = Jet::zero(center_, order());
    }
    return *this;
}

namespace {

Jet add_scaled(const Jet& a, const Jet& b, double sign, const char* op) {
    require_same_center(a, b, op);
    const int ord = std::min(a.order(), b.order());
    const int lo = std::min(a.start(), b.start());
    if (ord < lo) {
        return Jet::zero(a.center(), ord);
    }
    std::vector<double> c(static_cast<std::size_t>(ord - lo + 1));
    for (int p = lo; p <= ord; ++p) {
        c[static_cast<std::size_t>(p - lo)] = a.coeff(p) + sign * b.coeff(p);
    }
    require_finite(c, op);
    return Jet(a.center(), lo, std::move(c));
}

}  // namespace

Jet operator+(const Jet& a, const Jet& b) { return add_scaled(a, b, 1.0, "add"); }

Jet operator-(const Jet& a, const Jet& b) { return add_scaled(a, b, -1.0, "sub"); }

Jet operator*(const Jet& a, const Jet& b) {
    require_same_center(a, b, "mul");
    const int va = a.effective_valuation();
    const int vb = b.effective_valuation();
    const int ord = std::min(a.order() + vb, b.order() + va);
    if (a.is_zero() || b.is_zero()) {
        return Jet::zero(a.center(), ord);
    }
    const int lo = va + vb;
    std::vector<double> c(static_cast<std::size_t>(ord - lo + 1), 0.0);
    for (int p = lo; p <= ord; ++p) {
        double sum = 0.0;
        for (int i = va; i <= p - vb; ++i) {
            sum += a.coeff(i) * b.coeff(p - i);
        }
        c[static_cast<std::size_t>(p - lo)] = sum;
    }
    require_finite(c, "mul");
    return Jet(a.center(), lo, std::move(c));
}

Jet operator*(double s, Jet a) { return a *= s; }

Jet operator*(Jet a, double s) { return a *= s; }

Jet operator/(const Jet& num, const Jet& den) {
    require_same_center(num, den, "div");
    if (den.is_zero()) {
        throw Error(ErrorKind::singular_denominator,
                    "division by a jet that is zero through power " + std::to_string(den.order()));
    }
    const int dv = den.valuation();
    const int den_rel = den.order() - dv;
    if (num.is_zero()) {
        return Jet::zero(num.center(), num.order() - dv);
    }
    const int nv = num.valuation();
    const int num_rel = num.order() - nv;
    const int lo = nv - dv;
    const int len = std::min(num_rel, den_rel) + 1;

    const double lead = den.coeff(dv);
    std::vector<double> q(static_cast<std::size_t>(len), 0.0);
    for (int j = 0; j < len; ++j) {
        double acc = num.coeff(nv + j);
        for (int i = 1; i <= j; ++i) {
            acc -= den.coeff(dv + i) * q[static_cast<std::size_t>(j - i)];
        }
        q[static_cast<std::size_t>(j)] = acc / lead;
    }
    require_finite(q, "div");
    return Jet(num.center(), lo, std::move(q));
}

Jet derivative(const Jet& a) {
    const int ord = a.order() - 1;
    if (a.start() == 0) {
        if (ord < 0) {
            throw Error(ErrorKind::depth_exhausted,
                        "derivative of a jet retaining only the constant term");
        }
        std::vector<double> c(static_cast<std::size_t>(ord + 1));
        for (int p = 0; p <= ord; ++p) {
            c[static_cast<std::size_t>(p)] = static_cast<double>(p + 1) * a.coeff(p + 1);
        }
        return Jet(a.center(), 0, std::move(c));
    }
    // Nonzero start: the constant term (if present) differentiates to the
    // zero coefficient of power -1, which normalization drops when needed.
    const int lo = a.start() - 1;
    if (ord < lo) {
        throw Error(ErrorKind::depth_exhausted, "derivative exhausted the retained coefficients");
    }
    std::vector<double> c(static_cast<std::size_t>(ord - lo + 1));
    for (int p = lo; p <= ord; ++p) {
        c[static_cast<std::size_t>(p - lo)] = static_cast<double>(p + 1) * a.coeff(p + 1);
    }
    return Jet(a.center(), lo, std::move(c));
}

Jet from_polynomial(std::span<const double> poly, const JetSpec& spec) {
    if (poly.empty()) {
        throw Error(ErrorKind::invalid_input, "polynomial needs at least one coefficient");
    }
    if (spec.depth < 1) {
        throw Error(ErrorKind::invalid_input, "jet depth must be >= 1");
    }
    for (double c : poly) {
        if (!std::isfinite(c)) {
            throw Error(ErrorKind::invalid_input, "polynomial coefficients must be finite");
        }
    }
    // Repeated synthetic division by (x - c) yields the Taylor coefficients
    // about c exactly (in exact arithmetic) for any degree.
    std::vector<double> work(poly.begin(), poly.end());
    std::vector<double> out(static_cast<std::size_t>(spec.depth), 0.0);
    const int deg = static_cast<int>(work.size()) - 1;
    for (int j = 0; j <= deg && j < spec.depth; ++j) {
        double r = 0.0;
        for (int i = deg; i >= j; --i) {
            r = r * spec.center + work[static_cast<std::size_t>(i)];
            work[static_cast<std::size_t>(i)] = r;
        }
        out[static_cast<std::size_t>(j)] = work[static_cast<std::size_t>(j)];
    }
    return Jet(spec.center, 0, std::move(out));
}

Jet pow_linear(double point, int n, const JetSpec& spec) {
    if (n < 0) {
        throw Error(ErrorKind::invalid_input, "pow_linear needs n >= 0");
    }
    if (spec.depth < 1) {
        throw Error(ErrorKind::invalid_input, "jet depth must be >= 1");
    }
    const double shift = spec.center - point;
    std::vector<double> c(static_cast<std::size_t>(spec.depth), 0.0);
    // coefficient j = C(n, j) * shift^(n-j), built from j = n downwards.
    double binom = 1.0;
    double shift_pow = 1.0;
    for (int j = n; j >= 0; --j) {
        if (j < spec.depth) {
            c[static_cast<std::size_t>(j)] = binom * shift_pow;
        }
        binom = binom * static_cast<double>(j) / static_cast<double>(n - j + 1);
        shift_pow *= shift;
    }
    require_finite(c, "pow_linear");
    return Jet(spec.center, 0, std::move(c));
}

double value(const Jet& a) {
    if (a.valuation() < 0) {
        throw Error(ErrorKind::pole_at_center,
                    "jet has a pole of order " + std::to_string(-a.valuation()) + " at " +
                        std::to_string(a.center()));
    }
    if (a.order() < 0) {
        throw Error(ErrorKind::depth_exhausted, "jet retains no constant term");
    }
    return a.coeff(0);
}

double evaluate(const Jet& a, double offset) {
    const auto c = a.coeffs();
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * offset + *it;
    }
    return acc * std::pow(offset, a.start());
}

}  // namespace fvp
