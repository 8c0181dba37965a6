#pragma once

#include <span>
#include <vector>

namespace fvp {

/// Shape of a freshly built jet: how many Taylor coefficients to carry and
/// where the expansion is centred.
struct JetSpec {
    int depth = 1;
    double center = 0.0;
};

/// Truncated Laurent/Taylor series of a real function about a fixed center.
///
/// A jet stores the coefficients of (x - c)^p for p = start() .. order().
/// Powers below start() are known to be zero; powers above order() are
/// unknown (truncated). A negative start() encodes a pole at the center and
/// is always normalized so that the leading stored coefficient is nonzero.
///
/// Arithmetic tracks how many coefficients remain trustworthy: a product or
/// quotient is only retained up to the lowest order both operands support.
/// Centers are immutable; combining jets with different centers throws.
class Jet {
public:
    /// Throws ErrorKind::invalid_input on empty or non-finite coefficients.
    Jet(double center, int start, std::vector<double> coeffs);

    static Jet constant(double value, const JetSpec& spec);
    /// The zero function, known to be zero through power `order`.
    static Jet zero(double center, int order);

    double center() const noexcept { return center_; }
    int start() const noexcept { return start_; }
    int order() const noexcept { return start_ + static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }

    /// Coefficient of (x - c)^power; zero below start(). Throws
    /// ErrorKind::depth_exhausted above order().
    double coeff(int power) const;

    /// Lowest power with a nonzero coefficient. The zero jet reports 0.
    int valuation() const noexcept;
    bool is_zero() const noexcept;
    double max_abs() const noexcept;

    Jet operator-() const;
    Jet& operator*=(double s);

    friend bool operator==(const Jet&, const Jet&) = default;

private:
    // Valuation used for truncation bookkeeping; the zero jet is "zero up to
    // its order", so it behaves as if its first nonzero power were order+1.
    int effective_valuation() const noexcept;
    void normalize();

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& num, const Jet& den);
    friend Jet derivative(const Jet& a);

    double center_ = 0.0;
    int start_ = 0;
    std::vector<double> coeffs_;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(double s, Jet a);
Jet operator*(Jet a, double s);

/// Laurent division. The result valuation is num.valuation() -
/// den.valuation(); throws ErrorKind::singular_denominator when den is zero
/// on every retained coefficient.
Jet operator/(const Jet& num, const Jet& den);

/// d/dx. Retains one coefficient fewer than the input; throws
/// ErrorKind::depth_exhausted when nothing would be left.
Jet derivative(const Jet& a);

/// Jet of the polynomial sum_i poly[i] x^i about spec.center.
Jet from_polynomial(std::span<const double> poly, const JetSpec& spec);

/// Jet of (x - point)^n about spec.center, expanded binomially.
Jet pow_linear(double point, int n, const JetSpec& spec);

/// Value of the represented function at the center. Throws
/// ErrorKind::pole_at_center when the valuation is negative.
double value(const Jet& a);

/// Evaluates the retained series at center + offset (Horner). Poles allowed
/// as long as offset != 0.
double evaluate(const Jet& a, double offset);

}  // namespace fvp
