#pragma once

// Gamma-ratio primitives: the h-factorial power and the generalized binomial.
//
// Both follow the convention that a ratio whose denominator gamma sits at a
// pole (non-positive integer argument) is exactly zero. A numerator pole is a
// domain error. Isolated values are computed as exponentials of log-gamma
// differences so that large arguments do not overflow the intermediate gammas.

namespace fracsys {

/// Integrality tolerance for the pole test.
inline constexpr double kPoleTolerance = 1e-9;

/// True when x is within kPoleTolerance of 0, -1, -2, ...
[[nodiscard]] bool is_nonpositive_integer(double x) noexcept;

/// log|Gamma(x)| together with the sign of Gamma(x). x must not be a pole.
struct SignedLogGamma {
    double log_abs;
    int sign;
};
[[nodiscard]] SignedLogGamma signed_lgamma(double x);

/// t^(order)_h = h^order * Gamma(t/h + 1) / Gamma(t/h + 1 - order).
///
/// Returns exactly 0 when t/h + 1 - order is a pole. Throws DomainError when
/// h <= 0 or t/h is a negative integer (this includes the case where both
/// gammas are at poles), and OverflowError when the value is not representable.
[[nodiscard]] double h_factorial(double t, double order, double h);

/// binom(a, b) = Gamma(a+1) / (Gamma(b+1) Gamma(a-b+1)).
///
/// Returns exactly 0 when either denominator argument is a pole; throws
/// DomainError when a+1 is a pole.
[[nodiscard]] double gen_binomial(double a, double b);

}  // namespace fracsys
