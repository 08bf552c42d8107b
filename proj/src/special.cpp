#include "fracsys/special.hpp"

#include <math.h>

#include <cmath>
#include <string>

#include "fracsys/errors.hpp"

namespace fracsys {

bool is_nonpositive_integer(double x) noexcept {
    if (!(x <= kPoleTolerance)) return false;
    return std::abs(x - std::round(x)) <= kPoleTolerance;
}

SignedLogGamma signed_lgamma(double x) {
    if (is_nonpositive_integer(x)) {
        throw DomainError("gamma pole at " + std::to_string(x));
    }
    // lgamma_r instead of std::lgamma: the latter writes the global signgam.
    int sign = 1;
    const double log_abs = ::lgamma_r(x, &sign);
    return {log_abs, sign};
}

double h_factorial(double t, double order, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("h_factorial: step h must be positive");
    const double u = t / h;
    if (is_nonpositive_integer(u + 1.0)) {
        throw DomainError("h_factorial: t/h = " + std::to_string(u) + " is a negative integer");
    }
    if (is_nonpositive_integer(u + 1.0 - order)) return 0.0;

    const auto num = signed_lgamma(u + 1.0);
    const auto den = signed_lgamma(u + 1.0 - order);
    const double value =
        num.sign * den.sign * std::exp(num.log_abs - den.log_abs + order * std::log(h));
    if (!std::isfinite(value)) {
        throw OverflowError("h_factorial overflow at t=" + std::to_string(t) +
                            ", order=" + std::to_string(order));
    }
    return value;
}

double gen_binomial(double a, double b) {
    if (is_nonpositive_integer(a + 1.0)) {
        throw DomainError("gen_binomial: numerator pole at a=" + std::to_string(a));
    }
    if (is_nonpositive_integer(b + 1.0) || is_nonpositive_integer(a - b + 1.0)) return 0.0;

    const auto num = signed_lgamma(a + 1.0);
    const auto d1 = signed_lgamma(b + 1.0);
    const auto d2 = signed_lgamma(a - b + 1.0);
    const double value =
        num.sign * d1.sign * d2.sign * std::exp(num.log_abs - d1.log_abs - d2.log_abs);
    if (!std::isfinite(value)) {
        throw OverflowError("gen_binomial overflow at a=" + std::to_string(a) +
                            ", b=" + std::to_string(b));
    }
    return value;
}

}  // namespace fracsys
