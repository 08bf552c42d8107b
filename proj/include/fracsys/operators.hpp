#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracsys/grid.hpp"

// Finite-horizon h-difference and fractional h-sum operators on sampled
// sequences. Sequences live on (hN)_a truncated at a + N h; every operator
// documents the grid its result lives on.

namespace fracsys {

/// (x(t+h) - x(t)) / h on the same offset a; the result has one sample fewer.
/// Throws std::length_error for fewer than 2 samples.
[[nodiscard]] SampledSequence forward_diff(const SampledSequence& x);

/// h * sum_{k<n} x(a+kh), the h-difference sum at t = a + n h (0 at n = 0).
/// Throws std::out_of_range when n > x.size().
[[nodiscard]] double h_sum(const SampledSequence& x, std::size_t n);

/// Weights w_j = binom(j + order - 1, j), j = 0..count-1, via the ratio
/// recurrence w_{j+1} = w_j (j + order) / (j + 1).
[[nodiscard]] std::vector<double> sum_weights(double order, std::size_t count);

/// Fractional h-sum of the given order evaluated at t = a + (order + n) h:
///   h^order * sum_{k=0}^{n} binom(n-k+order-1, n-k) x(a+kh).
/// Throws DomainError for order <= 0 (the order-0 identity is the caller's
/// business) and std::out_of_range for n > N.
[[nodiscard]] double frac_sum(const SampledSequence& x, double order, std::size_t n);

/// Point at which frac_sum(x, order, n) is evaluated.
[[nodiscard]] inline double frac_sum_point(const StepGrid& g, double order, std::size_t n) noexcept {
    return g.a + (order + static_cast<double>(n)) * g.h;
}

/// The whole fractional h-sum as a sequence on the grid a + order*h.
[[nodiscard]] SampledSequence frac_sum_sequence(const SampledSequence& x, double order);

/// Caputo h-difference of order in (0,1] at t = a + (1-order) h + n h:
/// the order-(1-order) sum of forward_diff(x); plain forward difference when
/// order == 1. Needs x.size() >= n + 2.
[[nodiscard]] double caputo_diff(const SampledSequence& x, double order, std::size_t n);

}  // namespace fracsys
