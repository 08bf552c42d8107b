#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Long-memory convolution kernels. Every kernel has a plain serial reference
// in `fracsys::serial` and an OpenMP version in `fracsys::parallel`.
//
// The parallel versions never depend on the thread count for their result:
// per-point loops keep the serial summation order, and reductions are split
// into fixed-size blocks that are combined in block order.

namespace fracsys {

enum class Execution { Serial, Parallel };

/// Rows are stored row-major: rows[r * dim + d].
struct RowView {
    std::span<const double> data;
    std::size_t dim = 1;

    [[nodiscard]] std::size_t count() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
};

/// Block size of the blocked lagged reduction.
inline constexpr std::size_t kReductionBlock = 2048;

namespace serial {

/// out[d] = sum_{r<count} weights[count-1-r] * rows[r][d].
void lagged_sum(std::span<const double> weights, RowView rows, std::size_t count,
                std::span<double> out);

/// out[n][d] = sum_{r=0}^{n-lag} weights[n-lag-r] * rows[r][d], n = 0..count-1
/// (zero when n < lag). Returns count*dim values, row-major.
[[nodiscard]] std::vector<double> causal_convolution(std::span<const double> weights, RowView rows,
                                                     std::size_t lag);

/// h^order * sum_{k<=n} binom(n-k+order-1, n-k) x[k] for every n.
[[nodiscard]] std::vector<double> frac_sum_all(std::span<const double> x, double h, double order);

}  // namespace serial

namespace parallel {

void lagged_sum(std::span<const double> weights, RowView rows, std::size_t count,
                std::span<double> out);

[[nodiscard]] std::vector<double> causal_convolution(std::span<const double> weights, RowView rows,
                                                     std::size_t lag);

[[nodiscard]] std::vector<double> frac_sum_all(std::span<const double> x, double h, double order);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use.
[[nodiscard]] int max_threads() noexcept;

}  // namespace fracsys
