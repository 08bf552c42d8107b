#include "fracsys/exec.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracsys/operators.hpp"

namespace fracsys {

namespace {

void check_lagged(std::span<const double> weights, RowView rows, std::size_t count,
                  std::span<double> out) {
    if (weights.size() < count || rows.count() < count || out.size() != rows.dim) {
        throw std::length_error("lagged_sum: inconsistent sizes");
    }
}

// Below this many rows the parallel region costs more than it saves.
constexpr std::size_t kParallelRows = 2 * kReductionBlock;

}  // namespace

namespace serial {

void lagged_sum(std::span<const double> weights, RowView rows, std::size_t count,
                std::span<double> out) {
    check_lagged(weights, rows, count, out);
    const std::size_t dim = rows.dim;
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < count; ++r) {
        const double w = weights[count - 1 - r];
        const double* row = rows.data.data() + r * dim;
        for (std::size_t d = 0; d < dim; ++d) out[d] += w * row[d];
    }
}

std::vector<double> causal_convolution(std::span<const double> weights, RowView rows,
                                       std::size_t lag) {
    const std::size_t count = rows.count();
    const std::size_t dim = rows.dim;
    std::vector<double> out(count * dim, 0.0);
    for (std::size_t n = lag; n < count; ++n) {
        lagged_sum(weights, rows, n - lag + 1, std::span<double>(out).subspan(n * dim, dim));
    }
    return out;
}

std::vector<double> frac_sum_all(std::span<const double> x, double h, double order) {
    const auto w = sum_weights(order, x.size());
    auto out = causal_convolution(w, RowView{x, 1}, 0);
    const double scale = std::pow(h, order);
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace serial

namespace parallel {

void lagged_sum(std::span<const double> weights, RowView rows, std::size_t count,
                std::span<double> out) {
    const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
    // One block sums in the serial order anyway.
    if (blocks <= 1) {
        serial::lagged_sum(weights, rows, count, out);
        return;
    }
    check_lagged(weights, rows, count, out);
    const std::size_t dim = rows.dim;
    std::vector<double> partial(blocks * dim, 0.0);

    const double* w = weights.data();
    const double* data = rows.data.data();
    double* part = partial.data();
#pragma omp parallel for schedule(static) if (count >= kParallelRows)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(count, lo + kReductionBlock);
        double* acc = part + static_cast<std::size_t>(b) * dim;
        for (std::size_t r = lo; r < hi; ++r) {
            const double wr = w[count - 1 - r];
            const double* row = data + r * dim;
            for (std::size_t d = 0; d < dim; ++d) acc[d] += wr * row[d];
        }
    }

    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t d = 0; d < dim; ++d) out[d] += partial[b * dim + d];
    }
}

std::vector<double> causal_convolution(std::span<const double> weights, RowView rows,
                                       std::size_t lag) {
    const std::size_t count = rows.count();
    const std::size_t dim = rows.dim;
    if (weights.size() + lag < count) throw std::length_error("causal_convolution: too few weights");
    std::vector<double> out(count * dim, 0.0);

    const double* w = weights.data();
    const double* data = rows.data.data();
    double* o = out.data();
    // Each output point keeps the serial summation order, so the result is
    // bitwise identical to serial::causal_convolution.
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(lag); ni < static_cast<std::ptrdiff_t>(count);
         ++ni) {
        const auto n = static_cast<std::size_t>(ni);
        const std::size_t terms = n - lag + 1;
        double* acc = o + n * dim;
        for (std::size_t r = 0; r < terms; ++r) {
            const double wr = w[terms - 1 - r];
            const double* row = data + r * dim;
            for (std::size_t d = 0; d < dim; ++d) acc[d] += wr * row[d];
        }
    }
    return out;
}

std::vector<double> frac_sum_all(std::span<const double> x, double h, double order) {
    const auto w = sum_weights(order, x.size());
    auto out = causal_convolution(w, RowView{x, 1}, 0);
    const double scale = std::pow(h, order);
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace parallel

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace fracsys
