#include "fracsys/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracsys/errors.hpp"
#include "fracsys/exec.hpp"

namespace fracsys {

SampledSequence forward_diff(const SampledSequence& x) {
    if (x.size() < 2) throw std::length_error("forward_diff: need at least 2 samples");
    const auto& g = x.grid();
    std::vector<double> d(x.size() - 1);
    for (std::size_t n = 0; n < d.size(); ++n) d[n] = (x[n + 1] - x[n]) / g.h;
    return {StepGrid(g.h, g.a, g.N - 1), std::move(d)};
}

double h_sum(const SampledSequence& x, std::size_t n) {
    if (n > x.size()) {
        throw std::out_of_range("h_sum: n=" + std::to_string(n) + " exceeds " +
                                std::to_string(x.size()) + " samples");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += x[k];
    return x.grid().h * acc;
}

std::vector<double> sum_weights(double order, std::size_t count) {
    std::vector<double> w(count);
    if (count == 0) return w;
    w[0] = 1.0;
    for (std::size_t j = 0; j + 1 < count; ++j) {
        const double jd = static_cast<double>(j);
        w[j + 1] = w[j] * (jd + order) / (jd + 1.0);
    }
    return w;
}

double frac_sum(const SampledSequence& x, double order, std::size_t n) {
    if (!(order > 0.0)) throw DomainError("frac_sum: order must be positive");
    if (n > x.grid().N) {
        throw std::out_of_range("frac_sum: n=" + std::to_string(n) + " beyond horizon " +
                                std::to_string(x.grid().N));
    }
    const auto w = sum_weights(order, n + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) acc += w[n - k] * x[k];
    return std::pow(x.grid().h, order) * acc;
}

SampledSequence frac_sum_sequence(const SampledSequence& x, double order) {
    if (!(order > 0.0)) throw DomainError("frac_sum: order must be positive");
    const auto& g = x.grid();
    auto values = parallel::frac_sum_all(x.values(), g.h, order);
    return {StepGrid(g.h, g.a + order * g.h, g.N), std::move(values)};
}

double caputo_diff(const SampledSequence& x, double order, std::size_t n) {
    if (!(order > 0.0 && order <= 1.0)) throw DomainError("caputo_diff: order must lie in (0,1]");
    if (x.size() < n + 2) {
        throw std::length_error("caputo_diff: index " + std::to_string(n) + " needs " +
                                std::to_string(n + 2) + " samples, have " +
                                std::to_string(x.size()));
    }
    const auto d = forward_diff(x);
    if (order == 1.0) return d[n];
    return frac_sum(d, 1.0 - order, n);
}

}  // namespace fracsys
