#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracsys {

/// Uniform grid t_n = a + n*h, n = 0..N.
struct StepGrid {
    double h = 1.0;
    double a = 0.0;
    std::size_t N = 0;

    StepGrid() = default;
    StepGrid(double step, double offset, std::size_t horizon);

    [[nodiscard]] double at(std::size_t n) const noexcept { return a + static_cast<double>(n) * h; }
    [[nodiscard]] std::size_t size() const noexcept { return N + 1; }
};

/// The two orders of the sequential system, both in (0,1].
///
/// The grid offsets a = (alpha-1)h and b = (beta-1)h depend on the step and
/// are provided as functions of it.
struct FracOrderPair {
    double alpha = 1.0;
    double beta = 1.0;

    FracOrderPair() = default;
    FracOrderPair(double alpha_, double beta_);

    [[nodiscard]] double offset_a(double h) const noexcept { return (alpha - 1.0) * h; }
    [[nodiscard]] double offset_b(double h) const noexcept { return (beta - 1.0) * h; }

    friend bool operator==(const FracOrderPair&, const FracOrderPair&) = default;
};

/// A real-valued function sampled on a StepGrid (values.size() == grid.N + 1).
class SampledSequence {
public:
    SampledSequence(StepGrid grid, std::vector<double> values);

    /// Samples fn(t_n) for n = 0..grid.N.
    template <class Fn>
    static SampledSequence sample(const StepGrid& grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t n = 0; n < v.size(); ++n) v[n] = fn(grid.at(n));
        return {grid, std::move(v)};
    }

    [[nodiscard]] const StepGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t n) const { return values_[n]; }

private:
    StepGrid grid_;
    std::vector<double> values_;
};

}  // namespace fracsys
