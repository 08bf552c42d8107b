#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracsys/grid.hpp"

namespace fracsys {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// f(t, x) = A x
struct LinearRhs {
    Matrix A;
};

/// f(nh, x) = A x + gamma(nh); gamma sampled on (hN)_0, at least N+1 samples.
struct SemilinearRhs {
    Matrix A;
    std::vector<Vector> gamma;
};

/// Arbitrary right-hand side f(nh, x(nh+a)). Called with t = n h.
struct GeneralRhs {
    std::function<Vector(double, const Vector&)> f;
};

using Rhs = std::variant<LinearRhs, SemilinearRhs, GeneralRhs>;

/// Initial-value problem for the sequential system
///   (aD^alpha x)(nh)  = y(nh + b)
///   (bD^beta  y)(nh)  = f(nh, x(nh + a))
/// with x(a) = x_a and (aD^alpha x)(0) = x_0, on n = 0..horizon.
struct SystemSpec {
    std::size_t dim = 1;
    FracOrderPair orders;
    double h = 1.0;
    std::size_t horizon = 0;
    Rhs rhs = LinearRhs{};
    Vector x_a;
    Vector x_0;

    /// Throws std::invalid_argument describing the first inconsistency.
    void validate() const;

    [[nodiscard]] bool is_linear() const noexcept { return std::holds_alternative<LinearRhs>(rhs); }
    [[nodiscard]] bool is_semilinear() const noexcept {
        return std::holds_alternative<SemilinearRhs>(rhs);
    }

    /// f(nh, x) for any rhs variant.
    [[nodiscard]] Vector eval_rhs(std::size_t n, const Vector& x) const;
};

/// Solution samples x(nh + a), n = 0..N, optionally with y(nh + b).
struct Trajectory {
    std::size_t dim = 0;
    FracOrderPair orders;
    double h = 1.0;
    std::vector<double> times;  ///< t_n = n h + a
    std::vector<Vector> states;
    std::optional<std::vector<Vector>> aux;
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t horizon() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

/// Builds the time column t_n = n h + (alpha - 1) h.
[[nodiscard]] std::vector<double> solution_times(const FracOrderPair& orders, double h,
                                                 std::size_t horizon);

}  // namespace fracsys
