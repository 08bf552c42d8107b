#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "fracsys/solver.hpp"
#include "fracsys/system.hpp"

namespace fracsys {

struct PositiveOnHorizon {};
struct ViolatedAt {
    std::size_t step = 0;
    std::size_t coord = 0;
    double value = 0.0;
};
struct LocalCriterionHolds {};
struct LocalCriterionFails {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

using PositivityVerdict =
    std::variant<PositiveOnHorizon, ViolatedAt, LocalCriterionHolds, LocalCriterionFails>;

struct PositivityReport {
    PositivityVerdict verdict;
    std::size_t horizon = 0;
    double tolerance = 0.0;
    /// For randomized falsification: false when the reported violation happened
    /// after the rhs had already taken a negative value (the nonnegativity
    /// hypothesis failed), i.e. it is not a counterexample.
    bool hypothesis_held = true;
    /// Number of initial-condition samples drawn (randomized check only).
    std::size_t samples = 0;

    [[nodiscard]] bool positive() const noexcept {
        return std::holds_alternative<PositiveOnHorizon>(verdict) ||
               std::holds_alternative<LocalCriterionHolds>(verdict);
    }
};

[[nodiscard]] std::string describe(const PositivityVerdict& v);

enum class MatrixSign {
    NonNegative,       ///< every entry >= 0
    StrictlyPositive,  ///< every entry > 0
};

/// Entrywise sign test on I + A h^{alpha+beta}; the first offending entry in
/// row-major order is reported.
[[nodiscard]] PositivityReport local_positivity_criterion(const Matrix& A, const FracOrderPair& orders,
                                                          double h,
                                                          MatrixSign mode = MatrixSign::NonNegative);

/// First (step, coordinate) with value < -tolerance, scanning in step order.
[[nodiscard]] PositivityReport check_trajectory_positivity(const Trajectory& traj,
                                                           double tolerance = 0.0);

/// Solves up to step tau (default: the first step) and scans the states.
[[nodiscard]] PositivityReport check_local_positivity(const SystemSpec& spec, std::size_t tau = 1,
                                                      double tolerance = 0.0);

/// Randomized falsification of positivity under a nonnegative rhs.
///
/// Draws `samples` initial pairs (x_a, x_0) uniformly from [0,1]^dim, solves
/// with the recursion up to `horizon`, and scans the states. A negative state
/// only counts as a counterexample while every rhs value evaluated before it
/// is nonnegative. Returns the first counterexample; otherwise the first
/// excused violation (hypothesis_held = false); otherwise PositiveOnHorizon.
[[nodiscard]] PositivityReport nonneg_rhs_positivity_check(const SystemSpec& spec, std::size_t samples,
                                                           std::size_t horizon,
                                                           std::uint64_t seed = 20240607,
                                                           double tolerance = 0.0);

}  // namespace fracsys
