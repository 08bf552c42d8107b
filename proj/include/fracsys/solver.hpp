#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracsys/exec.hpp"
#include "fracsys/system.hpp"

namespace fracsys {

/// Delay of the forcing term in the explicit recursion
///   x(n) = x_a + phi(1,0,n) x_0 + sum_r phi~(1,1, n - lag - r) f(rh, x(r)).
///
/// OneStep (lag 1) is the closed-form recursion whose first step is
/// x(h+a) = (I + h^{alpha+beta} A) x_a + h^alpha x_0 + h^{alpha+beta} gamma(0); the
/// series solvers reproduce it. TwoStep (lag 2) is the recursion obtained by
/// composing the fractional-sum and Caputo operators literally; its Caputo
/// difference reproduces reconstruct_y exactly, and at alpha = beta = 1 it is
/// the explicit two-variable forward stepper.
enum class ForcingLag { OneStep, TwoStep };

struct RecursionOptions {
    ForcingLag lag = ForcingLag::OneStep;
    Execution exec = Execution::Parallel;
};

/// Kernel used for the forced part of the semilinear series.
///   Corrected: A^k phi~(k+1,k+1, n-(k+1)-r), a finite sum that agrees with the recursion.
///   Literal:   A^k phi~(k+1,k+1, n-1-r) summed over all k, truncated.
enum class KernelVariant { Corrected, Literal };

struct SeriesOptions {
    KernelVariant kernel = KernelVariant::Corrected;
    double truncation_tol = 1e-12;
    std::size_t max_terms = 0;  ///< 0 selects 10*N + 50
    Execution exec = Execution::Parallel;

    [[nodiscard]] std::size_t term_budget(std::size_t horizon) const noexcept {
        return max_terms != 0 ? max_terms : 10 * horizon + 50;
    }
};

/// Explicit O(N^2) recursion; works for every rhs variant. f is evaluated
/// once per step and cached. Throws NonFiniteError at the first non-finite state.
[[nodiscard]] Trajectory solve_recursive(const SystemSpec& spec, const RecursionOptions& opts = {});

/// sum_{k=0}^{n} A^k (phi(k,k,n) x_a + phi(k+1,k,n) x_0), exact finite sum.
/// Evaluated in binary128 and rounded; requires a Linear rhs.
[[nodiscard]] Trajectory solve_linear_series(const SystemSpec& spec,
                                             Execution exec = Execution::Parallel);

/// Homogeneous series plus the forced part selected by opts.kernel; requires a
/// Semilinear rhs. Literal throws TruncationError when opts' term budget runs
/// out and adds a warning when rho(A h^{alpha+beta}) >= 1.
[[nodiscard]] Trajectory solve_semilinear_series(const SystemSpec& spec,
                                                 const SeriesOptions& opts = {});

/// Fills traj.aux with y(nh+b) = x_0 + (0D^{-beta} f~)(nh+b):
/// aux[0] = x_0 and aux[n] = x_0 + frac_sum(f~, beta, n-1).
[[nodiscard]] Trajectory reconstruct_y(const SystemSpec& spec, Trajectory traj);

/// Per-step ||x_series - x_rec||_inf / max(1, ||x_rec||_inf).
struct DiscrepancyReport {
    std::string series_method;
    std::vector<double> per_step;
    std::vector<std::size_t> flagged;
    double threshold = 1e-9;

    [[nodiscard]] double max() const noexcept;
    [[nodiscard]] bool ok() const noexcept { return flagged.empty(); }
};

/// Compares solve_recursive (OneStep) with the series solver for the rhs
/// (Linear or Semilinear). Throws std::invalid_argument for a General rhs.
[[nodiscard]] DiscrepancyReport compare_solvers(const SystemSpec& spec,
                                                const SeriesOptions& opts = {});

/// Spectral radius of A h^{alpha+beta}.
[[nodiscard]] double scaled_spectral_radius(const Matrix& A, const FracOrderPair& orders, double h);

}  // namespace fracsys
