#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fracsys/grid.hpp"
#include "fracsys/system.hpp"

// Brute-force reference implementations taken straight from the operator
// definitions, plus verifiers for the identities the solvers rely on.
//
// Nothing here uses the ratio recurrences of operators.cpp / phi.cpp for the
// reference side: gamma ratios go through h_factorial (log-gamma) or tgamma.

namespace fracsys::oracle {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

struct IdentityCheckResult {
    std::string name;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    std::string worst_case;
    double tolerance = 0.0;
    std::size_t checks = 0;
    bool pass = false;
};

/// (h / Gamma(order)) sum_k (t - sigma(a+kh))^{(order-1)}_h x(a+kh) at t = a + (order+n) h.
[[nodiscard]] double frac_sum_definitional(const SampledSequence& x, double order, std::size_t n);

/// Power rule for psi(r) = (r - a + mu h)^{(mu)}_h, mu = 0, 0.5, ..., max_mu, n <= max_n,
/// for both orders of the pair. Tolerance 1e-10.
[[nodiscard]] IdentityCheckResult verify_power_rule(const FracOrderPair& orders, double h,
                                                    double max_mu, std::size_t max_n);

/// Composition of two fractional sums in both orders, alpha, beta in {0.3,0.5,0.7,1}.
[[nodiscard]] IdentityCheckResult verify_composition(std::size_t max_n,
                                                     std::uint64_t seed = kDefaultSeed);

/// frac_sum(caputo_diff(x, alpha), alpha) at nh + a equals x(nh+a) - x(a).
[[nodiscard]] IdentityCheckResult verify_caputo_inversion(std::size_t max_n,
                                                          std::uint64_t seed = kDefaultSeed);

enum class PhiSide {
    Alpha,       ///< (0D^{-alpha} phi_{k,s})(nh + a) = phi_{k+1,s}(nh)
    Beta,        ///< (0D^{-beta} phi_{k,s})(nh + b) = phi_{k,s+1}(nh), as usually stated
    BetaLagged,  ///< (0D^{-beta} phi_{k,s})(nh + b) = phi_{k,s+1}((n-1)h)
};

/// One side of the phi power-rule recurrence over k <= max_k, s <= max_s, n <= max_n.
/// `perturb` scales the tabulated right-hand side by (1 + perturb) (negative control).
[[nodiscard]] IdentityCheckResult verify_phi_recurrence(PhiSide side, std::size_t max_k,
                                                        std::size_t max_s, std::size_t max_n,
                                                        double perturb = 0.0);

/// Alpha and Beta sides together.
[[nodiscard]] IdentityCheckResult verify_phi_recurrence(std::size_t max_k, std::size_t max_s,
                                                        std::size_t max_n, double perturb = 0.0);

/// (0D^{-mu} gamma)(nh + mu h) = sum_r phi~_{k,s}((n-r)h) gamma(rh), mu = k alpha + s beta,
/// plus the iterated one-order composition (0D^{-alpha} g1~)(nh+alpha h) =
/// (0D^{-(k+1)alpha} gamma)(nh+alpha h + k alpha h).
[[nodiscard]] IdentityCheckResult verify_convolution_form(std::size_t max_k, std::size_t max_s,
                                                          std::size_t max_n,
                                                          std::uint64_t seed = kDefaultSeed,
                                                          double perturb = 0.0);

/// sum_{m1+m2=M} phi~(k1,s1,m1) phi~(k2,s2,m2) = phi~(k1+k2, s1+s2, M).
[[nodiscard]] IdentityCheckResult verify_kernel_semigroup(std::size_t max_mu_index,
                                                          std::size_t max_m);

struct SuiteOptions {
    std::uint64_t seed = kDefaultSeed;
    /// Relative perturbation applied to tabulated kernels (negative control).
    double kernel_perturbation = 0.0;
};

/// Runs every verifier on its default grid (mu <= 6, n <= 200).
[[nodiscard]] std::vector<IdentityCheckResult> run_identity_suite(const SuiteOptions& opts = {});

enum class EulerForm {
    Explicit,      ///< x+ = x + h y,  y+ = y + h f(nh, x)
    SemiImplicit,  ///< y+ = y + h f(nh, x),  x+ = x + h y+
};

/// Classical two-variable stepper for alpha = beta = 1; returns x(n), n = 0..N.
[[nodiscard]] std::vector<Vector> classical_stepper(const SystemSpec& spec, EulerForm form);

/// Marches the two Caputo equations directly from their definitions: with
/// x(0) = x_a and y(0) = x_0, step n solves (aD^alpha x)(nh) = y(n) for x(n+1)
/// and (bD^beta y)(nh) = f(nh, x(n)) for y(n+1). O(N^2), no closed forms.
struct DefinitionalSolution {
    std::vector<Vector> x;
    std::vector<Vector> y;
};
[[nodiscard]] DefinitionalSolution solve_by_definition(const SystemSpec& spec);

}  // namespace fracsys::oracle
