#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracsys/exec.hpp"
#include "fracsys/grid.hpp"

// The two binomial kernel families of the sequential system, with
// mu = k*alpha + s*beta:
//
//   phi(k,s,n)      = binom(n-k+mu, n-k) h^mu        for n >= k, else 0
//   phi_tilde(k,s,m) = binom(m+mu-1, m) h^mu          for m >= 0, else 0
//
// phi(0,0,n) = 1. phi_tilde is undefined for k = s = 0 (Gamma(mu) pole).

namespace fracsys {

[[nodiscard]] inline double kernel_mu(std::size_t k, std::size_t s, const FracOrderPair& o) noexcept {
    return static_cast<double>(k) * o.alpha + static_cast<double>(s) * o.beta;
}

/// Direct (log-gamma) evaluation of phi_{k,s}(nh).
[[nodiscard]] double phi(std::size_t k, std::size_t s, long long n, const FracOrderPair& orders,
                         double h);

/// Direct (log-gamma) evaluation of phi~_{k,s}(mh). Throws DomainError for k = s = 0.
[[nodiscard]] double phi_tilde(std::size_t k, std::size_t s, long long m,
                               const FracOrderPair& orders, double h);

/// phi_{k,s}(nh) for n = 0..max_n by the multiplicative recurrence in n.
[[nodiscard]] std::vector<double> phi_sequence(std::size_t k, std::size_t s,
                                               const FracOrderPair& orders, double h,
                                               std::size_t max_n);

/// phi~_{k,s}(mh) for m = 0..max_m by the multiplicative recurrence in m.
[[nodiscard]] std::vector<double> phi_tilde_sequence(std::size_t k, std::size_t s,
                                                     const FracOrderPair& orders, double h,
                                                     std::size_t max_m);

/// Memoized phi and phi~ on 0 <= k, s <= max_k and 0 <= n <= max_n.
///
/// Immutable after construction; safe to share between threads.
class KernelTable {
public:
    /// Default budget: 2^27 stored doubles (1 GiB).
    static constexpr std::size_t kDefaultBudget = std::size_t{1} << 27;

    KernelTable(const FracOrderPair& orders, double h, std::size_t max_k, std::size_t max_n,
                Execution exec = Execution::Parallel, std::size_t budget = kDefaultBudget);

    [[nodiscard]] const FracOrderPair& orders() const noexcept { return orders_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] std::size_t max_k() const noexcept { return max_k_; }
    [[nodiscard]] std::size_t max_n() const noexcept { return max_n_; }

    /// 0 for n < 0 or n < k; std::out_of_range outside the table.
    [[nodiscard]] double phi(std::size_t k, std::size_t s, long long n) const;
    /// 0 for m < 0; DomainError for k = s = 0; std::out_of_range outside the table.
    [[nodiscard]] double phi_tilde(std::size_t k, std::size_t s, long long m) const;

    [[nodiscard]] std::span<const double> phi_row(std::size_t k, std::size_t s) const;
    [[nodiscard]] std::span<const double> phi_tilde_row(std::size_t k, std::size_t s) const;

private:
    [[nodiscard]] std::size_t row_offset(std::size_t k, std::size_t s) const;

    FracOrderPair orders_;
    double h_;
    std::size_t max_k_;
    std::size_t max_n_;
    std::vector<double> phi_;
    std::vector<double> phi_tilde_;
};

}  // namespace fracsys
