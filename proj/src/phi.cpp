#include "fracsys/phi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracsys/errors.hpp"
#include "fracsys/special.hpp"

namespace fracsys {

namespace {

void check_step(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("kernel step h must be positive");
}

double finite_or_throw(double v, const char* what, std::size_t k, std::size_t s) {
    if (!std::isfinite(v)) {
        throw OverflowError(std::string(what) + " overflow at k=" + std::to_string(k) +
                            ", s=" + std::to_string(s));
    }
    return v;
}

// Fills out[0..] with binom(m + mu + shift, m) h^mu, shift = 0 for phi and -1 for phi~.
void fill_recurrence(double mu, double shift, double h, std::span<double> out) {
    if (out.empty()) return;
    double v = std::pow(h, mu);
    out[0] = v;
    for (std::size_t m = 0; m + 1 < out.size(); ++m) {
        const double md = static_cast<double>(m);
        v *= (md + 1.0 + mu + shift) / (md + 1.0);
        out[m + 1] = v;
    }
}

}  // namespace

double phi(std::size_t k, std::size_t s, long long n, const FracOrderPair& orders, double h) {
    check_step(h);
    if (n < static_cast<long long>(k)) return 0.0;
    if (k == 0 && s == 0) return 1.0;
    const double mu = kernel_mu(k, s, orders);
    const double m = static_cast<double>(n - static_cast<long long>(k));
    return finite_or_throw(gen_binomial(m + mu, m) * std::pow(h, mu), "phi", k, s);
}

double phi_tilde(std::size_t k, std::size_t s, long long m, const FracOrderPair& orders,
                 double h) {
    check_step(h);
    if (k == 0 && s == 0) throw DomainError("phi_tilde: k = s = 0 hits the Gamma(mu) pole");
    if (m < 0) return 0.0;
    const double mu = kernel_mu(k, s, orders);
    const double md = static_cast<double>(m);
    return finite_or_throw(gen_binomial(md + mu - 1.0, md) * std::pow(h, mu), "phi_tilde", k, s);
}

std::vector<double> phi_sequence(std::size_t k, std::size_t s, const FracOrderPair& orders,
                                 double h, std::size_t max_n) {
    check_step(h);
    std::vector<double> out(max_n + 1, 0.0);
    if (k > max_n) return out;
    fill_recurrence(kernel_mu(k, s, orders), 0.0, h, std::span<double>(out).subspan(k));
    finite_or_throw(out.back(), "phi", k, s);
    return out;
}

std::vector<double> phi_tilde_sequence(std::size_t k, std::size_t s, const FracOrderPair& orders,
                                       double h, std::size_t max_m) {
    check_step(h);
    if (k == 0 && s == 0) throw DomainError("phi_tilde: k = s = 0 hits the Gamma(mu) pole");
    std::vector<double> out(max_m + 1);
    fill_recurrence(kernel_mu(k, s, orders), -1.0, h, out);
    finite_or_throw(out.back(), "phi_tilde", k, s);
    return out;
}

KernelTable::KernelTable(const FracOrderPair& orders, double h, std::size_t max_k,
                         std::size_t max_n, Execution exec, std::size_t budget)
    : orders_(orders), h_(h), max_k_(max_k), max_n_(max_n) {
    check_step(h);
    const std::size_t pairs = (max_k + 1) * (max_k + 1);
    const std::size_t row = max_n + 1;
    if (row != 0 && pairs > budget / (2 * row)) {
        throw std::length_error("KernelTable: " + std::to_string(2 * pairs * row) +
                                " entries exceed the budget of " + std::to_string(budget));
    }
    phi_.assign(pairs * row, 0.0);
    phi_tilde_.assign(pairs * row, 0.0);

    const auto fill = [&](std::size_t p) {
        const std::size_t k = p / (max_k + 1);
        const std::size_t s = p % (max_k + 1);
        const double mu = kernel_mu(k, s, orders_);
        std::span<double> prow(phi_.data() + p * row, row);
        if (k <= max_n) fill_recurrence(mu, 0.0, h_, prow.subspan(k));
        if (p != 0) fill_recurrence(mu, -1.0, h_, std::span<double>(phi_tilde_.data() + p * row, row));
    };

    const auto np = static_cast<std::ptrdiff_t>(pairs);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t p = 0; p < np; ++p) fill(static_cast<std::size_t>(p));
    } else {
        for (std::ptrdiff_t p = 0; p < np; ++p) fill(static_cast<std::size_t>(p));
    }

    for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t k = p / (max_k + 1);
        const std::size_t s = p % (max_k + 1);
        finite_or_throw(phi_[p * row + max_n], "phi", k, s);
        finite_or_throw(phi_tilde_[p * row + max_n], "phi_tilde", k, s);
    }
}

std::size_t KernelTable::row_offset(std::size_t k, std::size_t s) const {
    if (k > max_k_ || s > max_k_) {
        throw std::out_of_range("KernelTable: (k,s)=(" + std::to_string(k) + "," +
                                std::to_string(s) + ") beyond max_k=" + std::to_string(max_k_));
    }
    return (k * (max_k_ + 1) + s) * (max_n_ + 1);
}

double KernelTable::phi(std::size_t k, std::size_t s, long long n) const {
    const std::size_t off = row_offset(k, s);
    if (n < 0) return 0.0;
    if (static_cast<std::size_t>(n) > max_n_) throw std::out_of_range("KernelTable: n beyond max_n");
    return phi_[off + static_cast<std::size_t>(n)];
}

double KernelTable::phi_tilde(std::size_t k, std::size_t s, long long m) const {
    if (k == 0 && s == 0) throw DomainError("phi_tilde: k = s = 0 hits the Gamma(mu) pole");
    const std::size_t off = row_offset(k, s);
    if (m < 0) return 0.0;
    if (static_cast<std::size_t>(m) > max_n_) throw std::out_of_range("KernelTable: m beyond max_n");
    return phi_tilde_[off + static_cast<std::size_t>(m)];
}

std::span<const double> KernelTable::phi_row(std::size_t k, std::size_t s) const {
    return {phi_.data() + row_offset(k, s), max_n_ + 1};
}

std::span<const double> KernelTable::phi_tilde_row(std::size_t k, std::size_t s) const {
    if (k == 0 && s == 0) throw DomainError("phi_tilde: k = s = 0 hits the Gamma(mu) pole");
    return {phi_tilde_.data() + row_offset(k, s), max_n_ + 1};
}

}  // namespace fracsys
