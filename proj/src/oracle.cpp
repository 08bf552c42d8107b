#include "fracsys/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fracsys/errors.hpp"
#include "fracsys/operators.hpp"
#include "fracsys/phi.hpp"
#include "fracsys/special.hpp"

namespace fracsys::oracle {

namespace {

constexpr double kIdentityTol = 1e-10;

class ErrorTracker {
public:
    ErrorTracker(std::string name, double tol) {
        result_.name = std::move(name);
        result_.tolerance = tol;
    }

    // `scale` is the magnitude of the summands when `want` is a cancelling sum.
    template <class Describe>
    void add(double got, double want, Describe&& describe, double scale = 1.0) {
        const double abs_err = std::abs(got - want);
        const double rel_err = abs_err / std::max({1.0, std::abs(want), scale});
        ++result_.checks;
        result_.max_abs_error = std::max(result_.max_abs_error, abs_err);
        if (std::isnan(rel_err) || rel_err > result_.max_rel_error || result_.worst_case.empty()) {
            result_.max_rel_error = std::isnan(rel_err) ? INFINITY : std::max(result_.max_rel_error, rel_err);
            std::ostringstream os;
            os.precision(6);
            describe(os);
            result_.worst_case = os.str();
        }
    }

    IdentityCheckResult finish() {
        result_.pass = result_.checks > 0 && result_.max_rel_error <= result_.tolerance;
        return result_;
    }

private:
    IdentityCheckResult result_;
};

// c_j = (h / Gamma(order)) ((order + j - 1) h)^{(order-1)}_h, the definitional sum weight.
double definitional_weight(double order, double h, std::size_t j) {
    const double t = (order + static_cast<double>(j) - 1.0) * h;
    return h / std::tgamma(order) * h_factorial(t, order - 1.0, h);
}

std::vector<double> definitional_weights(double order, double h, std::size_t count) {
    std::vector<double> c(count);
    for (std::size_t j = 0; j < count; ++j) c[j] = definitional_weight(order, h, j);
    return c;
}

// Definitional fractional sum at every index, using precomputed weights.
std::vector<double> definitional_sum_all(std::span<const double> x, const std::vector<double>& c) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= n; ++k) acc += c[n - k] * x[k];
        out[n] = acc;
    }
    return out;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(count);
    for (auto& e : v) e = u(rng);
    return v;
}

const std::vector<FracOrderPair>& default_pairs() {
    static const std::vector<FracOrderPair> pairs{
        {0.3, 0.7}, {0.5, 0.5}, {0.4, 0.9}, {1.0, 1.0}, {0.1, 0.2}};
    return pairs;
}

IdentityCheckResult merge(const std::vector<IdentityCheckResult>& parts, std::string name) {
    IdentityCheckResult r = *std::max_element(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
        return x.max_rel_error < y.max_rel_error;
    });
    r.worst_case = r.name + ": " + r.worst_case;
    r.name = std::move(name);
    r.checks = 0;
    r.pass = true;
    for (const auto& p : parts) {
        r.checks += p.checks;
        r.max_abs_error = std::max(r.max_abs_error, p.max_abs_error);
        r.pass = r.pass && p.pass;
    }
    return r;
}

}  // namespace

double frac_sum_definitional(const SampledSequence& x, double order, std::size_t n) {
    if (!(order > 0.0)) throw DomainError("frac_sum_definitional: order must be positive");
    if (n > x.grid().N) throw std::out_of_range("frac_sum_definitional: n beyond horizon");
    const double h = x.grid().h;
    const double a = x.grid().a;
    const double t = a + (order + static_cast<double>(n)) * h;
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double sigma = a + static_cast<double>(k + 1) * h;
        acc += h_factorial(t - sigma, order - 1.0, h) * x[k];
    }
    return h / std::tgamma(order) * acc;
}

IdentityCheckResult verify_power_rule(const FracOrderPair& orders, double h, double max_mu,
                                      std::size_t max_n) {
    ErrorTracker track("power_rule", kIdentityTol);
    const double a = orders.offset_a(h);
    for (double order : {orders.alpha, orders.beta}) {
        const auto c = definitional_weights(order, h, max_n + 1);
        const auto w = sum_weights(order, max_n + 1);
        const double h_order = std::pow(h, order);
        for (double mu = 0.0; mu <= max_mu + 1e-12; mu += 0.5) {
            // psi(a + jh) = (jh + mu h)^{(mu)}_h
            std::vector<double> psi(max_n + 1);
            for (std::size_t j = 0; j <= max_n; ++j) {
                psi[j] = h_factorial((static_cast<double>(j) + mu) * h, mu, h);
            }
            const double lead = std::exp(std::lgamma(mu + 1.0) - std::lgamma(mu + order + 1.0));
            for (std::size_t n = 0; n <= max_n; ++n) {
                const double t = a + (order + static_cast<double>(n)) * h;
                const double rhs = lead * h_factorial(t - a + mu * h, mu + order, h);
                double by_definition = 0.0;
                double by_recurrence = 0.0;
                for (std::size_t k = 0; k <= n; ++k) {
                    by_definition += c[n - k] * psi[k];
                    by_recurrence += w[n - k] * psi[k];
                }
                by_recurrence *= h_order;
                const auto where = [&](std::ostream& os) {
                    os << "order=" << order << " mu=" << mu << " h=" << h << " n=" << n;
                };
                track.add(by_definition, rhs, where);
                track.add(by_recurrence, rhs, where);
            }
        }
    }
    return track.finish();
}

IdentityCheckResult verify_composition(std::size_t max_n, std::uint64_t seed) {
    ErrorTracker track("composition", kIdentityTol);
    std::mt19937_64 rng(seed);
    const double orders[] = {0.3, 0.5, 0.7, 1.0};
    for (double h : {0.25, 1.0}) {
        for (double alpha : orders) {
            for (double beta : orders) {
                const auto x = random_values(rng, max_n + 1);
                const auto ca = definitional_weights(alpha, h, max_n + 1);
                const auto cb = definitional_weights(beta, h, max_n + 1);
                const auto cab = definitional_weights(alpha + beta, h, max_n + 1);
                const auto direct = definitional_sum_all(x, cab);
                // inner sum lives on a + beta h (resp. a + alpha h); the outer sum
                // at index n lands on a + (alpha + beta + n) h either way.
                const auto beta_then_alpha = definitional_sum_all(definitional_sum_all(x, cb), ca);
                const auto alpha_then_beta = definitional_sum_all(definitional_sum_all(x, ca), cb);
                for (std::size_t n = 0; n <= max_n; ++n) {
                    const auto where = [&](std::ostream& os) {
                        os << "alpha=" << alpha << " beta=" << beta << " h=" << h << " n=" << n;
                    };
                    track.add(beta_then_alpha[n], direct[n], where);
                    track.add(alpha_then_beta[n], direct[n], where);
                }
            }
        }
    }
    return track.finish();
}

IdentityCheckResult verify_caputo_inversion(std::size_t max_n, std::uint64_t seed) {
    ErrorTracker track("caputo_inversion", kIdentityTol);
    std::mt19937_64 rng(seed);
    for (double h : {0.5, 1.0}) {
        for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
            const StepGrid grid(h, (alpha - 1.0) * h, max_n + 1);
            const SampledSequence x(grid, random_values(rng, max_n + 2));
            std::vector<double> cap(max_n + 1);
            for (std::size_t k = 0; k <= max_n; ++k) cap[k] = caputo_diff(x, alpha, k);
            // Caputo values live on (hN)_0; the order-alpha sum index n-1 is the point nh + a.
            const SampledSequence c(StepGrid(h, 0.0, max_n), cap);
            for (std::size_t n = 1; n <= max_n; ++n) {
                const double lhs = frac_sum_definitional(c, alpha, n - 1);
                track.add(lhs, x[n] - x[0], [&](std::ostream& os) {
                    os << "alpha=" << alpha << " h=" << h << " n=" << n;
                });
            }
        }
    }
    return track.finish();
}

IdentityCheckResult verify_phi_recurrence(PhiSide side, std::size_t max_k, std::size_t max_s,
                                          std::size_t max_n, double perturb) {
    const char* name = side == PhiSide::Alpha  ? "phi_recurrence_alpha"
                       : side == PhiSide::Beta ? "phi_recurrence_beta"
                                               : "phi_recurrence_beta_lagged";
    ErrorTracker track(name, kIdentityTol);
    for (double h : {0.5, 1.0}) {
        for (const auto& orders : default_pairs()) {
            const KernelTable table(orders, h, std::max(max_k, max_s) + 1, max_n);
            const double order = side == PhiSide::Alpha ? orders.alpha : orders.beta;
            const auto c = definitional_weights(order, h, max_n + 1);
            for (std::size_t k = 0; k <= max_k; ++k) {
                for (std::size_t s = 0; s <= max_s; ++s) {
                    const auto seq = table.phi_row(k, s);
                    const auto sums = definitional_sum_all(seq, c);
                    for (std::size_t n = 0; n <= max_n; ++n) {
                        // nh + a (resp. nh + b) is sum index n - 1; index -1 is the empty sum.
                        const double lhs = n == 0 ? 0.0 : sums[n - 1];
                        double rhs = 0.0;
                        switch (side) {
                            case PhiSide::Alpha: rhs = table.phi(k + 1, s, static_cast<long long>(n)); break;
                            case PhiSide::Beta: rhs = table.phi(k, s + 1, static_cast<long long>(n)); break;
                            case PhiSide::BetaLagged:
                                rhs = table.phi(k, s + 1, static_cast<long long>(n) - 1);
                                break;
                        }
                        rhs *= 1.0 + perturb;
                        track.add(lhs, rhs, [&](std::ostream& os) {
                            os << "alpha=" << orders.alpha << " beta=" << orders.beta << " h=" << h
                               << " k=" << k << " s=" << s << " n=" << n;
                        });
                    }
                }
            }
        }
    }
    return track.finish();
}

IdentityCheckResult verify_phi_recurrence(std::size_t max_k, std::size_t max_s, std::size_t max_n,
                                          double perturb) {
    const auto r = merge({verify_phi_recurrence(PhiSide::Alpha, max_k, max_s, max_n, perturb),
                          verify_phi_recurrence(PhiSide::Beta, max_k, max_s, max_n, perturb)},
                         "phi_recurrence");
    return r;
}

IdentityCheckResult verify_convolution_form(std::size_t max_k, std::size_t max_s, std::size_t max_n,
                                            std::uint64_t seed, double perturb) {
    ErrorTracker track("convolution_form", kIdentityTol);
    std::mt19937_64 rng(seed);
    for (double h : {0.5, 1.0}) {
        for (const auto& orders : default_pairs()) {
            const KernelTable table(orders, h, std::max(max_k, max_s), max_n);
            const auto gamma = random_values(rng, max_n + 1);

            for (std::size_t k = 0; k <= max_k; ++k) {
                for (std::size_t s = 0; s <= max_s; ++s) {
                    if (k == 0 && s == 0) continue;
                    const double mu = kernel_mu(k, s, orders);
                    const auto direct = definitional_sum_all(gamma, definitional_weights(mu, h, max_n + 1));
                    const auto kern = table.phi_tilde_row(k, s);
                    for (std::size_t n = 0; n <= max_n; ++n) {
                        double conv = 0.0;
                        double magnitude = 0.0;
                        for (std::size_t r = 0; r <= n; ++r) {
                            conv += kern[n - r] * gamma[r];
                            magnitude += std::abs(kern[n - r] * gamma[r]);
                        }
                        conv *= 1.0 + perturb;
                        track.add(conv, direct[n], [&](std::ostream& os) {
                            os << "kernel alpha=" << orders.alpha << " beta=" << orders.beta
                               << " h=" << h << " k=" << k << " s=" << s << " n=" << n;
                        }, magnitude);
                    }
                }
            }

            // Iterated shift: gamma1~(n) = (0D^{-k alpha} gamma)(nh + k alpha h), then one more
            // alpha-sum at nh + alpha h equals the (k+1) alpha sum at nh + (k+1) alpha h.
            const double alpha = orders.alpha;
            const auto ca = definitional_weights(alpha, h, max_n + 1);
            for (std::size_t k = 1; k <= std::max<std::size_t>(max_k, 1); ++k) {
                const double ka = static_cast<double>(k) * alpha;
                const auto g1 = definitional_sum_all(gamma, definitional_weights(ka, h, max_n + 1));
                const auto lhs = definitional_sum_all(g1, ca);
                const auto rhs = definitional_sum_all(gamma, definitional_weights(ka + alpha, h, max_n + 1));
                for (std::size_t n = 0; n <= max_n; ++n) {
                    track.add(lhs[n], rhs[n], [&](std::ostream& os) {
                        os << "shift alpha=" << alpha << " h=" << h << " k=" << k << " n=" << n;
                    });
                }
            }
        }
    }
    return track.finish();
}

IdentityCheckResult verify_kernel_semigroup(std::size_t max_mu_index, std::size_t max_m) {
    ErrorTracker track("kernel_semigroup", kIdentityTol);
    for (double h : {0.5, 1.0}) {
        for (const auto& orders : default_pairs()) {
            const KernelTable table(orders, h, max_mu_index, max_m);
            for (std::size_t k1 = 0; k1 <= max_mu_index; ++k1)
                for (std::size_t s1 = 0; s1 + k1 <= max_mu_index; ++s1)
                    for (std::size_t k2 = 0; k2 + k1 + s1 <= max_mu_index; ++k2)
                        for (std::size_t s2 = 0; s2 + k2 + k1 + s1 <= max_mu_index; ++s2) {
                            if (k1 + s1 == 0 || k2 + s2 == 0) continue;
                            const auto p = table.phi_tilde_row(k1, s1);
                            const auto q = table.phi_tilde_row(k2, s2);
                            for (std::size_t M = 0; M <= max_m; ++M) {
                                double conv = 0.0;
                                for (std::size_t m1 = 0; m1 <= M; ++m1) conv += p[m1] * q[M - m1];
                                const double want = phi_tilde(k1 + k2, s1 + s2, static_cast<long long>(M), orders, h);
                                track.add(conv, want, [&](std::ostream& os) {
                                    os << "alpha=" << orders.alpha << " beta=" << orders.beta << " h=" << h
                                       << " (" << k1 << "," << s1 << ")*(" << k2 << "," << s2 << ") M=" << M;
                                });
                            }
                        }
        }
    }
    return track.finish();
}

std::vector<IdentityCheckResult> run_identity_suite(const SuiteOptions& opts) {
    std::vector<IdentityCheckResult> out;
    {
        std::vector<IdentityCheckResult> parts;
        for (double h : {0.5, 1.0, 2.0}) {
            for (const auto& orders : default_pairs()) parts.push_back(verify_power_rule(orders, h, 6.0, 200));
        }
        out.push_back(merge(parts, "power_rule"));
    }
    out.push_back(verify_composition(100, opts.seed));
    out.push_back(verify_caputo_inversion(100, opts.seed));
    out.push_back(verify_phi_recurrence(PhiSide::Alpha, 5, 5, 100, opts.kernel_perturbation));
    out.push_back(verify_phi_recurrence(PhiSide::Beta, 5, 5, 100, opts.kernel_perturbation));
    out.push_back(verify_phi_recurrence(PhiSide::BetaLagged, 5, 5, 100, opts.kernel_perturbation));
    out.push_back(verify_convolution_form(2, 2, 200, opts.seed, opts.kernel_perturbation));
    out.push_back(verify_kernel_semigroup(4, 100));
    return out;
}

std::vector<Vector> classical_stepper(const SystemSpec& spec, EulerForm form) {
    spec.validate();
    std::vector<Vector> x(spec.horizon + 1);
    Vector xn = spec.x_a;
    Vector yn = spec.x_0;
    x[0] = xn;
    for (std::size_t n = 0; n < spec.horizon; ++n) {
        const Vector f = spec.eval_rhs(n, xn);
        if (form == EulerForm::Explicit) {
            xn = xn + spec.h * yn;
            yn = yn + spec.h * f;
        } else {
            yn = yn + spec.h * f;
            xn = xn + spec.h * yn;
        }
        x[n + 1] = xn;
    }
    return x;
}

DefinitionalSolution solve_by_definition(const SystemSpec& spec) {
    spec.validate();
    const std::size_t N = spec.horizon;
    const double h = spec.h;
    // Caputo of order q at index n: sum_{k<=n} c_{n-k} (z(k+1) - z(k)) / h with the
    // order-(1-q) sum weights; the identity weights when q = 1.
    const auto caputo_weights = [&](double q) {
        if (q == 1.0) {
            std::vector<double> c(N + 1, 0.0);
            c[0] = 1.0;
            return c;
        }
        return definitional_weights(1.0 - q, h, N + 1);
    };
    const auto cx = caputo_weights(spec.orders.alpha);
    const auto cy = caputo_weights(spec.orders.beta);

    DefinitionalSolution sol;
    sol.x.assign(N + 1, Vector());
    sol.y.assign(N + 1, Vector());
    sol.x[0] = spec.x_a;
    sol.y[0] = spec.x_0;
    // Solves target = sum_{k<=n} c_{n-k} (z(k+1)-z(k))/h for z(n+1).
    const auto advance = [&](const std::vector<Vector>& z, const std::vector<double>& c, std::size_t n,
                             const Vector& target) {
        Vector rest = target;
        for (std::size_t k = 0; k < n; ++k) rest -= c[n - k] * (z[k + 1] - z[k]) / h;
        return Vector(z[n] + h * rest / c[0]);
    };
    for (std::size_t n = 0; n < N; ++n) {
        sol.x[n + 1] = advance(sol.x, cx, n, sol.y[n]);
        sol.y[n + 1] = advance(sol.y, cy, n, spec.eval_rhs(n, sol.x[n]));
    }
    return sol;
}

}  // namespace fracsys::oracle
