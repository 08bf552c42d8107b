#include "fracsys/solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracsys/errors.hpp"
#include "fracsys/operators.hpp"
#include "fracsys/phi.hpp"
#include "quad.hpp"

namespace fracsys {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

Trajectory empty_trajectory(const SystemSpec& spec) {
    Trajectory t;
    t.dim = spec.dim;
    t.orders = spec.orders;
    t.h = spec.h;
    t.times = solution_times(spec.orders, spec.h, spec.horizon);
    t.states.resize(spec.horizon + 1);
    return t;
}

void lagged(Execution exec, std::span<const double> w, RowView rows, std::size_t count,
            std::span<double> out) {
    if (exec == Execution::Parallel) {
        parallel::lagged_sum(w, rows, count, out);
    } else {
        serial::lagged_sum(w, rows, count, out);
    }
}

// Runs body(n) for n in [lo, hi), in parallel when requested. Each n must be independent.
template <class Body>
void for_each_step(Execution exec, std::size_t lo, std::size_t hi, Body&& body) {
    const auto l = static_cast<std::ptrdiff_t>(lo);
    const auto u = static_cast<std::ptrdiff_t>(hi);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t n = l; n < u; ++n) body(static_cast<std::size_t>(n));
    } else {
        for (std::ptrdiff_t n = l; n < u; ++n) body(static_cast<std::size_t>(n));
    }
}

const quad::real kDoubleMax = static_cast<quad::real>(DBL_MAX);

void check_power(const quad::Mat& P, std::size_t k) {
    if (!(P.norm_inf() <= kDoubleMax)) {
        throw OverflowError("||A^k|| overflows at k=" + std::to_string(k));
    }
}

// sum_k A^k (phi(k,k,n) x_a + phi(k+1,k,n) x_0) for n = 0..N, in binary128.
std::vector<quad::Vec> homogeneous_part(const Matrix& A, const SystemSpec& spec, Execution exec) {
    const std::size_t N = spec.horizon;
    const std::size_t dim = spec.dim;
    const quad::Mat Aq = quad::Mat::from(A);
    const quad::Vec xa = quad::from(spec.x_a);
    const quad::Vec x0 = quad::from(spec.x_0);
    const quad::real alpha = quad::from(spec.orders.alpha);
    const quad::real beta = quad::from(spec.orders.beta);
    const quad::real h = quad::from(spec.h);

    std::vector<quad::Vec> acc(N + 1, quad::Vec(dim, quad::real(0)));
    quad::Mat P = quad::Mat::identity(dim);
    for (std::size_t k = 0; k <= N; ++k) {
        const auto kq = static_cast<quad::real>(k);
        const quad::Vec u = quad::apply(P, xa);
        const quad::Vec v = quad::apply(P, x0);
        // phi(k,k,n) = D[n-k] for n >= k; phi(k+1,k,n) = E[n-k-1] for n >= k+1.
        const quad::Vec D = quad::binomial_kernel(kq * (alpha + beta), 0, h, N - k + 1);
        const quad::Vec E = quad::binomial_kernel((kq + 1) * alpha + kq * beta, 0, h, N - k);
        for_each_step(exec, k, N + 1, [&](std::size_t n) {
            auto& out = acc[n];
            const quad::real d = D[n - k];
            const quad::real e = n > k ? E[n - k - 1] : quad::real(0);
            for (std::size_t i = 0; i < dim; ++i) out[i] += d * u[i] + e * v[i];
        });
        if (k < N) {
            P = Aq * P;
            check_power(P, k + 1);
        }
    }
    return acc;
}

std::vector<quad::Vec> gamma_samples(const SemilinearRhs& rhs, std::size_t count) {
    std::vector<quad::Vec> g;
    g.reserve(count);
    for (std::size_t r = 0; r < count; ++r) g.push_back(quad::from(rhs.gamma[r]));
    return g;
}

// sum_{r} sum_{k=0}^{n-1-r} A^k phi~(k+1,k+1, n-(k+1)-r) gamma(r).
void add_forced_corrected(const SemilinearRhs& rhs, const SystemSpec& spec, Execution exec,
                          std::vector<quad::Vec>& acc) {
    const std::size_t N = spec.horizon;
    const std::size_t dim = spec.dim;
    if (N == 0) return;
    const auto g = gamma_samples(rhs, N + 1);
    const quad::Mat Aq = quad::Mat::from(rhs.A);
    const quad::real mu1 = quad::from(spec.orders.alpha) + quad::from(spec.orders.beta);
    const quad::real h = quad::from(spec.h);

    quad::Mat P = quad::Mat::identity(dim);
    for (std::size_t k = 0; k < N; ++k) {
        const auto kq = static_cast<quad::real>(k);
        const quad::Vec W = quad::binomial_kernel((kq + 1) * mu1, -1, h, N - k);
        for_each_step(exec, k + 1, N + 1, [&](std::size_t n) {
            const std::size_t last = n - k - 1;
            quad::Vec c(dim, quad::real(0));
            for (std::size_t r = 0; r <= last; ++r) {
                const quad::real w = W[last - r];
                for (std::size_t i = 0; i < dim; ++i) c[i] += w * g[r][i];
            }
            const quad::Vec pc = quad::apply(P, c);
            for (std::size_t i = 0; i < dim; ++i) acc[n][i] += pc[i];
        });
        if (k + 1 < N) {
            P = Aq * P;
            check_power(P, k + 1);
        }
    }
}

// sum_{r=0}^{n} (sum_k A^k phi~(k+1,k+1, n-1-r)) gamma(r), the k-sum truncated.
void add_forced_literal(const SemilinearRhs& rhs, const SystemSpec& spec, const SeriesOptions& opts,
                        std::vector<quad::Vec>& acc) {
    const std::size_t N = spec.horizon;
    const std::size_t dim = spec.dim;
    if (N == 0) return;
    const auto g = gamma_samples(rhs, N + 1);
    const quad::Mat Aq = quad::Mat::from(rhs.A);
    const quad::real mu1 = quad::from(spec.orders.alpha) + quad::from(spec.orders.beta);
    const quad::real h = quad::from(spec.h);
    const quad::real tol = quad::from(opts.truncation_tol);
    const std::size_t budget = opts.term_budget(N);

    // M[m] = sum_k A^k phi~(k+1,k+1,m), m = 0..N-1.
    std::vector<quad::Mat> M(N, quad::Mat(dim));
    std::vector<char> converged(N, 0);
    std::size_t open = N;
    quad::Mat P = quad::Mat::identity(dim);
    for (std::size_t k = 0; open > 0; ++k) {
        if (k > budget) {
            throw TruncationError("literal forced series not converged after " +
                                  std::to_string(budget) + " terms (" + std::to_string(open) +
                                  " kernel lags open)");
        }
        const auto kq = static_cast<quad::real>(k);
        const quad::Vec W = quad::binomial_kernel((kq + 1) * mu1, -1, h, N);
        const quad::real pnorm = P.norm_inf();
        for (std::size_t m = 0; m < N; ++m) {
            if (converged[m]) continue;
            for (std::size_t i = 0; i < dim * dim; ++i) M[m].a[i] += W[m] * P.a[i];
            if (pnorm * W[m] < tol) {
                converged[m] = 1;
                --open;
            }
        }
        P = Aq * P;
        check_power(P, k + 1);
    }

    for_each_step(opts.exec, 1, N + 1, [&](std::size_t n) {
        for (std::size_t m = 0; m < n; ++m) {
            const quad::Vec t = quad::apply(M[m], g[n - 1 - m]);
            for (std::size_t i = 0; i < dim; ++i) acc[n][i] += t[i];
        }
    });
}

void store_states(const std::vector<quad::Vec>& acc, const SystemSpec& spec, Trajectory& traj) {
    for (std::size_t n = 0; n < acc.size(); ++n) {
        Vector x(static_cast<Eigen::Index>(spec.dim));
        for (std::size_t i = 0; i < spec.dim; ++i) x(static_cast<Eigen::Index>(i)) = quad::to_double(acc[n][i]);
        if (!all_finite(x)) throw NonFiniteError(n, "series solution is not finite");
        traj.states[n] = std::move(x);
    }
    traj.states[0] = spec.x_a;
}

}  // namespace

Trajectory solve_recursive(const SystemSpec& spec, const RecursionOptions& opts) {
    spec.validate();
    const std::size_t N = spec.horizon;
    const std::size_t dim = spec.dim;
    const std::size_t lag = opts.lag == ForcingLag::OneStep ? 1 : 2;

    Trajectory traj = empty_trajectory(spec);
    const auto phi10 = phi_sequence(1, 0, spec.orders, spec.h, N);
    const auto kernel = phi_tilde_sequence(1, 1, spec.orders, spec.h, N);

    // f(rh, x(rh+a)) cached row-major; row r is filled once x(r) is known.
    std::vector<double> forcing((N + 1) * dim, 0.0);
    const RowView rows{forcing, dim};
    const auto d = static_cast<Eigen::Index>(dim);
    Vector x(d);
    Vector conv(d);

    for (std::size_t n = 0; n <= N; ++n) {
        if (n == 0) {
            x = spec.x_a;
        } else {
            x.noalias() = spec.x_a + phi10[n] * spec.x_0;
            const std::size_t count = n >= lag ? n - lag + 1 : 0;
            if (count > 0) {
                lagged(opts.exec, kernel, rows, count, std::span<double>(conv.data(), dim));
                x += conv;
            }
            if (!all_finite(x)) throw NonFiniteError(n, "recursive solution is not finite");
        }
        if (n < N) {
            Eigen::Map<Vector> f(forcing.data() + n * dim, d);
            if (const auto* lin = std::get_if<LinearRhs>(&spec.rhs)) {
                f.noalias() = lin->A * x;
            } else if (const auto* semi = std::get_if<SemilinearRhs>(&spec.rhs)) {
                f.noalias() = semi->A * x;
                f += semi->gamma[n];
            } else {
                f = spec.eval_rhs(n, x);
            }
            if (!f.allFinite()) throw NonFiniteError(n, "rhs value is not finite");
        }
        traj.states[n] = x;
    }
    return traj;
}

Trajectory solve_linear_series(const SystemSpec& spec, Execution exec) {
    spec.validate();
    const auto* lin = std::get_if<LinearRhs>(&spec.rhs);
    if (lin == nullptr) throw std::invalid_argument("solve_linear_series needs a linear rhs");
    Trajectory traj = empty_trajectory(spec);
    store_states(homogeneous_part(lin->A, spec, exec), spec, traj);
    return traj;
}

Trajectory solve_semilinear_series(const SystemSpec& spec, const SeriesOptions& opts) {
    spec.validate();
    const auto* semi = std::get_if<SemilinearRhs>(&spec.rhs);
    if (semi == nullptr) throw std::invalid_argument("solve_semilinear_series needs a semilinear rhs");
    if (!(opts.truncation_tol > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");

    Trajectory traj = empty_trajectory(spec);
    auto acc = homogeneous_part(semi->A, spec, opts.exec);
    // Only gamma(0..N-1) reaches the states; an all-zero forcing leaves the homogeneous part.
    const bool unforced = std::all_of(semi->gamma.begin(), semi->gamma.begin() + static_cast<std::ptrdiff_t>(spec.horizon),
                                      [](const Vector& g) { return g.isZero(0.0); });
    if (!unforced && opts.kernel == KernelVariant::Corrected) add_forced_corrected(*semi, spec, opts.exec, acc);
    if (!unforced && opts.kernel == KernelVariant::Literal) add_forced_literal(*semi, spec, opts, acc);
    if (opts.kernel == KernelVariant::Literal) {
        const double rho = scaled_spectral_radius(semi->A, spec.orders, spec.h);
        if (rho >= 1.0) {
            traj.warnings.push_back("literal forced series: spectral radius of A*h^(alpha+beta) is " +
                                    std::to_string(rho) + " >= 1, the series diverges");
        }
    }
    store_states(acc, spec, traj);
    return traj;
}

Trajectory reconstruct_y(const SystemSpec& spec, Trajectory traj) {
    spec.validate();
    const std::size_t N = traj.horizon();
    const std::size_t dim = spec.dim;
    if (traj.states.size() != spec.horizon + 1) {
        throw std::invalid_argument("reconstruct_y: trajectory does not cover the horizon");
    }

    std::vector<double> ft((N + 1) * dim, 0.0);
    for (std::size_t r = 0; r < N; ++r) {
        const Vector f = spec.eval_rhs(r, traj.states[r]);
        std::copy(f.data(), f.data() + dim, ft.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }
    const auto w = sum_weights(spec.orders.beta, N + 1);
    const auto conv = parallel::causal_convolution(w, RowView{ft, dim}, 1);
    const double scale = std::pow(spec.h, spec.orders.beta);

    std::vector<Vector> aux(N + 1, spec.x_0);
    for (std::size_t n = 1; n <= N; ++n) {
        for (std::size_t i = 0; i < dim; ++i) {
            aux[n](static_cast<Eigen::Index>(i)) += scale * conv[n * dim + i];
        }
        if (!all_finite(aux[n])) throw NonFiniteError(n, "auxiliary variable is not finite");
    }
    traj.aux = std::move(aux);
    return traj;
}

double DiscrepancyReport::max() const noexcept {
    double m = 0.0;
    for (double v : per_step) m = std::max(m, v);
    return m;
}

DiscrepancyReport compare_solvers(const SystemSpec& spec, const SeriesOptions& opts) {
    DiscrepancyReport report;
    Trajectory series;
    if (spec.is_linear()) {
        report.series_method = "linear-series";
        series = solve_linear_series(spec, opts.exec);
    } else if (spec.is_semilinear()) {
        report.series_method = opts.kernel == KernelVariant::Corrected ? "semilinear-series/corrected"
                                                                       : "semilinear-series/literal";
        series = solve_semilinear_series(spec, opts);
    } else {
        throw std::invalid_argument("compare_solvers needs a linear or semilinear rhs");
    }
    const Trajectory rec = solve_recursive(spec, {ForcingLag::OneStep, opts.exec});

    report.per_step.resize(rec.states.size());
    for (std::size_t n = 0; n < rec.states.size(); ++n) {
        const double diff = (series.states[n] - rec.states[n]).lpNorm<Eigen::Infinity>();
        const double scale = std::max(1.0, rec.states[n].lpNorm<Eigen::Infinity>());
        report.per_step[n] = diff / scale;
        if (report.per_step[n] > report.threshold) report.flagged.push_back(n);
    }
    return report;
}

double scaled_spectral_radius(const Matrix& A, const FracOrderPair& orders, double h) {
    if (A.size() == 0) return 0.0;
    const Eigen::EigenSolver<Matrix> es(A, false);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    return rho * std::pow(h, orders.alpha + orders.beta);
}

}  // namespace fracsys
