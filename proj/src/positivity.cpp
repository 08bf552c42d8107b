#include "fracsys/positivity.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fracsys {

std::string describe(const PositivityVerdict& v) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PositiveOnHorizon>) {
                os << "PositiveOnHorizon";
            } else if constexpr (std::is_same_v<T, ViolatedAt>) {
                os << "ViolatedAt(" << x.step << "," << x.coord << "," << x.value << ")";
            } else if constexpr (std::is_same_v<T, LocalCriterionHolds>) {
                os << "LocalCriterionHolds";
            } else {
                os << "LocalCriterionFails(" << x.row << "," << x.col << "," << x.value << ")";
            }
        },
        v);
    return os.str();
}

PositivityReport local_positivity_criterion(const Matrix& A, const FracOrderPair& orders, double h,
                                            MatrixSign mode) {
    if (A.rows() != A.cols()) throw std::invalid_argument("local_positivity_criterion: A must be square");
    const double scale = std::pow(h, orders.alpha + orders.beta);
    PositivityReport report{LocalCriterionHolds{}, 1, 0.0};
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            const double m = (i == j ? 1.0 : 0.0) + A(i, j) * scale;
            const bool ok = mode == MatrixSign::NonNegative ? m >= 0.0 : m > 0.0;
            if (!ok) {
                report.verdict = LocalCriterionFails{static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j), m};
                return report;
            }
        }
    }
    return report;
}

PositivityReport check_trajectory_positivity(const Trajectory& traj, double tolerance) {
    if (tolerance < 0.0) throw std::invalid_argument("tolerance must be nonnegative");
    PositivityReport report{PositiveOnHorizon{}, traj.horizon(), tolerance};
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const auto& x = traj.states[n];
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x(i) < -tolerance) {
                report.verdict = ViolatedAt{n, static_cast<std::size_t>(i), x(i)};
                return report;
            }
        }
    }
    return report;
}

PositivityReport check_local_positivity(const SystemSpec& spec, std::size_t tau, double tolerance) {
    SystemSpec local = spec;
    local.horizon = tau;
    return check_trajectory_positivity(solve_recursive(local), tolerance);
}

PositivityReport nonneg_rhs_positivity_check(const SystemSpec& spec, std::size_t samples,
                                             std::size_t horizon, std::uint64_t seed,
                                             double tolerance) {
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SystemSpec trial = spec;
    trial.horizon = horizon;
    const auto dim = static_cast<Eigen::Index>(spec.dim);

    std::optional<PositivityReport> excused;
    for (std::size_t s = 0; s < samples; ++s) {
        trial.x_a = Vector(dim);
        trial.x_0 = Vector(dim);
        for (Eigen::Index i = 0; i < dim; ++i) trial.x_a(i) = unit(rng);
        for (Eigen::Index i = 0; i < dim; ++i) trial.x_0(i) = unit(rng);

        const Trajectory traj = solve_recursive(trial);
        // x(n) depends on f at steps 0..n-1 only.
        bool hypothesis = true;
        bool violated = false;
        for (std::size_t n = 0; n <= horizon && !violated; ++n) {
            const auto& x = traj.states[n];
            for (Eigen::Index i = 0; i < dim && !violated; ++i) {
                if (x(i) < -tolerance) {
                    PositivityReport r{ViolatedAt{n, static_cast<std::size_t>(i), x(i)}, horizon,
                                       tolerance, hypothesis, s + 1};
                    if (hypothesis) return r;
                    if (!excused) excused = r;
                    violated = true;
                }
            }
            if (n < horizon && hypothesis) {
                const Vector f = trial.eval_rhs(n, x);
                if ((f.array() < 0.0).any()) hypothesis = false;
            }
        }
    }
    if (excused) {
        excused->samples = samples;
        return *excused;
    }
    return {PositiveOnHorizon{}, horizon, tolerance, true, samples};
}

}  // namespace fracsys
