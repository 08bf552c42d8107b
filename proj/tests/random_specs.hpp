#pragma once

#include <random>
#include <vector>

#include "fracsys/system.hpp"

namespace fracsys::testing {

struct SpecSampler {
    explicit SpecSampler(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    template <class T>
    const T& pick(const std::vector<T>& options) {
        return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    }

    Vector vector(std::size_t dim, double lo = -1.0, double hi = 1.0) {
        Vector v(static_cast<Eigen::Index>(dim));
        for (auto& e : v) e = uniform(lo, hi);
        return v;
    }

    Matrix matrix(std::size_t dim, double lo = -1.0, double hi = 1.0) {
        const auto d = static_cast<Eigen::Index>(dim);
        Matrix A(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) A(i, j) = uniform(lo, hi);
        return A;
    }

    // Entries of A, x_a, x_0 uniform in [-1,1]; alpha, beta in {0.3, 0.5, 1}; h in {0.1, 0.5, 1}.
    SystemSpec linear(std::size_t horizon, std::size_t max_dim = 4) {
        SystemSpec spec;
        spec.dim = std::uniform_int_distribution<std::size_t>(1, max_dim)(rng);
        spec.orders = FracOrderPair(pick(orders_), pick(orders_));
        spec.h = pick(steps_);
        spec.horizon = horizon;
        spec.rhs = LinearRhs{matrix(spec.dim)};
        spec.x_a = vector(spec.dim);
        spec.x_0 = vector(spec.dim);
        return spec;
    }

    SystemSpec semilinear(std::size_t horizon, std::size_t max_dim = 4) {
        SystemSpec spec = linear(horizon, max_dim);
        SemilinearRhs semi{std::get<LinearRhs>(spec.rhs).A, {}};
        for (std::size_t n = 0; n <= horizon; ++n) semi.gamma.push_back(vector(spec.dim));
        spec.rhs = std::move(semi);
        return spec;
    }

    std::mt19937_64 rng;

private:
    std::vector<double> orders_{0.3, 0.5, 1.0};
    std::vector<double> steps_{0.1, 0.5, 1.0};
};

inline double max_rel_error(const Vector& got, const Vector& want) {
    return (got - want).lpNorm<Eigen::Infinity>() / std::max(1.0, want.lpNorm<Eigen::Infinity>());
}

inline const Matrix& system_matrix(const SystemSpec& spec) {
    if (const auto* lin = std::get_if<LinearRhs>(&spec.rhs)) return lin->A;
    return std::get<SemilinearRhs>(spec.rhs).A;
}

}  // namespace fracsys::testing
