#include <doctest.h>

#include <cmath>

#include "fracsys/phi.hpp"
#include "fracsys/positivity.hpp"
#include "fracsys/solver.hpp"
#include "random_specs.hpp"

using namespace fracsys;
using fracsys::testing::SpecSampler;

namespace {

Trajectory scalar_states(std::vector<double> values) {
    Trajectory t;
    t.dim = 1;
    for (double v : values) {
        t.states.push_back(Vector::Constant(1, v));
        t.times.push_back(static_cast<double>(t.times.size()));
    }
    return t;
}

SystemSpec scalar_semilinear(double a1, double alpha, double beta, double h, std::size_t N, double xa, double x0,
                             double g) {
    SystemSpec spec;
    spec.dim = 1;
    spec.orders = FracOrderPair(alpha, beta);
    spec.h = h;
    spec.horizon = N;
    spec.rhs = SemilinearRhs{Matrix::Constant(1, 1, a1), std::vector<Vector>(N + 1, Vector::Constant(1, g))};
    spec.x_a = Vector::Constant(1, xa);
    spec.x_0 = Vector::Constant(1, x0);
    return spec;
}

}  // namespace

TEST_CASE("local criterion examples") {
    const FracOrderPair half(0.5, 0.5);
    CHECK(std::holds_alternative<LocalCriterionHolds>(local_positivity_criterion(Matrix::Zero(3, 3), half, 0.7).verdict));

    const auto fails = local_positivity_criterion(Matrix::Constant(1, 1, -2.0), half, 1.0);
    REQUIRE(std::holds_alternative<LocalCriterionFails>(fails.verdict));
    CHECK(describe(fails.verdict) == "LocalCriterionFails(0,0,-1)");

    Matrix A(2, 2);
    A << -1, 1, 0, -1;
    const auto holds = local_positivity_criterion(A, half, 0.5);  // h^(alpha+beta) = 0.5
    CHECK(std::holds_alternative<LocalCriterionHolds>(holds.verdict));
    // Strict mode rejects the zero entry.
    const auto strict = local_positivity_criterion(A, half, 0.5, MatrixSign::StrictlyPositive);
    REQUIRE(std::holds_alternative<LocalCriterionFails>(strict.verdict));
    const auto f = std::get<LocalCriterionFails>(strict.verdict);
    CHECK(f.row == 1);
    CHECK(f.col == 0);
}

TEST_CASE("trajectory scan examples") {
    CHECK(std::holds_alternative<PositiveOnHorizon>(check_trajectory_positivity(scalar_states({0, 0, 0})).verdict));
    const auto r = check_trajectory_positivity(scalar_states({1.0, -0.5}));
    REQUIRE(std::holds_alternative<ViolatedAt>(r.verdict));
    const auto v = std::get<ViolatedAt>(r.verdict);
    CHECK(v.step == 1);
    CHECK(v.coord == 0);
    CHECK(v.value == -0.5);
    CHECK(describe(r.verdict) == "ViolatedAt(1,0,-0.5)");
    CHECK(v.value < -r.tolerance);
}

TEST_CASE("property: verdict monotone in tolerance") {
    SpecSampler S(21);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> values;
        for (int n = 0; n < 20; ++n) values.push_back(S.uniform(-0.1, 1.0));
        const auto t = scalar_states(values);
        bool passed = false;
        for (double tol : {0.0, 1e-3, 1e-2, 0.05, 0.1}) {
            const bool ok = check_trajectory_positivity(t, tol).positive();
            if (passed) CHECK(ok);
            passed = passed || ok;
        }
    }
}

TEST_CASE("property: local criterion with nonnegative data gives a nonnegative first step") {
    SpecSampler S(22);
    int tried = 0;
    while (tried < 100) {
        auto spec = S.semilinear(1, 4);
        auto& semi = std::get<SemilinearRhs>(spec.rhs);
        const double scale = std::pow(spec.h, spec.orders.alpha + spec.orders.beta);
        // Off-diagonal >= 0, diagonal >= -1/scale.
        for (Eigen::Index i = 0; i < semi.A.rows(); ++i)
            for (Eigen::Index j = 0; j < semi.A.cols(); ++j)
                semi.A(i, j) = i == j ? S.uniform(-1.0 / scale, 1.0) : S.uniform(0.0, 1.0);
        for (auto& g : semi.gamma) g = S.vector(spec.dim, 0.0, 1.0);
        spec.x_a = S.vector(spec.dim, 0.0, 1.0);
        spec.x_0 = S.vector(spec.dim, 0.0, 1.0);
        if (!local_positivity_criterion(semi.A, spec.orders, spec.h).positive()) continue;
        ++tried;
        CHECK(check_local_positivity(spec).positive());
    }
}

TEST_CASE("property: the criterion is necessary for one-step positivity") {
    SpecSampler S(23);
    int found = 0;
    for (int i = 0; i < 300; ++i) {
        auto spec = S.linear(1, 4);
        const Matrix& A = std::get<LinearRhs>(spec.rhs).A;
        const auto crit = local_positivity_criterion(A, spec.orders, spec.h);
        if (crit.positive()) continue;
        ++found;
        const auto bad = std::get<LocalCriterionFails>(crit.verdict);
        spec.x_a = Vector::Unit(static_cast<Eigen::Index>(spec.dim), static_cast<Eigen::Index>(bad.col));
        spec.x_0 = Vector::Zero(static_cast<Eigen::Index>(spec.dim));
        const auto x1 = solve_recursive(spec).states[1];
        CHECK(x1(static_cast<Eigen::Index>(bad.row)) < 0.0);
    }
    CHECK(found > 50);
}

TEST_CASE("falsification examples") {
    SystemSpec zero;
    zero.dim = 2;
    zero.orders = FracOrderPair(0.4, 0.9);
    zero.h = 0.5;
    zero.rhs = GeneralRhs{[](double, const Vector& x) { return Vector::Zero(x.size()); }};
    zero.x_a = zero.x_0 = Vector::Zero(2);
    CHECK(nonneg_rhs_positivity_check(zero, 50, 40).positive());

    SystemSpec one = zero;
    one.dim = 1;
    one.rhs = GeneralRhs{[](double, const Vector&) { return Vector::Constant(1, 1.0); }};
    one.x_a = one.x_0 = Vector::Zero(1);
    CHECK(nonneg_rhs_positivity_check(one, 50, 40).positive());

    const auto spec = scalar_semilinear(-2.0, 1.0, 1.0, 1.0, 10, 1.0, 0.0, 0.0);
    const auto r = nonneg_rhs_positivity_check(spec, 20, 10);
    REQUIRE(std::holds_alternative<ViolatedAt>(r.verdict));
    CHECK(std::get<ViolatedAt>(r.verdict).step <= 2);
    CHECK_FALSE(r.hypothesis_held);
    CHECK(r.samples == 20);

    // Same seed, same verdict.
    CHECK(describe(nonneg_rhs_positivity_check(spec, 20, 10, 99).verdict) ==
          describe(nonneg_rhs_positivity_check(spec, 20, 10, 99).verdict));
}

TEST_CASE("nonnegative state-dependent rhs keeps trajectories nonnegative") {
    SystemSpec spec;
    spec.dim = 1;
    spec.orders = FracOrderPair(0.5, 0.5);
    spec.h = 1.0;
    spec.rhs = GeneralRhs{[](double, const Vector& x) { return Vector(x.array().abs()); }};
    spec.x_a = spec.x_0 = Vector::Zero(1);
    const auto r = nonneg_rhs_positivity_check(spec, 30, 25);
    CHECK(r.positive());
    CHECK(r.hypothesis_held);
}

TEST_CASE("kernel nonnegativity over long horizons") {
    for (const FracOrderPair o : {FracOrderPair(0.1, 0.1), FracOrderPair(0.9, 0.2), FracOrderPair(1.0, 1.0)}) {
        const auto p = phi_sequence(1, 0, o, 0.3, 10000);
        const auto q = phi_tilde_sequence(1, 1, o, 0.3, 10000);
        CHECK(std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0; }));
        CHECK(std::all_of(q.begin(), q.end(), [](double v) { return v >= 0.0; }));
    }
}
