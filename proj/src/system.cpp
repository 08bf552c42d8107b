#include "fracsys/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsys {

namespace {

void check_matrix(const Matrix& A, std::size_t dim) {
    if (static_cast<std::size_t>(A.rows()) != dim || static_cast<std::size_t>(A.cols()) != dim) {
        throw std::invalid_argument("A must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
}

}  // namespace

void SystemSpec::validate() const {
    if (dim == 0) throw std::invalid_argument("dim must be positive");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h must be positive");
    FracOrderPair check(orders.alpha, orders.beta);
    (void)check;
    if (static_cast<std::size_t>(x_a.size()) != dim) throw std::invalid_argument("x_a has wrong length");
    if (static_cast<std::size_t>(x_0.size()) != dim) throw std::invalid_argument("x_0 has wrong length");
    if (const auto* lin = std::get_if<LinearRhs>(&rhs)) {
        check_matrix(lin->A, dim);
    } else if (const auto* semi = std::get_if<SemilinearRhs>(&rhs)) {
        check_matrix(semi->A, dim);
        if (semi->gamma.size() < horizon + 1) {
            throw std::invalid_argument("gamma needs at least " + std::to_string(horizon + 1) +
                                        " samples, has " + std::to_string(semi->gamma.size()));
        }
        for (const auto& g : semi->gamma) {
            if (static_cast<std::size_t>(g.size()) != dim) {
                throw std::invalid_argument("gamma sample has wrong length");
            }
        }
    } else if (!std::get<GeneralRhs>(rhs).f) {
        throw std::invalid_argument("general rhs has no function");
    }
}

Vector SystemSpec::eval_rhs(std::size_t n, const Vector& x) const {
    return std::visit(
        [&](const auto& r) -> Vector {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, LinearRhs>) {
                return r.A * x;
            } else if constexpr (std::is_same_v<T, SemilinearRhs>) {
                return r.A * x + r.gamma[n];
            } else {
                Vector v = r.f(static_cast<double>(n) * h, x);
                if (static_cast<std::size_t>(v.size()) != dim) {
                    throw std::invalid_argument("rhs returned a vector of length " +
                                                std::to_string(v.size()));
                }
                return v;
            }
        },
        rhs);
}

std::vector<double> solution_times(const FracOrderPair& orders, double h, std::size_t horizon) {
    std::vector<double> t(horizon + 1);
    const double a = orders.offset_a(h);
    for (std::size_t n = 0; n <= horizon; ++n) t[n] = static_cast<double>(n) * h + a;
    return t;
}

}  // namespace fracsys
