#pragma once

// Binary128 helpers for the series solvers (internal header).

#include <quadmath.h>

#include <cstddef>
#include <vector>

#include "fracsys/system.hpp"

namespace fracsys::quad {

using real = __float128;

inline real from(double v) { return static_cast<real>(v); }
inline double to_double(real v) { return static_cast<double>(v); }
inline real abs(real v) { return v < 0 ? -v : v; }

/// Dense row-major square matrix.
struct Mat {
    std::size_t n = 0;
    std::vector<real> a;

    explicit Mat(std::size_t dim = 0) : n(dim), a(dim * dim, real(0)) {}

    static Mat from(const Matrix& m) {
        Mat q(static_cast<std::size_t>(m.rows()));
        for (std::size_t i = 0; i < q.n; ++i)
            for (std::size_t j = 0; j < q.n; ++j) q(i, j) = static_cast<real>(m(i, j));
        return q;
    }
    static Mat identity(std::size_t dim) {
        Mat q(dim);
        for (std::size_t i = 0; i < dim; ++i) q(i, i) = 1;
        return q;
    }

    real& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    real operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    /// Induced infinity norm.
    [[nodiscard]] real norm_inf() const {
        real best = 0;
        for (std::size_t i = 0; i < n; ++i) {
            real row = 0;
            for (std::size_t j = 0; j < n; ++j) row += abs((*this)(i, j));
            if (row > best) best = row;
        }
        return best;
    }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const real xik = x(i, k);
            for (std::size_t j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

using Vec = std::vector<real>;

inline Vec from(const Vector& v) {
    Vec q(static_cast<std::size_t>(v.size()));
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = static_cast<real>(v(static_cast<Eigen::Index>(i)));
    return q;
}

inline Vec apply(const Mat& m, const Vec& v) {
    Vec r(m.n, real(0));
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) r[i] += m(i, j) * v[j];
    return r;
}

/// binom(m + mu + shift, m) h^mu for m = 0..count-1, in binary128.
inline Vec binomial_kernel(real mu, real shift, real h, std::size_t count) {
    Vec out(count);
    if (count == 0) return out;
    real v = powq(h, mu);
    out[0] = v;
    for (std::size_t m = 0; m + 1 < count; ++m) {
        const real md = static_cast<real>(m);
        v *= (md + 1 + mu + shift) / (md + 1);
        out[m + 1] = v;
    }
    return out;
}

}  // namespace fracsys::quad
