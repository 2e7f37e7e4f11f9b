#pragma once

// Small dense fixed-size matrices for the 1- and 2-band blocks of the model.
// Nothing here is tuned: dimensions are tiny (N <= 2 in practice) and the
// closed-form/Jacobi routines below are exact to round-off.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "errors.hpp"

namespace vibpol {

using cplx = std::complex<double>;

template <std::size_t N>
using Vec = std::array<double, N>;

// Row-major dense real matrix.
template <std::size_t N>
struct Mat {
    std::array<double, N * N> a{};
    double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }
};

// Row-major dense complex matrix.
template <std::size_t N>
struct CMat {
    std::array<cplx, N * N> a{};
    cplx& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }
};

template <std::size_t N>
inline Mat<N> matmul(const Mat<N>& x, const Mat<N>& y) {
    Mat<N> z;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            double s = 0;
            for (std::size_t l = 0; l < N; ++l) s += x(i, l) * y(l, j);
            z(i, j) = s;
        }
    return z;
}

template <std::size_t N>
inline CMat<N> cmatmul(const CMat<N>& x, const CMat<N>& y) {
    CMat<N> z;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            cplx s = 0;
            for (std::size_t l = 0; l < N; ++l) s += x(i, l) * y(l, j);
            z(i, j) = s;
        }
    return z;
}

// Inverse of a small complex matrix (closed form; the GF blocks are 1x1/2x2).
template <std::size_t N>
inline CMat<N> cinverse(const CMat<N>& m) {
    static_assert(N == 1 || N == 2, "closed-form inverse only for N <= 2");
    CMat<N> inv;
    if constexpr (N == 1) {
        inv(0, 0) = 1.0 / m(0, 0);
    } else {
        cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        inv(0, 0) = m(1, 1) / det;
        inv(1, 1) = m(0, 0) / det;
        inv(0, 1) = -m(0, 1) / det;
        inv(1, 0) = -m(1, 0) / det;
    }
    return inv;
}

template <std::size_t N>
struct EigSym {
    Vec<N> val{};   // ascending
    Mat<N> vec{};   // columns are eigenvectors, phase-fixed
};

// Cyclic Jacobi diagonalization of a real symmetric matrix.  Deterministic:
// fixed sweep order, eigenpairs sorted ascending, each eigenvector scaled so
// its largest-magnitude component is positive.
template <std::size_t N>
inline EigSym<N> eig_sym(const Mat<N>& m0) {
    Mat<N> m = m0;
    Mat<N> v;
    for (std::size_t i = 0; i < N; ++i) v(i, i) = 1.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) {
                if (std::abs(m(p, q)) < 1e-300) continue;
                double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t i = 0; i < N; ++i) {
                    double mip = m(i, p), miq = m(i, q);
                    m(i, p) = c * mip - s * miq;
                    m(i, q) = s * mip + c * miq;
                }
                for (std::size_t j = 0; j < N; ++j) {
                    double mpj = m(p, j), mqj = m(q, j);
                    m(p, j) = c * mpj - s * mqj;
                    m(q, j) = s * mpj + c * mqj;
                }
                for (std::size_t i = 0; i < N; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }

    EigSym<N> e;
    std::array<std::size_t, N> order{};
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    for (std::size_t i = 0; i + 1 < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (m(order[j], order[j]) < m(order[i], order[i])) std::swap(order[i], order[j]);
    for (std::size_t l = 0; l < N; ++l) {
        std::size_t c = order[l];
        e.val[l] = m(c, c);
        std::size_t imax = 0;
        for (std::size_t i = 1; i < N; ++i)
            if (std::abs(v(i, c)) > std::abs(v(imax, c))) imax = i;
        double sgn = v(imax, c) >= 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < N; ++i) e.vec(i, l) = sgn * v(i, c);
    }
    return e;
}

}  // namespace vibpol
