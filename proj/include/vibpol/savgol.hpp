#pragma once

// Savitzky-Golay smoothing: local least-squares polynomial fit evaluated at
// the sample point.  Used to tame Monte-Carlo noise in extracted self-energies
// before they re-enter the Dyson equation.  Edge points use the same order
// with an asymmetric window.

#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace vibpol {

namespace detail {

// Solve the small SPD normal-equation system in place (Gaussian elimination
// with partial pivoting; dimensions <= 7).
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b,
                                       std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        double d = A[col * n + col];
        if (d == 0.0) throw ConfigError("savgol: singular fit (window too small for order)");
        for (std::size_t r = col + 1; r < n; ++r) {
            double m = A[r * n + col] / d;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= m * A[col * n + c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i * n + c] * x[c];
        x[i] = s / A[i * n + i];
    }
    return x;
}

}  // namespace detail

inline std::vector<double> savgol_smooth(const std::vector<double>& y, int halfwidth,
                                         int order) {
    if (halfwidth < 1) return y;
    const std::size_t n = y.size();
    if (2 * halfwidth + 1 > static_cast<int>(n))
        throw ConfigError("savgol: window wider than data");
    if (order < 0 || order > 6) throw ConfigError("savgol: order out of range [0,6]");
    const std::size_t m = static_cast<std::size_t>(order) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        int lo = static_cast<int>(i) - halfwidth, hi = static_cast<int>(i) + halfwidth;
        if (lo < 0) lo = 0;
        if (hi >= static_cast<int>(n)) hi = static_cast<int>(n) - 1;
        std::vector<double> A(m * m, 0.0), b(m, 0.0);
        for (int j = lo; j <= hi; ++j) {
            double x = static_cast<double>(j - static_cast<int>(i));
            double xp = 1.0;
            std::vector<double> pw(m);
            for (std::size_t q = 0; q < m; ++q) {
                pw[q] = xp;
                xp *= x;
            }
            for (std::size_t q = 0; q < m; ++q) {
                for (std::size_t s = 0; s < m; ++s) A[q * m + s] += pw[q] * pw[s];
                b[q] += pw[q] * y[j];
            }
        }
        out[i] = detail::solve_dense(std::move(A), std::move(b), m)[0];
    }
    return out;
}

}  // namespace vibpol
