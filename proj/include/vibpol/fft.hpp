#pragma once

// In-place iterative radix-2 FFT (power-of-two lengths) plus the multi-origin
// cross-correlation helper built on it.  Forward transform uses e^{-2 pi i};
// sizes in this code are always powers of two by construction.

#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "smallmat.hpp"
#include "units.hpp"

namespace vibpol {

inline bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

inline void fft_inplace(std::vector<cplx>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw ConfigError("fft: length must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// All-origin lag sums S(t) = sum_{t0} a(t0 + t) * conj(b(t0)), t = 0..L-1,
// via zero-padded FFTs.  Divide by (L - t) origins to get the average.
inline std::vector<cplx> lag_sums(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const std::size_t L = a.size();
    if (b.size() != L) throw ConfigError("lag_sums: length mismatch");
    std::size_t m = 1;
    while (m < 2 * L) m <<= 1;
    std::vector<cplx> fa(m, cplx(0, 0)), fb(m, cplx(0, 0));
    for (std::size_t i = 0; i < L; ++i) {
        fa[i] = a[i];
        fb[i] = b[i];
    }
    fft_inplace(fa);
    fft_inplace(fb);
    for (std::size_t i = 0; i < m; ++i) fa[i] *= std::conj(fb[i]);
    fft_inplace(fa, true);
    fa.resize(L);
    return fa;
}

}  // namespace vibpol
