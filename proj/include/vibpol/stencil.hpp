#pragma once

// Central finite-difference stencils for the second derivative, used for the
// photon chain: higher orders extend the photon-photon coupling range and
// push the lattice dispersion toward the continuum sqrt(omega_0^2 + c^2 k^2).

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace vibpol {

// Coefficients {w_0, w_1, ..., w_{order/2}} with f''(0) ~ w_0 f(0) +
// sum_m w_m [f(m) + f(-m)] on a unit grid.  Standard Lagrange-polynomial
// values; exact for polynomials up to degree order+1.
inline std::vector<double> stencil_coefficients(int order) {
    switch (order) {
        case 2: return {-2.0, 1.0};
        case 4: return {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
        case 6: return {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
        case 8: return {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
        default:
            throw ConfigError("unsupported stencil order " + std::to_string(order) +
                              " (choose 2, 4, 6 or 8)");
    }
}

// Squared lattice photon frequency at wavevector k: a plane wave e^{ikx}
// turns the stencil into -k_eff^2, giving
//   omega^2(k) = omega_0^2 - (c/a)^2 [w_0 + 2 sum_m w_m cos(m k a)].
inline double photon_band2(const ModelParams& p, double k) {
    const auto w = stencil_coefficients(p.stencil_order);
    double acc = w[0];
    for (std::size_t m = 1; m < w.size(); ++m) acc += 2.0 * w[m] * std::cos(m * k * p.a);
    return p.omega_0 * p.omega_0 - (p.c / p.a) * (p.c / p.a) * acc;
}

inline double photon_band(const ModelParams& p, double k) { return std::sqrt(photon_band2(p, k)); }

}  // namespace vibpol
