#pragma once

// Hybridization function and its discretization into a finite bath of
// harmonic oscillators for the MD impurity solver.
//
// Conventions: Delta(w) = (w+id)^2 - w_loc^2 - Sigma(w) - 1/D_loc(w) in
// frequency-squared units; spectral density J(w) = -Im Delta(w) >= 0; a
// discrete bath reproduces Delta via Delta_fit(z) = sum_b c_b^2/(z^2 - w_b^2),
// so matching the weight of bin B requires c_b^2 = (2 w_b / pi) * int_B J dw.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"
#include "smallmat.hpp"

namespace vibpol {

struct Hybridization {
    std::vector<double> omega_grid;
    std::vector<cplx> values;       // frequency-squared units
    bool causal = true;
    double clipped_max = 0.0;       // largest positive Im removed by the causality clip

    std::size_t size() const { return omega_grid.size(); }
};

struct BathModel {
    std::vector<double> omega_b;  // bath frequencies (Ha)
    std::vector<double> c_b;      // bilinear couplings (Ha^2)
    double recon_error = 0.0;     // max |Delta_fit - Delta| / max |Delta|

    std::size_t size() const { return omega_b.size(); }
};

// Delta(w) = (w+id)^2 - w_loc^2 - Sigma(w) - 1/D_loc(w); positive Im noise is
// clipped to zero (logged in clipped_max).  noise_tol flags real
// inconsistencies as opposed to estimator jitter.
inline Hybridization hybridization_update(const LocalFn& d_loc, const std::vector<cplx>& sigma,
                                          double omega_loc2, double delta,
                                          double noise_tol = 1e-3) {
    if (!sigma.empty() && sigma.size() != d_loc.size())
        throw ConfigError("hybridization_update: sigma/local GF grid mismatch");
    Hybridization h;
    h.omega_grid = d_loc.omega_grid;
    h.values.resize(d_loc.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < d_loc.size(); ++i) {
        cplx z(d_loc.omega_grid[i], delta);
        cplx s = sigma.empty() ? cplx(0, 0) : sigma[i];
        cplx v = z * z - omega_loc2 - s - 1.0 / d_loc.values[i];
        if (v.imag() > 0.0) {
            h.clipped_max = std::max(h.clipped_max, v.imag());
            v = cplx(v.real(), 0.0);
        }
        h.values[i] = v;
        scale = std::max(scale, std::abs(v));
    }
    if (scale > 0.0 && h.clipped_max > noise_tol * scale) h.causal = false;
    return h;
}

// Evaluate the discrete-bath hybridization at w + i*delta.
inline cplx delta_fit_eval(const BathModel& bath, double omega, double delta) {
    cplx z(omega, delta), s(0, 0);
    for (std::size_t b = 0; b < bath.size(); ++b)
        s += bath.c_b[b] * bath.c_b[b] / (z * z - bath.omega_b[b] * bath.omega_b[b]);
    return s;
}

// Equal-weight binning of J(w) = -Im Delta: bin edges at equal increments of
// the cumulative weight, one mode per bin at the J-weighted mean frequency.
inline BathModel discretize_bath(const Hybridization& delta_in, int n_bath, double delta,
                                 double recon_tol = 0.5) {
    if (n_bath < 1) throw ConfigError("discretize_bath: need n_bath >= 1");
    const auto& w = delta_in.omega_grid;
    const std::size_t n = w.size();
    std::vector<double> J(n);
    double jmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        J[i] = std::max(0.0, -delta_in.values[i].imag());
        jmax = std::max(jmax, J[i]);
    }

    BathModel bath;
    if (jmax <= 0.0) return bath;  // empty hybridization -> empty bath

    // cumulative weight F(w) and first moment M(w) by trapezoid
    std::vector<double> F(n, 0.0), M(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double dw = w[i] - w[i - 1];
        F[i] = F[i - 1] + 0.5 * (J[i] + J[i - 1]) * dw;
        M[i] = M[i - 1] + 0.5 * (J[i] * w[i] + J[i - 1] * w[i - 1]) * dw;
    }
    const double W = F.back();
    if (W <= 0.0) return bath;

    auto interp = [&](const std::vector<double>& Y, double f) {
        // inverse lookup: value of Y at the point where F == f
        std::size_t lo = std::upper_bound(F.begin(), F.end(), f) - F.begin();
        if (lo == 0) return Y.front();
        if (lo >= n) return Y.back();
        double t = (f - F[lo - 1]) / std::max(F[lo] - F[lo - 1], 1e-300);
        return Y[lo - 1] + t * (Y[lo] - Y[lo - 1]);
    };

    bath.omega_b.reserve(n_bath);
    bath.c_b.reserve(n_bath);
    for (int b = 0; b < n_bath; ++b) {
        double f0 = W * b / n_bath, f1 = W * (b + 1) / n_bath;
        double weight = f1 - f0;
        double m0 = interp(M, f0), m1 = interp(M, f1);
        double wb = (m1 - m0) / weight;  // J-weighted mean frequency of the bin
        if (!(wb > 0.0)) continue;
        bath.omega_b.push_back(wb);
        bath.c_b.push_back(std::sqrt(2.0 * wb / pi * weight));
    }

    // reconstruction error against the input on its own grid
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cplx fit = delta_fit_eval(bath, w[i], delta);
        num = std::max(num, std::abs(fit - delta_in.values[i]));
        den = std::max(den, std::abs(delta_in.values[i]));
    }
    bath.recon_error = den > 0 ? num / den : 0.0;
    if (bath.recon_error > recon_tol)
        throw ConvergenceError("discretize_bath: reconstruction error " +
                               std::to_string(bath.recon_error) + " exceeds tolerance " +
                               std::to_string(recon_tol) + "; increase n_bath");
    return bath;
}

}  // namespace vibpol
