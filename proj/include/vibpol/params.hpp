#pragma once

// Model parameters of the coupled cavity-matter chain.
//
// Convention notes that the rest of the code relies on:
//  * eta is the density-scaled light-matter coupling: the per-site bilinear
//    coupling is G_lm = 2*eta*sqrt(omega_0^3 * omega_m) and the per-site
//    dipole self-energy coefficient is d_se = 2*eta^2*omega_0*omega_m, both
//    independent of the supercell size.  With this choice the resonant
//    harmonic Rabi splitting is exactly 2*eta*omega_m.
//  * d_se multiplies r^2 (not r^2/2), i.e. it adds 2*d_se to the matter
//    diagonal of the dynamical matrix.
//  * g is stored in absolute atomic units (frequency^3); configs specify it
//    as a multiple of omega_m^3.

#include <cmath>
#include <string>

#include "errors.hpp"
#include "units.hpp"

namespace vibpol {

struct ModelParams {
    double a = 5.669;                    // lattice constant (bohr)
    double omega_m = 0.0;                // bare matter frequency (Ha)
    double Omega_m = 0.0;                // nearest-neighbor matter coupling (Ha)
    double g = 0.0;                      // on-site quartic anharmonicity (a.u.)
    double omega_0 = 0.0;                // cavity cutoff frequency (Ha)
    double eta = 0.0;                    // density-scaled light-matter coupling
    double c = speed_of_light_au;        // speed of light (a.u.)
    double T = 300.0;                    // temperature (K)
    int n_sites = 128;                   // unit cells in the supercell
    int stencil_order = 2;               // photon-chain finite-difference order

    double kBT() const { return kelvin_to_kBT_ha(T); }

    void validate() const {
        auto fail = [](const std::string& m) { throw ConfigError("ModelParams: " + m); };
        if (!(a > 0)) fail("lattice constant a must be > 0");
        if (!(omega_m > 0)) fail("omega_m must be > 0");
        if (Omega_m < 0) fail("Omega_m must be >= 0");
        if (g < 0) fail("g must be >= 0");
        if (!(omega_0 > 0)) fail("omega_0 must be > 0");
        if (eta < 0) fail("eta must be >= 0");
        if (!(T > 0)) fail("temperature must be > 0");
        if (n_sites < 2) fail("n_sites must be >= 2");
        if (stencil_order != 2 && stencil_order != 4 && stencil_order != 6 && stencil_order != 8)
            fail("stencil_order must be one of {2,4,6,8}, got " + std::to_string(stencil_order));
    }
};

struct EffectiveCouplings {
    double G_lm;  // bilinear x-r coupling (Ha^2)
    double d_se;  // dipole self-energy coefficient of r^2 (Ha^2)
};

inline EffectiveCouplings effective_couplings(const ModelParams& p) {
    return {2.0 * p.eta * std::sqrt(p.omega_0 * p.omega_0 * p.omega_0 * p.omega_m),
            2.0 * p.eta * p.eta * p.omega_0 * p.omega_m};
}

// Continuum cavity dispersion for the n=1 transverse-electric branch.
inline double analytic_cavity_dispersion(const ModelParams& p, double k) {
    return std::sqrt(p.omega_0 * p.omega_0 + p.c * p.c * k * k);
}

// Bare matter band of the isolated chain.
inline double matter_band(const ModelParams& p, double k) {
    double s = std::sin(0.5 * k * p.a);
    return std::sqrt(p.omega_m * p.omega_m + 4.0 * p.Omega_m * p.Omega_m * s * s);
}

// On-site (k-averaged diagonal) matter force constant: the local reference
// used by the impurity model, omega_loc^2 = omega_m^2 + 2 Omega_m^2 + 2 d_se.
inline double local_matter_freq2(const ModelParams& p) {
    return p.omega_m * p.omega_m + 2.0 * p.Omega_m * p.Omega_m + 2.0 * effective_couplings(p).d_se;
}

// Parameters of the reference chain: a = 3 A, omega_m = 440 meV,
// Omega_m = 215 meV, g = 4.3 omega_m^3, T = 300 K, cavity resonant at Gamma.
inline ModelParams default_chain_params() {
    ModelParams p;
    p.a = angstrom_to_bohr(3.0);
    p.omega_m = mev_to_ha(440.0);
    p.Omega_m = mev_to_ha(215.0);
    p.g = 4.3 * p.omega_m * p.omega_m * p.omega_m;
    p.omega_0 = p.omega_m;
    p.eta = 0.0;
    p.T = 300.0;
    p.n_sites = 128;
    p.stencil_order = 2;
    return p;
}

}  // namespace vibpol
