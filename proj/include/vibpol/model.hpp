#pragma once

// Real-space potential and forces of the coupled cavity-matter chain:
//
//   V = 1/2 sum_j [ omega_0^2 x_j^2 + (c/a)^2 (x_j - x_{j+1})^2 ]
//     + 1/2 sum_j [ omega_m^2 r_j^2 + g r_j^4 + Omega_m^2 (r_j - r_{j+1})^2 ]
//     + sum_j G_lm x_j r_j + sum_j d_se r_j^2
//
// with periodic boundaries.  The photon gradient term is written here for the
// order-2 stencil; higher orders replace (c/a)^2*2(1-cos ka) by the general
// stencil expansion and are handled in the k-space dynamical matrix.  The
// real-space cells below keep the order-2 form because MD of the full coupled
// chain (behind a flag) uses it; the production MD path is the matter chain.

#include <cstddef>
#include <vector>

#include "params.hpp"

namespace vibpol {

struct DisplacementState {
    std::vector<double> x, r;      // per-site displacements (mass-weighted bohr)
    std::vector<double> v_x, v_r;  // conjugate velocities (a.u.)
    bool periodic = true;

    static DisplacementState zero(int n) {
        DisplacementState s;
        s.x.assign(n, 0.0);
        s.r.assign(n, 0.0);
        s.v_x.assign(n, 0.0);
        s.v_r.assign(n, 0.0);
        return s;
    }
};

inline void check_state(const ModelParams& p, const DisplacementState& s) {
    std::size_t n = static_cast<std::size_t>(p.n_sites);
    if (s.x.size() != n || s.r.size() != n || s.v_x.size() != n || s.v_r.size() != n)
        throw ConfigError("DisplacementState length does not match n_sites");
    if (!s.periodic) throw ConfigError("only periodic boundaries are supported");
}

inline double potential_energy(const ModelParams& p, const DisplacementState& s) {
    check_state(p, s);
    const auto [G, dse] = effective_couplings(p);
    const double om0_2 = p.omega_0 * p.omega_0;
    const double omm_2 = p.omega_m * p.omega_m;
    const double Omm_2 = p.Omega_m * p.Omega_m;
    const double ph_nn = (p.c / p.a) * (p.c / p.a);
    const std::size_t n = s.x.size();
    double V = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        double dx = s.x[j] - s.x[jp], dr = s.r[j] - s.r[jp];
        double r2 = s.r[j] * s.r[j];
        V += 0.5 * (om0_2 * s.x[j] * s.x[j] + ph_nn * dx * dx);
        V += 0.5 * (omm_2 * r2 + p.g * r2 * r2 + Omm_2 * dr * dr);
        V += G * s.x[j] * s.r[j] + dse * r2;
    }
    return V;
}

struct ForceField {
    std::vector<double> f_x, f_r;  // -dV/dx_j, -dV/dr_j
};

inline ForceField forces(const ModelParams& p, const DisplacementState& s) {
    check_state(p, s);
    const auto [G, dse] = effective_couplings(p);
    const double om0_2 = p.omega_0 * p.omega_0;
    const double omm_2 = p.omega_m * p.omega_m;
    const double Omm_2 = p.Omega_m * p.Omega_m;
    const double ph_nn = (p.c / p.a) * (p.c / p.a);
    const std::size_t n = s.x.size();
    ForceField f;
    f.f_x.resize(n);
    f.f_r.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        std::size_t jm = (j == 0) ? n - 1 : j - 1;
        f.f_x[j] = -om0_2 * s.x[j] + ph_nn * (s.x[jp] + s.x[jm] - 2.0 * s.x[j]) - G * s.r[j];
        f.f_r[j] = -(omm_2 + 2.0 * dse) * s.r[j] - 2.0 * p.g * s.r[j] * s.r[j] * s.r[j] +
                   Omm_2 * (s.r[jp] + s.r[jm] - 2.0 * s.r[j]) - G * s.x[j];
    }
    return f;
}

inline double kinetic_energy(const DisplacementState& s) {
    double K = 0.0;
    for (double v : s.v_x) K += 0.5 * v * v;
    for (double v : s.v_r) K += 0.5 * v * v;
    return K;
}

}  // namespace vibpol
