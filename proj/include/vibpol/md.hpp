#pragma once

// Classical MD: Langevin (BAOAB) thermalization followed by velocity-Verlet
// NVE production.  The production run is NVE because the target observable is
// an equilibrium correlation function; the thermostat only prepares canonical
// initial conditions.
//
// A "system" is any type providing:
//   std::size_t ndof() const;
//   void force(const double* u, double* f) const;
//   double potential(const double* u) const;
//   double omega_max() const;   // stiffest harmonic frequency, for dt checks

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace vibpol {

enum class WindowKind { exponential, hann, none };

struct MdOptions {
    double dt = 4.0;          // a.u. time
    int n_equil = 8192;
    int n_prod = 1 << 15;
    int n_traj = 100;
    double friction = 2.0e-3; // Langevin gamma (a.u.), equilibration only
    std::uint64_t seed = 20230817;
    int stride = 2;           // record every stride-th production step
    WindowKind window = WindowKind::exponential;
    double tau_damp = 0.0;    // exponential window time constant; 0 = use 1/delta

    std::size_t n_frames() const { return static_cast<std::size_t>(n_prod / stride); }
};

// Isolated anharmonic matter chain: one coordinate per cell, periodic.
struct MatterChain {
    double omega_m2, Omega_m2, g;
    std::size_t n;

    explicit MatterChain(const ModelParams& p)
        : omega_m2(p.omega_m * p.omega_m),
          Omega_m2(p.Omega_m * p.Omega_m),
          g(p.g),
          n(static_cast<std::size_t>(p.n_sites)) {}

    std::size_t ndof() const { return n; }
    double omega_max() const { return std::sqrt(omega_m2 + 4.0 * Omega_m2); }

    void force(const double* r, double* f) const {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t jp = (j + 1 == n) ? 0 : j + 1;
            std::size_t jm = (j == 0) ? n - 1 : j - 1;
            f[j] = -omega_m2 * r[j] - 2.0 * g * r[j] * r[j] * r[j] +
                   Omega_m2 * (r[jp] + r[jm] - 2.0 * r[j]);
        }
    }

    double potential(const double* r) const {
        double V = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t jp = (j + 1 == n) ? 0 : j + 1;
            double d = r[j] - r[jp], r2 = r[j] * r[j];
            V += 0.5 * (omega_m2 * r2 + g * r2 * r2 + Omega_m2 * d * d);
        }
        return V;
    }
};

// Full coupled cavity-matter chain in real space (order-2 photon stencil).
// The photon chain is stiff (zone-edge frequency ~ 2c/a); callers must let
// suggest_dt() tighten the step.  Coordinate layout: u[0..n) = x, u[n..2n) = r.
struct CoupledChain {
    double om0_2, omm_2, Omm_2, g, ph_nn, G, dse;
    std::size_t n;

    explicit CoupledChain(const ModelParams& p)
        : om0_2(p.omega_0 * p.omega_0),
          omm_2(p.omega_m * p.omega_m),
          Omm_2(p.Omega_m * p.Omega_m),
          g(p.g),
          ph_nn((p.c / p.a) * (p.c / p.a)),
          n(static_cast<std::size_t>(p.n_sites)) {
        auto ec = effective_couplings(p);
        G = ec.G_lm;
        dse = ec.d_se;
    }

    std::size_t ndof() const { return 2 * n; }
    double omega_max() const { return std::sqrt(om0_2 + 4.0 * ph_nn); }
    double suggest_dt() const { return 0.1 / omega_max(); }

    void force(const double* u, double* f) const {
        const double* x = u;
        const double* r = u + n;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t jp = (j + 1 == n) ? 0 : j + 1;
            std::size_t jm = (j == 0) ? n - 1 : j - 1;
            f[j] = -om0_2 * x[j] + ph_nn * (x[jp] + x[jm] - 2.0 * x[j]) - G * r[j];
            f[n + j] = -(omm_2 + 2.0 * dse) * r[j] - 2.0 * g * r[j] * r[j] * r[j] +
                       Omm_2 * (r[jp] + r[jm] - 2.0 * r[j]) - G * x[j];
        }
    }

    double potential(const double* u) const {
        const double* x = u;
        const double* r = u + n;
        double V = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t jp = (j + 1 == n) ? 0 : j + 1;
            double dx = x[j] - x[jp], dr = r[j] - r[jp], r2 = r[j] * r[j];
            V += 0.5 * (om0_2 * x[j] * x[j] + ph_nn * dx * dx);
            V += 0.5 * (omm_2 * r2 + g * r2 * r2 + Omm_2 * dr * dr);
            V += G * x[j] * r[j] + dse * r2;
        }
        return V;
    }
};

// One anharmonic site bilinearly coupled to discrete bath oscillators:
//   V = 1/2 w_loc^2 r^2 + 1/2 g r^4 + sum_b [1/2 w_b^2 x_b^2 - c_b x_b r].
// Integrating out the bath gives D^-1(z) = z^2 - w_loc^2 - sum c_b^2/(z^2-w_b^2),
// i.e. the discretized hybridization with no separate counterterm.
struct ImpuritySystem {
    double omega_loc2, g;
    std::vector<double> omega_b2, c_b;

    std::size_t ndof() const { return 1 + omega_b2.size(); }
    double omega_max() const {
        double m2 = omega_loc2;
        for (double w2 : omega_b2) m2 = std::max(m2, w2);
        return std::sqrt(m2);
    }

    void force(const double* u, double* f) const {
        double r = u[0];
        double fr = -omega_loc2 * r - 2.0 * g * r * r * r;
        for (std::size_t b = 0; b < omega_b2.size(); ++b) {
            fr += c_b[b] * u[1 + b];
            f[1 + b] = -omega_b2[b] * u[1 + b] + c_b[b] * r;
        }
        f[0] = fr;
    }

    double potential(const double* u) const {
        double r = u[0], r2 = r * r;
        double V = 0.5 * omega_loc2 * r2 + 0.5 * g * r2 * r2;
        for (std::size_t b = 0; b < omega_b2.size(); ++b)
            V += 0.5 * omega_b2[b] * u[1 + b] * u[1 + b] - c_b[b] * u[1 + b] * r;
        return V;
    }
};

// Single velocity-Verlet step; f must hold force(u) on entry and does on exit.
template <class System>
inline void nve_step(const System& sys, double dt, std::vector<double>& u,
                     std::vector<double>& v, std::vector<double>& f) {
    const std::size_t n = sys.ndof();
    for (std::size_t i = 0; i < n; ++i) v[i] += 0.5 * dt * f[i];
    for (std::size_t i = 0; i < n; ++i) u[i] += dt * v[i];
    sys.force(u.data(), f.data());
    for (std::size_t i = 0; i < n; ++i) v[i] += 0.5 * dt * f[i];
}

// BAOAB splitting of Langevin dynamics (B = half kick, A = half drift,
// O = Ornstein-Uhlenbeck velocity refresh).
template <class System>
inline void baoab_step(const System& sys, double dt, double friction, double kBT,
                       std::vector<double>& u, std::vector<double>& v,
                       std::vector<double>& f, RngStream& rng) {
    const std::size_t n = sys.ndof();
    const double c1 = std::exp(-friction * dt);
    const double c2 = std::sqrt((1.0 - c1 * c1) * kBT);
    for (std::size_t i = 0; i < n; ++i) v[i] += 0.5 * dt * f[i];
    for (std::size_t i = 0; i < n; ++i) u[i] += 0.5 * dt * v[i];
    for (std::size_t i = 0; i < n; ++i) v[i] = c1 * v[i] + c2 * rng.next_normal();
    for (std::size_t i = 0; i < n; ++i) u[i] += 0.5 * dt * v[i];
    sys.force(u.data(), f.data());
    for (std::size_t i = 0; i < n; ++i) v[i] += 0.5 * dt * f[i];
}

struct TrajectoryStats {
    double energy_start = 0.0, energy_end = 0.0;
    double drift_rel = 0.0;   // |E_end - E_start| / (kBT * ndof)
    bool drift_warning = false;
};

inline void check_dt(double dt, double omega_max) {
    if (dt * omega_max > 0.1)
        throw InstabilityError("MD: dt * Omega_max = " + std::to_string(dt * omega_max) +
                               " exceeds the stability bound 0.1 (Omega_max = " +
                               std::to_string(omega_max) + " a.u.)");
}

// One full trajectory: cold start, Langevin thermalization, NVE production.
// Recorder is called as recorder(frame_index, u, v) every stride-th step.
// Purpose codes for the RNG streams: 0 = initial velocities, 1 = thermostat.
template <class System, class Recorder>
inline TrajectoryStats run_trajectory(const System& sys, const MdOptions& opts, double kBT,
                                      std::uint32_t traj_id, Recorder&& recorder) {
    check_dt(opts.dt, sys.omega_max());
    const std::size_t n = sys.ndof();
    std::vector<double> u(n, 0.0), v(n), f(n);

    RngStream init_rng(opts.seed, traj_id, 0);
    const double sigma_v = std::sqrt(kBT);
    for (std::size_t i = 0; i < n; ++i) v[i] = sigma_v * init_rng.next_normal();

    sys.force(u.data(), f.data());
    RngStream thermo_rng(opts.seed, traj_id, 1);
    for (int s = 0; s < opts.n_equil; ++s)
        baoab_step(sys, opts.dt, opts.friction, kBT, u, v, f, thermo_rng);

    TrajectoryStats st;
    auto energy = [&] {
        double K = 0.0;
        for (double vi : v) K += 0.5 * vi * vi;
        return K + sys.potential(u.data());
    };
    st.energy_start = energy();
    for (int s = 0; s < opts.n_prod; ++s) {
        nve_step(sys, opts.dt, u, v, f);
        if (s % opts.stride == 0)
            recorder(static_cast<std::size_t>(s / opts.stride), u, v);
    }
    st.energy_end = energy();
    st.drift_rel = std::abs(st.energy_end - st.energy_start) / (kBT * static_cast<double>(n));
    st.drift_warning = st.drift_rel > 1e-4;
    return st;
}

}  // namespace vibpol
