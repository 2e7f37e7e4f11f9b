#pragma once

// Vibrational dynamical mean-field theory for the anharmonic chain.
//
// Bookkeeping convention: the local self-energy Sigma(w) is carried in
// frequency-squared units and referenced to the BARE dynamical matrix; the
// impurity solves the bare anharmonic on-site potential (1/2 w_loc^2 r^2 +
// 1/2 g r^4) in the discretized bath.  SCP enters only as the initial guess
// Sigma^0 = 6 g <r^2> (a real constant), which removes any double counting.
//
// All GFs are evaluated at w + i*delta; the impurity estimator uses the
// exponential window with tau = 1/delta, so lattice and impurity quantities
// live on exactly the same complex-frequency line.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bath.hpp"
#include "correlation.hpp"
#include "errors.hpp"
#include "gf.hpp"
#include "kgrid.hpp"
#include "lattice.hpp"
#include "md.hpp"
#include "params.hpp"
#include "savgol.hpp"
#include "scp.hpp"

namespace vibpol {

struct SelfEnergy {
    std::vector<double> omega_grid;
    std::vector<cplx> values;        // frequency-squared units, matter coordinate
    int iteration = 0;
    int smooth_halfwidth = 0;
    int smooth_order = 0;
    double omega_loc2_ref = 0.0;     // the bare on-site reference it was extracted against
    double noise_floor = 0.0;        // propagated estimator noise scale (Ha^2)
    double clipped_max = 0.0;        // largest positive Im removed by the causality clip

    std::size_t size() const { return omega_grid.size(); }
};

// Matter-chain lattice GF: D(k,w) = 1/[(w+id)^2 - w^2(k) - Sigma(w)].
inline MatrixGF lattice_gf_matter(const ModelParams& p, const KGrid& grid,
                                  const SelfEnergy& sigma,
                                  const std::vector<double>& omega_grid, double delta) {
    if (!sigma.values.empty() && sigma.values.size() != omega_grid.size())
        throw ConfigError("lattice_gf_matter: sigma grid mismatch");
    MatrixGF gf;
    gf.kgrid = grid;
    gf.omega_grid = omega_grid;
    gf.nc = 1;
    gf.delta = delta;
    gf.basis = GFBasis::site_coordinates;
    gf.allocate();
    for (std::size_t ik = 0; ik < grid.size(); ++ik) {
        double d = dynamical_matrix_matter(p, grid.points[ik]);
        for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
            cplx z(omega_grid[iw], delta);
            cplx s = sigma.values.empty() ? cplx(0, 0) : sigma.values[iw];
            gf(ik, iw, 0, 0) = 1.0 / (z * z - d - s);
        }
    }
    return gf;
}

// Coupled 2x2 lattice GF with the matter-projected self-energy:
// D^-1 = (w+id)^2 1 - D_bare(k) - P Sigma P.
inline MatrixGF lattice_gf_coupled(const ModelParams& p, const KGrid& grid,
                                   const SelfEnergy& sigma,
                                   const std::vector<double>& omega_grid, double delta) {
    if (!sigma.values.empty() && sigma.values.size() != omega_grid.size())
        throw ConfigError("lattice_gf_coupled: sigma grid mismatch");
    MatrixGF gf;
    gf.kgrid = grid;
    gf.omega_grid = omega_grid;
    gf.nc = 2;
    gf.delta = delta;
    gf.basis = GFBasis::site_coordinates;
    gf.allocate();
    for (std::size_t ik = 0; ik < grid.size(); ++ik) {
        Mat<2> d = dynamical_matrix(p, grid.points[ik]);
        for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
            cplx z(omega_grid[iw], delta);
            cplx s = sigma.values.empty() ? cplx(0, 0) : sigma.values[iw];
            CMat<2> m;
            m(0, 0) = z * z - d(0, 0);
            m(1, 1) = z * z - d(1, 1) - s;
            m(0, 1) = -d(0, 1);
            m(1, 0) = -d(1, 0);
            CMat<2> inv = cinverse(m);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) gf(ik, iw, a, b) = inv(a, b);
        }
    }
    return gf;
}

// BZ average of the matter-matter block (matter coordinate = last index).
inline LocalFn local_gf(const MatrixGF& gf) {
    gf.kgrid.require_uniform("local_gf");
    LocalFn loc;
    loc.omega_grid = gf.omega_grid;
    loc.values.assign(gf.nw(), cplx(0, 0));
    const int m = gf.nc - 1;
    for (std::size_t ik = 0; ik < gf.nk(); ++ik) {
        double w = gf.kgrid.weights[ik];
        for (std::size_t iw = 0; iw < gf.nw(); ++iw) loc.values[iw] += w * gf(ik, iw, m, m);
    }
    return loc;
}

struct ImpurityResult {
    LocalFn d_imp;
    double noise_floor = 0.0;           // rough |dD| propagated from lag standard errors
    int n_drift_warnings = 0;
    CorrelationEstimate correlation;    // kept for diagnostics
};

// MD solve of the (site + discrete bath) impurity; returns D_imp(w) on the
// requested grid, windowed consistently with the lattice broadening delta.
inline ImpurityResult solve_impurity(const ModelParams& p, const BathModel& bath,
                                     const MdOptions& opts,
                                     const std::vector<double>& omega_grid, double delta,
                                     int threads = 1) {
    ImpuritySystem sys;
    sys.omega_loc2 = local_matter_freq2(p);
    sys.g = p.g;
    sys.omega_b2.reserve(bath.size());
    for (double wb : bath.omega_b) sys.omega_b2.push_back(wb * wb);
    sys.c_b = bath.c_b;

    // The tail bins of the discretized bath can sit well above the band edge
    // (they absorb the Lorentzian leakage of the broadened J), so the chain
    // time step may violate the stability bound here.  Subdivide it by an
    // integer factor, scaling counts so the sampling grid, window length and
    // equilibration time are unchanged.
    MdOptions eff = opts;
    int sub = static_cast<int>(std::ceil(opts.dt * sys.omega_max() / 0.1 - 1e-12));
    if (sub > 1) {
        eff.dt = opts.dt / sub;
        eff.n_equil = opts.n_equil * sub;
        eff.n_prod = opts.n_prod * sub;
        eff.stride = opts.stride * sub;
    }

    std::vector<TrajectoryStats> stats;
    CorrelationEstimate est = run_correlation_ensemble(sys, eff, p.kBT(), 1, {0}, {0},
                                                       p.a, threads, &stats);
    MatrixGF gf = gf_from_correlation(est, omega_grid, delta, opts.window, opts.tau_damp);

    ImpurityResult out;
    out.d_imp.omega_grid = omega_grid;
    out.d_imp.values.resize(omega_grid.size());
    for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) out.d_imp.values[iw] = gf(0, iw, 0, 0);

    // white-noise propagation of the lag standard errors through the window FT
    double s2 = 0.0;
    const std::size_t tmax = est.nt() / 2;
    double tau = opts.tau_damp > 0 ? opts.tau_damp : 1.0 / delta;
    for (std::size_t t = 0; t < tmax; ++t) {
        double w = opts.window == WindowKind::exponential ? std::exp(-est.time_grid[t] / tau) : 1.0;
        double se = est.se[t];
        s2 += se * se * w * w;
    }
    out.noise_floor = std::sqrt(s2) * est.dt_sample / est.kBT;
    for (const auto& st : stats) out.n_drift_warnings += st.drift_warning ? 1 : 0;
    out.correlation = std::move(est);
    return out;
}

// Sigma(w) = (w+id)^2 - w_loc^2 - Delta_fit(w) - 1/D_imp(w).  Delta_fit is the
// discretized bath actually simulated, so the harmonic limit cancels exactly.
// Points where |D_imp| collapses are masked and linearly interpolated.
inline SelfEnergy extract_self_energy(const LocalFn& d_imp, const BathModel& bath,
                                      const ModelParams& p, double delta,
                                      int smooth_halfwidth = 10, int smooth_order = 3,
                                      double noise_floor = 0.0) {
    SelfEnergy sig;
    sig.omega_grid = d_imp.omega_grid;
    sig.omega_loc2_ref = local_matter_freq2(p);
    sig.smooth_halfwidth = smooth_halfwidth;
    sig.smooth_order = smooth_order;
    sig.noise_floor = noise_floor;
    const std::size_t n = d_imp.size();

    double dmax = 0.0;
    for (const auto& v : d_imp.values) dmax = std::max(dmax, std::abs(v));
    const double mask_below = 1e-3 * dmax;

    std::vector<double> re(n), im(n);
    std::vector<bool> masked(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d_imp.values[i]) < mask_below) {
            masked[i] = true;
            continue;
        }
        cplx z(d_imp.omega_grid[i], delta);
        cplx s = z * z - sig.omega_loc2_ref - delta_fit_eval(bath, d_imp.omega_grid[i], delta) -
                 1.0 / d_imp.values[i];
        re[i] = s.real();
        im[i] = s.imag();
    }
    // fill masked runs by linear interpolation between valid neighbors
    auto fill = [&](std::vector<double>& y) {
        std::size_t i = 0;
        while (i < n) {
            if (!masked[i]) { ++i; continue; }
            std::size_t j = i;
            while (j < n && masked[j]) ++j;
            double y0 = (i > 0) ? y[i - 1] : (j < n ? y[j] : 0.0);
            double y1 = (j < n) ? y[j] : y0;
            for (std::size_t t = i; t < j; ++t) {
                double frac = (j > i) ? (t - i + 1.0) / (j - i + 1.0) : 0.0;
                y[t] = y0 + frac * (y1 - y0);
            }
            i = j;
        }
    };
    fill(re);
    fill(im);

    if (smooth_halfwidth > 0) {
        re = savgol_smooth(re, smooth_halfwidth, smooth_order);
        im = savgol_smooth(im, smooth_halfwidth, smooth_order);
    }
    sig.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (im[i] > 0.0) {
            sig.clipped_max = std::max(sig.clipped_max, im[i]);
            im[i] = 0.0;
        }
        sig.values[i] = cplx(re[i], im[i]);
    }
    return sig;
}

struct VdmftOptions {
    std::size_t n_omega = 4096;
    double omega_max = 0.0;        // 0 -> 3 * omega_m
    double delta = 1.0 / 27211.386;  // 1 meV broadening
    int n_bath = 300;
    double mixing = 0.5;
    int max_iter = 8;
    double tol_A = 0.05;           // relative L1 distance of successive spectra at probes
    double bath_recon_tol = 0.5;
    int smooth_halfwidth = 10;
    int smooth_order = 3;
    int threads = 1;
    std::vector<int> probe_k;      // supercell indices m; empty -> {0, N/2}
    MdOptions md;                  // impurity MD protocol
};

struct VdmftIterLog {
    int iteration = 0;
    double dist_A = 0.0;          // max over probes of rel. L1 spectral change
    double max_dsigma = 0.0;      // max |Sigma_it - Sigma_{it-1}| (Ha^2)
    double bath_recon_error = 0.0;
    double sigma_noise_floor = 0.0;
    double sigma_clipped = 0.0;
    int drift_warnings = 0;
    double impurity_seconds = 0.0;
};

struct VdmftResult {
    SelfEnergy sigma;
    MatrixGF lattice;              // matter-chain GF on the uniform grid
    LocalFn d_loc, d_imp;          // final iterates (self-consistency diagnostics)
    std::vector<VdmftIterLog> log;
    bool converged = false;
    int n_iterations = 0;
    double scp_static_shift = 0.0; // Sigma^0 initialization constant (Ha^2)
};

namespace detail {

inline std::vector<double> probe_spectrum(const ModelParams& p, double k,
                                          const SelfEnergy& sigma,
                                          const std::vector<double>& omega_grid,
                                          double delta) {
    std::vector<double> A(omega_grid.size());
    double d = dynamical_matrix_matter(p, k);
    for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
        cplx z(omega_grid[iw], delta);
        cplx s = sigma.values.empty() ? cplx(0, 0) : sigma.values[iw];
        A[iw] = -(1.0 / pi) * (1.0 / (z * z - d - s)).imag();
    }
    return A;
}

}  // namespace detail

// The self-consistency loop for the isolated matter chain.  Non-convergence
// returns the best iterate with converged = false (the CLI turns that into
// exit code 2); hard failures (bath reconstruction) still throw.
inline VdmftResult vdmft_loop(const ModelParams& p, const VdmftOptions& opt) {
    const double omega_max = opt.omega_max > 0 ? opt.omega_max : 3.0 * p.omega_m;
    const auto omega_grid = make_omega_grid(opt.n_omega, omega_max);
    const KGrid grid = uniform_bz_grid(p.n_sites, p.a);
    const double omega_loc2 = local_matter_freq2(p);

    std::vector<int> probes = opt.probe_k;
    if (probes.empty()) probes = {0, p.n_sites / 2};
    std::vector<double> probe_ks;
    for (int m : probes) probe_ks.push_back(2.0 * pi * m / (p.n_sites * p.a));

    VdmftResult res;
    ScpResult scp = scp_solve(p, grid);
    res.scp_static_shift = scp.static_shift;

    SelfEnergy sigma;
    sigma.omega_grid = omega_grid;
    sigma.values.assign(omega_grid.size(), cplx(scp.static_shift, 0.0));
    sigma.omega_loc2_ref = omega_loc2;

    std::vector<std::vector<double>> A_prev;
    for (double k : probe_ks)
        A_prev.push_back(detail::probe_spectrum(p, k, sigma, omega_grid, opt.delta));

    LocalFn d_loc, d_imp;
    for (int it = 1; it <= opt.max_iter; ++it) {
        MatrixGF gf = lattice_gf_matter(p, grid, sigma, omega_grid, opt.delta);
        d_loc = local_gf(gf);
        Hybridization hyb =
            hybridization_update(d_loc, sigma.values, omega_loc2, opt.delta);
        BathModel bath = discretize_bath(hyb, opt.n_bath, opt.delta, opt.bath_recon_tol);

        MdOptions md = opt.md;
        // decorrelate iterations: each gets its own seed offset
        md.seed = opt.md.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(it);
        auto t0 = std::chrono::steady_clock::now();
        ImpurityResult imp = solve_impurity(p, bath, md, omega_grid, opt.delta, opt.threads);
        auto t1 = std::chrono::steady_clock::now();
        d_imp = imp.d_imp;

        SelfEnergy snew = extract_self_energy(imp.d_imp, bath, p, opt.delta,
                                              opt.smooth_halfwidth, opt.smooth_order,
                                              imp.noise_floor);

        VdmftIterLog lg;
        lg.iteration = it;
        lg.bath_recon_error = bath.recon_error;
        lg.sigma_noise_floor = imp.noise_floor;
        lg.sigma_clipped = snew.clipped_max;
        lg.drift_warnings = imp.n_drift_warnings;
        lg.impurity_seconds = std::chrono::duration<double>(t1 - t0).count();

        for (std::size_t i = 0; i < sigma.values.size(); ++i) {
            cplx mixed = (1.0 - opt.mixing) * sigma.values[i] + opt.mixing * snew.values[i];
            lg.max_dsigma = std::max(lg.max_dsigma, std::abs(mixed - sigma.values[i]));
            sigma.values[i] = mixed;
        }
        // re-enforce causality after mixing (both parents satisfy it anyway)
        for (auto& v : sigma.values)
            if (v.imag() > 0.0) v = cplx(v.real(), 0.0);
        sigma.iteration = it;
        sigma.noise_floor = imp.noise_floor;
        sigma.clipped_max = snew.clipped_max;
        sigma.smooth_halfwidth = snew.smooth_halfwidth;
        sigma.smooth_order = snew.smooth_order;

        double dist = 0.0;
        std::vector<std::vector<double>> A_now;
        for (std::size_t ip = 0; ip < probe_ks.size(); ++ip) {
            A_now.push_back(
                detail::probe_spectrum(p, probe_ks[ip], sigma, omega_grid, opt.delta));
            double num = 0.0, den = 0.0;
            for (std::size_t iw = 1; iw < omega_grid.size(); ++iw) {
                double dw = omega_grid[iw] - omega_grid[iw - 1];
                num += 0.5 * dw * (std::abs(A_now[ip][iw] - A_prev[ip][iw]) +
                                   std::abs(A_now[ip][iw - 1] - A_prev[ip][iw - 1]));
                den += 0.5 * dw * (std::abs(A_prev[ip][iw]) + std::abs(A_prev[ip][iw - 1]));
            }
            dist = std::max(dist, den > 0 ? num / den : 0.0);
        }
        lg.dist_A = dist;
        res.log.push_back(lg);
        A_prev = std::move(A_now);
        res.n_iterations = it;
        if (dist < opt.tol_A) {
            res.converged = true;
            break;
        }
    }

    res.sigma = sigma;
    res.lattice = lattice_gf_matter(p, grid, sigma, omega_grid, opt.delta);
    res.d_loc = std::move(d_loc);
    res.d_imp = std::move(d_imp);
    return res;
}

// Coupled polariton GF from the matter-chain self-energy (the cavity chain is
// harmonic and the coupling weak, so the matter Sigma is reused unchanged).
inline MatrixGF assemble_polariton_gf(const ModelParams& p, const SelfEnergy& sigma,
                                      const KGrid& display,
                                      const std::vector<double>& omega_grid, double delta) {
    if (!sigma.values.empty() &&
        (sigma.omega_grid.size() != omega_grid.size() ||
         sigma.omega_grid.front() != omega_grid.front() ||
         sigma.omega_grid.back() != omega_grid.back()))
        throw ConfigError("assemble_polariton_gf: sigma and output omega grids differ");
    return lattice_gf_coupled(p, display, sigma, omega_grid, delta);
}

}  // namespace vibpol
