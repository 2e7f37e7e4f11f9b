#pragma once

// Momentum-resolved velocity-displacement correlation estimator:
//
//   C_ab(k,t) = < udot_a(k,t) u_b(-k,0) >,   u(k) = N^{-1/2} sum_j e^{-ikaj} u_j
//
// averaged over all time origins (FFT cross-correlation) and trajectories,
// then one-sided-Fourier transformed into the classical GF
//
//   D_ab(k,w) = (1/kBT) int_0^inf dt e^{iwt} C_ab(k,t).
//
// The exponential window e^{-t/tau} with tau = 1/delta makes this the GF
// evaluated at w + i*delta, directly comparable to the broadened lattice GF.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

#include "fft.hpp"
#include "gf.hpp"
#include "kgrid.hpp"
#include "md.hpp"
#include "smallmat.hpp"
#include "units.hpp"

namespace vibpol {

struct CorrelationEstimate {
    std::vector<double> time_grid;   // lag times (a.u.)
    KGrid kgrid;                     // probed wavevectors
    int nc = 1;
    std::vector<cplx> C;             // [(ik*nt + it)*nc*nc + a*nc + b]
    std::vector<double> se;          // per-entry standard error (same layout)
    int n_traj = 0;
    double kBT = 0.0;
    double dt_sample = 0.0;

    std::size_t nt() const { return time_grid.size(); }
    const cplx& at(std::size_t ik, std::size_t it, int a, int b) const {
        return C[(ik * nt() + it) * nc * nc + a * nc + b];
    }
};

// Accumulates lag sums for a fixed set of commensurate wavevectors
// k_m = 2 pi m / (N a).  "block_offsets" maps cell coordinate a of site j to
// flat dof index block_offsets[a] + j, covering the matter chain (one block),
// the coupled chain (two blocks) and the impurity (N = 1, one block).
class CorrelationAccumulator {
  public:
    CorrelationAccumulator(std::size_t n_sites, std::vector<std::size_t> block_offsets,
                           std::vector<int> k_indices, std::size_t n_frames, double a_lat)
        : n_(n_sites), offs_(std::move(block_offsets)), nframes_(n_frames) {
        nc_ = static_cast<int>(offs_.size());
        kgrid_.kind = GridKind::display_path;
        for (int m : k_indices) {
            kgrid_.points.push_back(2.0 * pi * m / (static_cast<double>(n_) * a_lat));
            kgrid_.weights.push_back(0.0);
            std::vector<cplx> ph(n_);
            const double arg = -2.0 * pi * m / static_cast<double>(n_);
            const double norm = 1.0 / std::sqrt(static_cast<double>(n_));
            for (std::size_t j = 0; j < n_; ++j)
                ph[j] = norm * cplx(std::cos(arg * j), std::sin(arg * j));
            phases_.push_back(std::move(ph));
        }
        const std::size_t nk = phases_.size(), ncc = static_cast<std::size_t>(nc_) * nc_;
        series_u_.assign(nk * nc_, {});  // [ik*nc + a]
        series_v_.assign(nk * nc_, {});
        for (auto& s : series_u_) s.assign(nframes_, cplx(0, 0));
        for (auto& s : series_v_) s.assign(nframes_, cplx(0, 0));
        sum_.assign(nk * nframes_ * ncc, cplx(0, 0));
        sum_abs2_.assign(nk * nframes_ * ncc, 0.0);
        mean_count_.assign(nframes_, 0.0);
    }

    std::size_t nk() const { return phases_.size(); }
    const KGrid& kgrid() const { return kgrid_; }

    // Record one frame of a trajectory (called with full dof vectors).
    void record(std::size_t frame, const std::vector<double>& u, const std::vector<double>& v) {
        for (std::size_t ik = 0; ik < phases_.size(); ++ik) {
            const auto& ph = phases_[ik];
            for (int a = 0; a < nc_; ++a) {
                const double* ua = u.data() + offs_[a];
                const double* va = v.data() + offs_[a];
                cplx su(0, 0), sv(0, 0);
                for (std::size_t j = 0; j < n_; ++j) {
                    su += ph[j] * ua[j];
                    sv += ph[j] * va[j];
                }
                series_u_[ik * nc_ + a][frame] = su;
                series_v_[ik * nc_ + a][frame] = sv;
            }
        }
    }

    // Fold the finished trajectory into the running sums.
    void end_trajectory() {
        const std::size_t ncc = static_cast<std::size_t>(nc_) * nc_;
        for (std::size_t ik = 0; ik < phases_.size(); ++ik)
            for (int a = 0; a < nc_; ++a)
                for (int b = 0; b < nc_; ++b) {
                    auto lags = lag_sums(series_v_[ik * nc_ + a], series_u_[ik * nc_ + b]);
                    for (std::size_t t = 0; t < nframes_; ++t) {
                        cplx ct = lags[t] / static_cast<double>(nframes_ - t);
                        std::size_t idx = (ik * nframes_ + t) * ncc + a * nc_ + b;
                        sum_[idx] += ct;
                        sum_abs2_[idx] += std::norm(ct);
                    }
                }
        ++n_traj_;
    }

    void merge(const CorrelationAccumulator& other) {
        for (std::size_t i = 0; i < sum_.size(); ++i) {
            sum_[i] += other.sum_[i];
            sum_abs2_[i] += other.sum_abs2_[i];
        }
        n_traj_ += other.n_traj_;
    }

    CorrelationEstimate finalize(double dt_sample, double kBT) const {
        CorrelationEstimate est;
        est.kgrid = kgrid_;
        est.nc = nc_;
        est.n_traj = n_traj_;
        est.kBT = kBT;
        est.dt_sample = dt_sample;
        est.time_grid.resize(nframes_);
        for (std::size_t t = 0; t < nframes_; ++t) est.time_grid[t] = dt_sample * t;
        est.C.resize(sum_.size());
        est.se.resize(sum_.size());
        const double n = static_cast<double>(n_traj_ > 0 ? n_traj_ : 1);
        for (std::size_t i = 0; i < sum_.size(); ++i) {
            est.C[i] = sum_[i] / n;
            double var = sum_abs2_[i] / n - std::norm(est.C[i]);
            est.se[i] = std::sqrt(std::max(0.0, var) / n);
        }
        return est;
    }

  private:
    std::size_t n_;
    std::vector<std::size_t> offs_;
    int nc_ = 1;
    std::size_t nframes_;
    KGrid kgrid_;
    std::vector<std::vector<cplx>> phases_;
    std::vector<std::vector<cplx>> series_u_, series_v_;  // per (ik, a)
    std::vector<cplx> sum_;
    std::vector<double> sum_abs2_;
    std::vector<double> mean_count_;
    int n_traj_ = 0;
};

// Run an ensemble of trajectories and accumulate correlations.  Trajectories
// are dispatched to worker threads in contiguous blocks; each worker owns an
// accumulator and partials are merged in worker order, so results are
// deterministic for a fixed (seed, n_traj, threads) triple.
template <class System>
inline CorrelationEstimate run_correlation_ensemble(
    const System& sys, const MdOptions& opts, double kBT, std::size_t n_sites,
    std::vector<std::size_t> block_offsets, std::vector<int> k_indices, double a_lat,
    int threads = 1, std::vector<TrajectoryStats>* stats_out = nullptr) {
    if (threads < 1) threads = 1;
    if (threads > opts.n_traj) threads = opts.n_traj;
    std::vector<CorrelationAccumulator> acc;
    acc.reserve(threads);
    for (int w = 0; w < threads; ++w)
        acc.emplace_back(n_sites, block_offsets, k_indices, opts.n_frames(), a_lat);
    std::vector<TrajectoryStats> stats(opts.n_traj);

    auto work = [&](int w, int t_begin, int t_end) {
        for (int t = t_begin; t < t_end; ++t) {
            stats[t] = run_trajectory(
                sys, opts, kBT, static_cast<std::uint32_t>(t),
                [&](std::size_t frame, const std::vector<double>& u,
                    const std::vector<double>& v) { acc[w].record(frame, u, v); });
            acc[w].end_trajectory();
        }
    };

    if (threads == 1) {
        work(0, 0, opts.n_traj);
    } else {
        std::vector<std::thread> pool;
        int chunk = (opts.n_traj + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            int b = w * chunk, e = std::min(opts.n_traj, b + chunk);
            if (b >= e) break;
            pool.emplace_back(work, w, b, e);
        }
        for (auto& th : pool) th.join();
    }
    for (int w = 1; w < static_cast<int>(acc.size()); ++w) acc[0].merge(acc[w]);
    if (stats_out) *stats_out = std::move(stats);
    return acc[0].finalize(opts.dt * opts.stride, kBT);
}

// One-sided windowed Fourier transform of the correlation into a MatrixGF.
// Uses lags t < nt/2 (beyond that too few origins remain); trapezoid rule.
inline MatrixGF gf_from_correlation(const CorrelationEstimate& est,
                                    const std::vector<double>& omega_grid, double delta,
                                    WindowKind window = WindowKind::exponential,
                                    double tau_damp = 0.0) {
    MatrixGF gf;
    gf.kgrid = est.kgrid;
    gf.omega_grid = omega_grid;
    gf.nc = est.nc;
    gf.delta = delta;
    gf.basis = GFBasis::site_coordinates;
    gf.allocate();

    const std::size_t tmax = est.nt() / 2;
    const double dt = est.dt_sample;
    std::vector<double> win(tmax, 1.0);
    if (window == WindowKind::exponential) {
        double tau = tau_damp > 0.0 ? tau_damp : 1.0 / delta;
        for (std::size_t t = 0; t < tmax; ++t) win[t] = std::exp(-est.time_grid[t] / tau);
    } else if (window == WindowKind::hann) {
        for (std::size_t t = 0; t < tmax; ++t) {
            double c = std::cos(0.5 * pi * t / static_cast<double>(tmax));
            win[t] = c * c;
        }
    }

    const int ncc = gf.nc * gf.nc;
    std::vector<cplx> wc(tmax);
    for (std::size_t ik = 0; ik < est.kgrid.size(); ++ik)
        for (int ab = 0; ab < ncc; ++ab) {
            for (std::size_t t = 0; t < tmax; ++t) {
                double trap = (t == 0 || t + 1 == tmax) ? 0.5 : 1.0;
                wc[t] = est.C[(ik * est.nt() + t) * ncc + ab] * (win[t] * trap);
            }
            for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
                const double w = omega_grid[iw];
                const cplx rot(std::cos(w * dt), std::sin(w * dt));
                cplx phase(1.0, 0.0), s(0.0, 0.0);
                for (std::size_t t = 0; t < tmax; ++t) {
                    s += wc[t] * phase;
                    phase *= rot;
                }
                gf.values[(ik * gf.nw() + iw) * ncc + ab] = s * dt / est.kBT;
            }
        }
    return gf;
}

}  // namespace vibpol
