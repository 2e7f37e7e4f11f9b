#pragma once

// Spectral functions and lineshape analysis: A(k,w) = -(1/pi) Tr Im D(k,w),
// peak/FWHM extraction (with a two-Lorentzian fit for overlapping polariton
// doublets), sum rules, and the Rabi splitting at the three levels of theory.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"
#include "kgrid.hpp"
#include "lattice.hpp"
#include "params.hpp"
#include "scp.hpp"
#include "units.hpp"
#include "vdmft.hpp"

namespace vibpol {

enum class SpectrumMethod { harmonic, scp, vdmft, md };

struct Peak {
    double position = 0.0;  // Ha
    double fwhm = 0.0;      // Ha
    double height = 0.0;
    bool fitted = false;    // true if from the two-Lorentzian deblend
};

struct FindPeaksOptions {
    double prominence_frac = 0.05;  // ignore maxima below this fraction of global max
    bool deblend_overlap = true;    // two-Lorentzian fit when peaks overlap at half height
};

struct SpectrumResult {
    KGrid kgrid;
    std::vector<double> omega_grid;
    int nc = 1;
    std::vector<double> A;        // trace, [ik*nw + iw]
    std::vector<double> A_coord;  // per-coordinate diagonals, [(ik*nw + iw)*nc + a]
    std::vector<std::vector<Peak>> peaks;  // per k, sorted by position
    SpectrumMethod method = SpectrumMethod::harmonic;

    std::size_t nw() const { return omega_grid.size(); }
    double at(std::size_t ik, std::size_t iw) const { return A[ik * nw() + iw]; }
    std::vector<double> slice(std::size_t ik) const {
        return {A.begin() + ik * nw(), A.begin() + (ik + 1) * nw()};
    }
};

namespace detail {

// Refine a grid maximum by a parabola through its three nearest points.
inline double parabolic_vertex(const std::vector<double>& w, const std::vector<double>& y,
                               std::size_t i) {
    if (i == 0 || i + 1 >= y.size()) return w[i];
    double d1 = y[i + 1] - y[i - 1], d2 = y[i + 1] - 2.0 * y[i] + y[i - 1];
    if (d2 >= 0.0) return w[i];
    double shift = -0.5 * d1 / d2;
    double dw = w[i + 1] - w[i];
    return w[i] + std::max(-1.0, std::min(1.0, shift)) * dw;
}

struct HalfCross {
    double lo = 0.0, hi = 0.0;
    bool clean_lo = false, clean_hi = false;  // crossed half height before next valley/peak
};

// Walk outward from maximum i to the half-height crossings.  The walk stops
// early (and flags the side as not clean) when the series turns back up by
// more than ripple_frac * y[i] off its running minimum: a neighboring line is
// blocking the descent.  Any neighbor tall enough to block a crossing must
// rise back above half height, i.e. by >= 50% of y[i], so a tolerance well
// below that cannot hide a real line; it only lets the walk step over
// finite-statistics ripple that would otherwise truncate the width.
inline HalfCross half_crossings(const std::vector<double>& w, const std::vector<double>& y,
                                std::size_t i, double ripple_frac = 0.0) {
    HalfCross hc;
    const double half = 0.5 * y[i];
    const double ripple = ripple_frac * y[i];

    std::size_t l = i, lmin = i;
    bool blocked = false;
    while (l > 0 && y[l] > half) {
        if (y[l - 1] > y[lmin] + ripple) {
            blocked = true;
            break;
        }
        if (y[l - 1] < y[lmin]) lmin = l - 1;
        --l;
    }
    if (!blocked && y[l] <= half && l + 1 <= i) {
        double t = (half - y[l]) / std::max(y[l + 1] - y[l], 1e-300);
        hc.lo = w[l] + t * (w[l + 1] - w[l]);
        hc.clean_lo = true;
    } else {
        hc.lo = w[blocked ? lmin : l];
    }

    std::size_t r = i, rmin = i;
    blocked = false;
    while (r + 1 < y.size() && y[r] > half) {
        if (y[r + 1] > y[rmin] + ripple) {
            blocked = true;
            break;
        }
        if (y[r + 1] < y[rmin]) rmin = r + 1;
        ++r;
    }
    if (!blocked && y[r] <= half && r >= 1) {
        double t = (half - y[r]) / std::max(y[r - 1] - y[r], 1e-300);
        hc.hi = w[r] - t * (w[r] - w[r - 1]);
        hc.clean_hi = true;
    } else {
        hc.hi = w[blocked ? rmin : r];
    }
    return hc;
}

// Least-squares fit of a sum of two Lorentzians h/(1 + ((w-c)/g)^2) by
// damped Gauss-Newton with a numerical Jacobian.  Returns false on failure.
inline bool fit_two_lorentzians(const std::vector<double>& w, const std::vector<double>& y,
                                double par[6]) {
    auto model = [](double x, const double* q, int which) {
        double u = (x - q[1 + 3 * which]) / q[2 + 3 * which];
        return q[3 * which] / (1.0 + u * u);
    };
    auto residual_norm = [&](const double* q) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            double r = y[i] - model(w[i], q, 0) - model(w[i], q, 1);
            s += r * r;
        }
        return s;
    };
    double lambda = 1e-3, cost = residual_norm(par);
    for (int iter = 0; iter < 200; ++iter) {
        double JTJ[36] = {0}, JTr[6] = {0};
        for (std::size_t i = 0; i < w.size(); ++i) {
            double r = y[i] - model(w[i], par, 0) - model(w[i], par, 1);
            double grad[6];
            for (int q = 0; q < 6; ++q) {
                double save = par[q];
                double h = std::max(1e-8, 1e-6 * std::abs(save));
                par[q] = save + h;
                double rp = y[i] - model(w[i], par, 0) - model(w[i], par, 1);
                par[q] = save;
                grad[q] = -(rp - r) / h;
            }
            for (int a = 0; a < 6; ++a) {
                JTr[a] += grad[a] * r;
                for (int b = 0; b < 6; ++b) JTJ[6 * a + b] += grad[a] * grad[b];
            }
        }
        // solve (JTJ + lambda diag) step = JTr
        double A[36], rhs[6], step[6];
        for (int a = 0; a < 36; ++a) A[a] = JTJ[a];
        for (int a = 0; a < 6; ++a) {
            A[6 * a + a] += lambda * std::max(JTJ[6 * a + a], 1e-300);
            rhs[a] = JTr[a];
        }
        // gaussian elimination (6x6)
        int piv[6] = {0, 1, 2, 3, 4, 5};
        bool ok = true;
        for (int c = 0; c < 6 && ok; ++c) {
            int pm = c;
            for (int rr = c + 1; rr < 6; ++rr)
                if (std::abs(A[6 * piv[rr] + c]) > std::abs(A[6 * piv[pm] + c])) pm = rr;
            std::swap(piv[c], piv[pm]);
            double d = A[6 * piv[c] + c];
            if (std::abs(d) < 1e-300) { ok = false; break; }
            for (int rr = c + 1; rr < 6; ++rr) {
                double m = A[6 * piv[rr] + c] / d;
                for (int cc = c; cc < 6; ++cc) A[6 * piv[rr] + cc] -= m * A[6 * piv[c] + cc];
                rhs[piv[rr]] -= m * rhs[piv[c]];
            }
        }
        if (!ok) return false;
        for (int c = 6; c-- > 0;) {
            double s = rhs[piv[c]];
            for (int cc = c + 1; cc < 6; ++cc) s -= A[6 * piv[c] + cc] * step[cc];
            step[c] = s / A[6 * piv[c] + c];
        }
        double trial[6];
        for (int q = 0; q < 6; ++q) trial[q] = par[q] + step[q];
        trial[2] = std::abs(trial[2]);
        trial[5] = std::abs(trial[5]);
        double tc = residual_norm(trial);
        if (tc < cost) {
            for (int q = 0; q < 6; ++q) par[q] = trial[q];
            if (cost - tc < 1e-12 * (cost + 1e-300)) return true;
            cost = tc;
            lambda = std::max(lambda * 0.5, 1e-12);
        } else {
            lambda *= 4.0;
            if (lambda > 1e8) return cost < 1e30;
        }
    }
    return true;
}

}  // namespace detail

// Local maxima above the prominence threshold, with FWHM from half-height
// crossings; an overlapping pair (no clean crossing between them) is
// deblended by a two-Lorentzian least-squares fit.
inline std::vector<Peak> find_peaks(const std::vector<double>& omega_grid,
                                    const std::vector<double>& A,
                                    const FindPeaksOptions& opt = {}) {
    const std::size_t n = A.size();
    if (n != omega_grid.size()) throw ConfigError("find_peaks: grid mismatch");
    double amax = 0.0;
    for (double v : A) amax = std::max(amax, v);
    if (amax <= 0.0) return {};
    const double floor_h = opt.prominence_frac * amax;

    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (A[i] > floor_h && A[i] >= A[i - 1] && A[i] > A[i + 1]) maxima.push_back(i);

    // Reported widths use a 20% ripple tolerance so the half-height walk
    // steps over finite-statistics wiggle on the flanks instead of stopping
    // at the first micro-uptick; a genuine blocking neighbor still stops it.
    auto plain_peak = [&](std::size_t i) {
        auto hc = detail::half_crossings(omega_grid, A, i, 0.2);
        Peak p;
        p.position = detail::parabolic_vertex(omega_grid, A, i);
        p.height = A[i];
        p.fwhm = hc.hi - hc.lo;
        p.fitted = false;
        return p;
    };

    std::vector<Peak> peaks;
    std::size_t mi = 0;
    while (mi < maxima.size()) {
        // A maximum whose rightward descent turns around while still above
        // half height has no clean valley separating it from its neighbor;
        // chain such maxima into one overlap cluster and treat it as a unit.
        std::size_t mj = mi;
        while (mj + 1 < maxima.size() &&
               !detail::half_crossings(omega_grid, A, maxima[mj]).clean_hi)
            ++mj;

        if (mj == mi || !opt.deblend_overlap) {
            for (std::size_t mk = mi; mk <= mj; ++mk) peaks.push_back(plain_peak(maxima[mk]));
            mi = mj + 1;
            continue;
        }

        // Deblend the whole cluster with one two-Lorentzian fit seeded at its
        // two tallest maxima.  Fitting per overlapping pair instead revisits
        // the same base-to-base window and emits duplicate components.
        std::size_t ia = maxima[mi], ib = maxima[mi];
        for (std::size_t mk = mi + 1; mk <= mj; ++mk) {
            std::size_t gi = maxima[mk];
            if (A[gi] > A[ia]) {
                ib = ia;
                ia = gi;
            } else if (ib == ia || A[gi] > A[ib]) {
                ib = gi;
            }
        }
        if (omega_grid[ia] > omega_grid[ib]) std::swap(ia, ib);
        auto hca = detail::half_crossings(omega_grid, A, ia);
        auto hcb = detail::half_crossings(omega_grid, A, ib);
        // fit window: the cluster's bases, but never past the deepest point
        // toward a neighboring cluster -- otherwise adjacent clusters fit the
        // same stretch and report the same components twice
        std::size_t lbound = 0, rbound = n - 1;
        if (mi > 0) {
            lbound = maxima[mi - 1];
            for (std::size_t q = lbound; q <= maxima[mi]; ++q)
                if (A[q] < A[lbound]) lbound = q;
        }
        if (mj + 1 < maxima.size()) {
            rbound = maxima[mj];
            for (std::size_t q = rbound; q <= maxima[mj + 1]; ++q)
                if (A[q] < A[rbound]) rbound = q;
        }
        std::size_t lo = maxima[mi], hi = maxima[mj];
        while (lo > lbound && A[lo - 1] > floor_h * 0.5) --lo;
        while (hi < rbound && A[hi + 1] > floor_h * 0.5) ++hi;
        std::vector<double> wfit(omega_grid.begin() + lo, omega_grid.begin() + hi + 1);
        std::vector<double> yfit(A.begin() + lo, A.begin() + hi + 1);
        double g1 = std::max(0.5 * (hca.hi - hca.lo) * 0.5, omega_grid[1] - omega_grid[0]);
        double g2 = std::max(0.5 * (hcb.hi - hcb.lo) * 0.5, omega_grid[1] - omega_grid[0]);
        double par[6] = {A[ia], omega_grid[ia], g1, A[ib], omega_grid[ib], g2};
        bool ok = detail::fit_two_lorentzians(wfit, yfit, par) && par[0] > 0 && par[3] > 0 &&
                  par[1] > wfit.front() && par[1] < wfit.back() &&
                  par[4] > wfit.front() && par[4] < wfit.back();
        if (ok) {
            double f1 = 2.0 * std::abs(par[2]), f2 = 2.0 * std::abs(par[5]);
            // Two Lorentzians only produce separate humps when their spacing
            // exceeds (f1+f2)/(2 sqrt 3); below that the data cannot support
            // two components and the cluster is one line plus ripple.
            if (std::abs(par[4] - par[1]) >= 0.2887 * (f1 + f2)) {
                peaks.push_back(Peak{par[1], f1, par[0], true});
                peaks.push_back(Peak{par[4], f2, par[3], true});
            } else {
                peaks.push_back(plain_peak(A[ia] >= A[ib] ? ia : ib));
            }
        } else {
            for (std::size_t mk = mi; mk <= mj; ++mk) peaks.push_back(plain_peak(maxima[mk]));
        }
        mi = mj + 1;
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& x, const Peak& y) { return x.position < y.position; });
    return peaks;
}

inline SpectrumResult spectral_function(const MatrixGF& gf, SpectrumMethod method,
                                        const FindPeaksOptions& opt = {}) {
    SpectrumResult sp;
    sp.kgrid = gf.kgrid;
    sp.omega_grid = gf.omega_grid;
    sp.nc = gf.nc;
    sp.method = method;
    sp.A.assign(gf.nk() * gf.nw(), 0.0);
    sp.A_coord.assign(gf.nk() * gf.nw() * gf.nc, 0.0);
    for (std::size_t ik = 0; ik < gf.nk(); ++ik)
        for (std::size_t iw = 0; iw < gf.nw(); ++iw) {
            double tr = 0.0;
            for (int a = 0; a < gf.nc; ++a) {
                double Aa = -(1.0 / pi) * gf(ik, iw, a, a).imag();
                sp.A_coord[(ik * gf.nw() + iw) * gf.nc + a] = Aa;
                tr += Aa;
            }
            sp.A[ik * gf.nw() + iw] = tr;
        }
    sp.peaks.resize(gf.nk());
    for (std::size_t ik = 0; ik < gf.nk(); ++ik) sp.peaks[ik] = find_peaks(sp.omega_grid, sp.slice(ik), opt);
    return sp;
}

// Integral sum rules for one k and coordinate: the classical harmonic GF obeys
// area = 1/(2 Omega) and first moment = 1/2 (equipartition), anharmonic
// spectra keep the first-moment rule.
inline double spectral_area(const SpectrumResult& sp, std::size_t ik, int coord) {
    std::vector<double> y(sp.nw());
    for (std::size_t iw = 0; iw < sp.nw(); ++iw)
        y[iw] = sp.A_coord[(ik * sp.nw() + iw) * sp.nc + coord];
    return trapz(sp.omega_grid, y);
}

inline double spectral_first_moment(const SpectrumResult& sp, std::size_t ik, int coord) {
    std::vector<double> y(sp.nw());
    for (std::size_t iw = 0; iw < sp.nw(); ++iw)
        y[iw] = sp.omega_grid[iw] * sp.A_coord[(ik * sp.nw() + iw) * sp.nc + coord];
    return trapz(sp.omega_grid, y);
}

// Lifetime read off a linewidth, inverse-bandwidth convention: tau = 1/dnu
// with dnu the FWHM as an ordinary frequency, i.e. tau = 2 pi / FWHM_angular.
// (For a Lorentzian this is 2 pi x the intensity decay time.)
inline double lifetime_fs_from_fwhm(double fwhm_ha) {
    if (!(fwhm_ha > 0)) return 0.0;
    return au_to_fs(2.0 * pi / fwhm_ha);
}

// Rabi splitting at Gamma.  Harmonic/SCP levels: eigenfrequency difference.
inline double rabi_splitting_harmonic(const ModelParams& p) {
    auto e = eig_sym(dynamical_matrix(p, 0.0));
    return std::sqrt(e.val[1]) - std::sqrt(e.val[0]);
}

inline double rabi_splitting_scp(const ScpResult& scp_coupled) {
    // Gamma is index of k = 0 in the uniform grid
    for (std::size_t ik = 0; ik < scp_coupled.kgrid.size(); ++ik)
        if (scp_coupled.kgrid.points[ik] == 0.0)
            return scp_coupled.freq(ik, 1) - scp_coupled.freq(ik, 0);
    throw ConfigError("rabi_splitting_scp: uniform grid lacks k = 0");
}

// VDMFT level: distance between the two most prominent peaks of A(Gamma, w);
// zero when fewer than two peaks are resolved.
// Distance between the two dominant lines of a Gamma-point polariton trace.
// Lines are ranked by integrated weight (height x width): each polariton
// branch carries an O(1) share of the trace area at any coupling, while
// finite-statistics ripple carries almost none, so ranking by bare height
// can pair a branch with a ripple spike riding on it.  A second line below
// 10% of the leading weight means the doublet is not resolved: return 0.
inline double rabi_splitting_vdmft(const std::vector<double>& omega_grid,
                                   const std::vector<double>& A_gamma,
                                   const FindPeaksOptions& opt = {}) {
    auto peaks = find_peaks(omega_grid, A_gamma, opt);
    if (peaks.size() < 2) return 0.0;
    std::vector<Peak> byw = peaks;
    std::sort(byw.begin(), byw.end(), [](const Peak& x, const Peak& y) {
        return x.height * x.fwhm > y.height * y.fwhm;
    });
    if (byw[1].height * byw[1].fwhm < 0.1 * byw[0].height * byw[0].fwhm) return 0.0;
    return std::abs(byw[0].position - byw[1].position);
}

struct RabiScan {
    std::vector<double> etas;
    std::string tuning;            // "bare", "scp" or "vdmft"
    double omega_target = 0.0;     // the cavity frequency used (Ha)
    std::vector<double> harmonic, scp, vdmft;  // Rabi splittings (Ha)
};

// Scan the Rabi splitting over eta at fixed cavity tuning.  The matter-chain
// self-energy is eta-independent (the cavity does not feed back on the chain),
// so one converged sigma serves the whole scan.  The default peak floor is
// lower than the find_peaks default because a detuned polariton trace pairs a
// delta-thin photon line with a matter branch 20-30x shorter; 5% would drop
// the matter branch entirely.
inline RabiScan rabi_scan(const ModelParams& matter, const SelfEnergy& sigma,
                          const std::vector<double>& etas, const std::string& tuning,
                          const std::vector<double>& omega_grid, double delta,
                          const FindPeaksOptions& peak_opt = {0.01, true}) {
    RabiScan scan;
    scan.etas = etas;
    scan.tuning = tuning;

    // measure the tuning target from this run's own solvers
    const KGrid grid = uniform_bz_grid(matter.n_sites, matter.a);
    if (tuning == "bare") {
        scan.omega_target = matter.omega_m;
    } else if (tuning == "scp") {
        ScpResult s = scp_solve(matter, grid);
        scan.omega_target = std::sqrt(matter.omega_m * matter.omega_m + s.static_shift);
    } else if (tuning == "vdmft") {
        std::vector<double> A(omega_grid.size());
        double d = matter.omega_m * matter.omega_m;
        for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
            cplx z(omega_grid[iw], delta);
            cplx s = sigma.values.empty() ? cplx(0, 0) : sigma.values[iw];
            A[iw] = -(1.0 / pi) * (1.0 / (z * z - d - s)).imag();
        }
        auto peaks = find_peaks(omega_grid, A, peak_opt);
        if (peaks.empty()) throw ConvergenceError("rabi_scan: no VDMFT peak at Gamma");
        std::size_t best = 0;
        for (std::size_t i = 1; i < peaks.size(); ++i)
            if (peaks[i].height > peaks[best].height) best = i;
        scan.omega_target = peaks[best].position;
    } else {
        throw ConfigError("rabi_scan: unknown tuning '" + tuning + "'");
    }

    for (double eta : etas) {
        ModelParams p = matter;
        p.eta = eta;
        p.omega_0 = scan.omega_target;
        p.validate();
        scan.harmonic.push_back(rabi_splitting_harmonic(p));
        ScpResult sc = scp_solve(p, grid, 1e-10, 0.5, 500, /*coupled=*/true);
        scan.scp.push_back(rabi_splitting_scp(sc));
        KGrid gamma_only;
        gamma_only.kind = GridKind::display_path;
        gamma_only.points = {0.0};
        gamma_only.weights = {0.0};
        MatrixGF gf = assemble_polariton_gf(p, sigma, gamma_only, omega_grid, delta);
        std::vector<double> A(omega_grid.size());
        for (std::size_t iw = 0; iw < omega_grid.size(); ++iw)
            A[iw] = -(1.0 / pi) * (gf(0, iw, 0, 0).imag() + gf(0, iw, 1, 1).imag());
        scan.vdmft.push_back(rabi_splitting_vdmft(omega_grid, A, peak_opt));
    }
    return scan;
}

}  // namespace vibpol
