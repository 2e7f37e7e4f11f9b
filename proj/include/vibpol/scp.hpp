#pragma once

// Classical self-consistent phonon (SCP) theory.  The quartic force constant
// of this model couples only the matter components,
//
//   Phi(k,l; k',l'') = (12 g / N) c_m,l(k) c_m,l'(-k) c_m,l''(k') c_m,l'''(-k'),
//
// so the SCP field collapses to the scalar mean square displacement
// S = <r^2> = (1/N) sum_{k,mu} |c_m,mu(k)|^2 kBT / Omega_mu(k)^2 and the
// effective force-constant matrix is V(k) = D_bare(k) + 6 g S P_matter.
// The loop mixes Omega^2 linearly to damp oscillatory fixed-point updates.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kgrid.hpp"
#include "lattice.hpp"
#include "params.hpp"
#include "smallmat.hpp"

namespace vibpol {

// The eigenbasis quartic force constant above; band/wavevector indices refer
// to a PhononBasis on the uniform grid (N = basis.nk()).  Eigenvectors are
// real for this model, so Phi is real.
inline double quartic_force_constant(const PhononBasis& basis, double g, std::size_t ik,
                                     int l, int lp, std::size_t ikp, int lpp, int lppp) {
    const double n = static_cast<double>(basis.nk());
    // matter components; +-k give identical (real) eigenvectors on this lattice
    double cm1 = basis.vecs[ik](1, l), cm2 = basis.vecs[ik](1, lp);
    double cm3 = basis.vecs[ikp](1, lpp), cm4 = basis.vecs[ikp](1, lppp);
    return 12.0 * g / n * cm1 * cm2 * cm3 * cm4;
}

struct ScpResult {
    KGrid kgrid;
    int nc = 1;                        // 1 = matter chain, 2 = coupled model
    std::vector<double> freqs;         // [ik*nc + band], ascending per k (Ha)
    std::vector<Mat<2>> rotations;     // harmonic -> SCP eigenvector rotation (nc = 2)
    std::vector<double> residuals;     // per-iteration max |dOmega^2| / omega_m^2
    double T = 0.0;
    double mean_square_disp = 0.0;     // converged S = <r^2>
    double static_shift = 0.0;         // 6 g S (Ha^2): matter force-constant shift
    bool converged = false;

    double freq(std::size_t ik, int band) const { return freqs[ik * nc + band]; }
};

// Closed-form single-site SCP frequency^2: Omega^2 = omega^2 + 6 g kBT/Omega^2.
inline double scp_single_site_freq2(double omega2, double g, double kBT) {
    return 0.5 * (omega2 + std::sqrt(omega2 * omega2 + 24.0 * g * kBT));
}

namespace detail {

// One SCP pass at fixed S for the coupled model; returns eigenpairs of V(k).
inline EigSym<2> scp_matrix_eig(const ModelParams& p, double k, double shift) {
    Mat<2> v = dynamical_matrix(p, k);
    v(1, 1) += shift;
    return eig_sym(v);
}

}  // namespace detail

// Self-consistent solve on a uniform BZ grid.  Loop variable is Omega^2 with
// linear mixing; tolerance is on max |Delta Omega^2| / omega_m^2.
inline ScpResult scp_solve(const ModelParams& p, const KGrid& grid, double tol = 1e-10,
                           double mixing = 0.5, int max_iter = 500, bool coupled = false) {
    grid.require_uniform("scp_solve");
    if (!(tol > 0)) throw ConfigError("scp_solve: tol must be > 0");
    if (!(mixing > 0 && mixing <= 1)) throw ConfigError("scp_solve: mixing must be in (0,1]");
    const double kBT = p.kBT();
    const std::size_t nk = grid.size();
    const int nc = coupled ? 2 : 1;

    ScpResult res;
    res.kgrid = grid;
    res.nc = nc;
    res.T = p.T;

    // state: Omega^2 per (k, band) plus matter weights |c_m|^2 per (k, band)
    std::vector<double> om2(nk * nc), wm(nk * nc);
    for (std::size_t ik = 0; ik < nk; ++ik) {
        if (nc == 1) {
            om2[ik] = dynamical_matrix_matter(p, grid.points[ik]);
            wm[ik] = 1.0;
        } else {
            auto e = detail::scp_matrix_eig(p, grid.points[ik], 0.0);
            for (int l = 0; l < 2; ++l) {
                om2[ik * 2 + l] = e.val[l];
                wm[ik * 2 + l] = e.vec(1, l) * e.vec(1, l);
            }
        }
    }

    double S = 0.0;
    const double omm2 = p.omega_m * p.omega_m;
    for (int it = 0; it < max_iter; ++it) {
        S = 0.0;
        for (std::size_t i = 0; i < om2.size(); ++i) {
            if (om2[i] <= 0.0)
                throw InstabilityError("scp_solve: non-positive Omega^2 during iteration");
            S += wm[i] * kBT / om2[i];
        }
        S /= static_cast<double>(nk);
        const double shift = 6.0 * p.g * S;

        double resid = 0.0;
        for (std::size_t ik = 0; ik < nk; ++ik) {
            if (nc == 1) {
                double target = dynamical_matrix_matter(p, grid.points[ik]) + shift;
                double next = (1.0 - mixing) * om2[ik] + mixing * target;
                resid = std::max(resid, std::abs(next - om2[ik]) / omm2);
                om2[ik] = next;
            } else {
                auto e = detail::scp_matrix_eig(p, grid.points[ik], shift);
                for (int l = 0; l < 2; ++l) {
                    double next = (1.0 - mixing) * om2[ik * 2 + l] + mixing * e.val[l];
                    resid = std::max(resid, std::abs(next - om2[ik * 2 + l]) / omm2);
                    om2[ik * 2 + l] = next;
                    wm[ik * 2 + l] = e.vec(1, l) * e.vec(1, l);
                }
            }
        }
        res.residuals.push_back(resid);
        if (resid < tol) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged) {
        std::ostringstream os;
        os << "scp_solve: no convergence after " << max_iter << " iterations; residuals:";
        for (double r : res.residuals) os << " " << r;
        throw ConvergenceError(os.str());
    }

    res.mean_square_disp = S;
    res.static_shift = 6.0 * p.g * S;
    res.freqs.resize(nk * nc);
    res.rotations.resize(nc == 2 ? nk : 0);
    for (std::size_t ik = 0; ik < nk; ++ik) {
        if (nc == 1) {
            res.freqs[ik] = std::sqrt(dynamical_matrix_matter(p, grid.points[ik]) +
                                      res.static_shift);
        } else {
            auto eh = eig_sym(dynamical_matrix(p, grid.points[ik]));
            auto es = detail::scp_matrix_eig(p, grid.points[ik], res.static_shift);
            for (int l = 0; l < 2; ++l) {
                if (es.val[l] <= 0.0)
                    throw InstabilityError("scp_solve: negative renormalized eigenvalue at k");
                res.freqs[ik * 2 + l] = std::sqrt(es.val[l]);
            }
            // rotation from harmonic to SCP eigenvectors: U = C_h^T C_s
            Mat<2> ct;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) ct(i, j) = eh.vec(j, i);
            res.rotations[ik] = matmul(ct, es.vec);
        }
    }
    return res;
}

// Evaluate the renormalized bands at arbitrary display wavevectors.  The
// self-consistent field S is a BZ average, so off-grid evaluation is exact.
struct ScpBand {
    double k;
    std::vector<double> freqs;          // nc entries, ascending
    std::vector<double> light_fraction; // nc entries (0 for matter-only)
};

inline std::vector<ScpBand> scp_dispersion(const ModelParams& p, const ScpResult& res,
                                           const KGrid& display) {
    if (!res.converged) throw ConvergenceError("scp_dispersion: unconverged ScpResult");
    std::vector<ScpBand> out;
    out.reserve(display.size());
    for (double k : display.points) {
        ScpBand b;
        b.k = k;
        if (res.nc == 1) {
            b.freqs = {std::sqrt(dynamical_matrix_matter(p, k) + res.static_shift)};
            b.light_fraction = {0.0};
        } else {
            auto e = detail::scp_matrix_eig(p, k, res.static_shift);
            b.freqs = {std::sqrt(e.val[0]), std::sqrt(e.val[1])};
            b.light_fraction = {e.vec(0, 0) * e.vec(0, 0), e.vec(0, 1) * e.vec(0, 1)};
        }
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace vibpol
