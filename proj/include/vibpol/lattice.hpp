#pragma once

// Bloch dynamical matrix of the two-atom (cavity + matter) unit cell, its
// diagonalization over k-grids, and the harmonic lattice Green's function.
// The dynamical matrix is real symmetric at every k: the photon stencil and
// matter band enter through cosines, and the on-site coupling G_lm is real
// and k-independent.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gf.hpp"
#include "kgrid.hpp"
#include "params.hpp"
#include "smallmat.hpp"
#include "stencil.hpp"

namespace vibpol {

// Coordinate order in the 2x2 blocks: index 0 = cavity (x), 1 = matter (r).
inline Mat<2> dynamical_matrix(const ModelParams& p, double k) {
    const auto [G, dse] = effective_couplings(p);
    double sm = std::sin(0.5 * k * p.a);
    Mat<2> d;
    d(0, 0) = photon_band2(p, k);
    d(1, 1) = p.omega_m * p.omega_m + 4.0 * p.Omega_m * p.Omega_m * sm * sm + 2.0 * dse;
    d(0, 1) = d(1, 0) = G;
    return d;
}

// Matter-chain scalar dynamical "matrix" (isolated chain, no cavity).
inline double dynamical_matrix_matter(const ModelParams& p, double k) {
    double sm = std::sin(0.5 * k * p.a);
    return p.omega_m * p.omega_m + 4.0 * p.Omega_m * p.Omega_m * sm * sm;
}

struct PhononBasis {
    KGrid kgrid;
    std::vector<Vec<2>> freqs;           // ascending per k (Ha)
    std::vector<Mat<2>> vecs;            // columns = eigenvectors
    std::vector<Vec<2>> light_fraction;  // |c_cavity|^2 per band

    std::size_t nk() const { return kgrid.size(); }
};

inline PhononBasis phonon_basis(const ModelParams& p, const KGrid& grid) {
    PhononBasis b;
    b.kgrid = grid;
    b.freqs.reserve(grid.size());
    b.vecs.reserve(grid.size());
    b.light_fraction.reserve(grid.size());
    for (double k : grid.points) {
        auto e = eig_sym(dynamical_matrix(p, k));
        for (int l = 0; l < 2; ++l)
            if (e.val[l] <= 0.0)
                throw InstabilityError("phonon_basis: non-positive eigenvalue at k = " +
                                       std::to_string(k) + " (band " + std::to_string(l) + ")");
        Vec<2> f{std::sqrt(e.val[0]), std::sqrt(e.val[1])};
        Vec<2> lf{e.vec(0, 0) * e.vec(0, 0), e.vec(0, 1) * e.vec(0, 1)};
        b.freqs.push_back(f);
        b.vecs.push_back(e.vec);
        b.light_fraction.push_back(lf);
    }
    return b;
}

// Per-k cross-check of the real-space model against the two-oscillator
// k-space picture it was derived from: diagonalize {photon stencil band,
// matter band + DSE; off-diagonal G_lm}.  By construction this is the same
// matrix as dynamical_matrix; the function documents the transform.
inline Vec<2> dipole_gauge_crosscheck(const ModelParams& p, double k) {
    const auto [G, dse] = effective_couplings(p);
    double sm = std::sin(0.5 * k * p.a);
    Mat<2> d;
    d(0, 0) = photon_band2(p, k);
    d(1, 1) = p.omega_m * p.omega_m + 4.0 * p.Omega_m * p.Omega_m * sm * sm + 2.0 * dse;
    d(0, 1) = d(1, 0) = G;
    auto e = eig_sym(d);
    return {std::sqrt(e.val[0]), std::sqrt(e.val[1])};
}

// Harmonic lattice GF in site coordinates: D(k,w) = [(w+id)^2 1 - Dyn(k)]^-1.
inline MatrixGF harmonic_gf(const ModelParams& p, const KGrid& grid,
                            const std::vector<double>& omega_grid, double delta) {
    if (!(delta > 0)) throw ConfigError("harmonic_gf: delta must be > 0");
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
            cplx z = cplx(omega_grid[iw], delta);
            CMat<2> m;
            m(0, 0) = z * z - d(0, 0);
            m(1, 1) = z * z - d(1, 1);
            m(0, 1) = -d(0, 1);
            m(1, 0) = -d(1, 0);
            CMat<2> inv = cinverse(m);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) gf(ik, iw, a, b) = inv(a, b);
        }
    }
    return gf;
}

// Matter-only harmonic GF (1x1 blocks).
inline MatrixGF harmonic_gf_matter(const ModelParams& p, const KGrid& grid,
                                   const std::vector<double>& omega_grid, double delta) {
    if (!(delta > 0)) throw ConfigError("harmonic_gf_matter: delta must be > 0");
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
            cplx z = cplx(omega_grid[iw], delta);
            gf(ik, iw, 0, 0) = 1.0 / (z * z - d);
        }
    }
    return gf;
}

}  // namespace vibpol
