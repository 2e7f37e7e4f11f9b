#pragma once

// Momentum- and frequency-resolved retarded phonon Green's function on a
// uniform omega grid, stored as nc x nc complex blocks per (k, omega).
// nc = 1 for the matter chain, 2 for the coupled cavity-matter model.
// Convention: D(k,omega) = [(omega + i delta)^2 1 - Dyn(k) - Sigma]^-1, so
// -Im D >= 0 for omega > 0 and A = -(1/pi) Tr Im D is a spectral density.

#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "kgrid.hpp"
#include "smallmat.hpp"

namespace vibpol {

enum class GFBasis { site_coordinates, phonon_bands };

struct MatrixGF {
    KGrid kgrid;
    std::vector<double> omega_grid;  // uniform, starts at 0 (Ha)
    int nc = 1;                      // coordinates per cell
    double delta = 0.0;              // broadening (Ha)
    GFBasis basis = GFBasis::site_coordinates;
    std::vector<cplx> values;        // [(ik*nw + iw)*nc*nc + a*nc + b]

    std::size_t nk() const { return kgrid.size(); }
    std::size_t nw() const { return omega_grid.size(); }

    cplx& operator()(std::size_t ik, std::size_t iw, int a, int b) {
        return values[(ik * nw() + iw) * nc * nc + a * nc + b];
    }
    const cplx& operator()(std::size_t ik, std::size_t iw, int a, int b) const {
        return values[(ik * nw() + iw) * nc * nc + a * nc + b];
    }

    void allocate() { values.assign(nk() * nw() * nc * nc, cplx(0.0, 0.0)); }

    void check_grids(const MatrixGF& other, const char* who) const {
        if (omega_grid.size() != other.omega_grid.size() ||
            (nw() && (omega_grid.front() != other.omega_grid.front() ||
                      omega_grid.back() != other.omega_grid.back())))
            throw ConfigError(std::string(who) + ": omega grids do not match");
    }
};

inline std::vector<double> make_omega_grid(std::size_t n, double omega_max) {
    if (n < 2) throw ConfigError("make_omega_grid: need n >= 2");
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = omega_max * i / (n - 1.0);
    return w;
}

// Local complex function of frequency (self-energy, hybridization, local GF).
struct LocalFn {
    std::vector<double> omega_grid;
    std::vector<cplx> values;

    std::size_t size() const { return omega_grid.size(); }
};

// Trapezoid integral of f(omega) over the grid.
inline double trapz(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

}  // namespace vibpol
