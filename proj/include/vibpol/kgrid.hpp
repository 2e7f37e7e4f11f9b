#pragma once

// Wavevector grids over the 1D Brillouin zone (-pi/a, pi/a].
//
// Two kinds: uniform-BZ grids (equal weights, used for BZ averages and for
// supercell-commensurate MD), and display paths (weights carry no meaning).
// The polariton anticrossing lives at |k| ~ omega/c ~ 1e-3 of the BZ, so
// display paths near Gamma are geometric.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "units.hpp"

namespace vibpol {

enum class GridKind { uniform_bz, display_path };

struct KGrid {
    std::vector<double> points;   // inverse bohr, inside (-pi/a, pi/a]
    std::vector<double> weights;  // sum to 1 for uniform grids
    GridKind kind = GridKind::uniform_bz;

    std::size_t size() const { return points.size(); }

    void require_uniform(const char* who) const {
        if (kind != GridKind::uniform_bz)
            throw ConfigError(std::string(who) + ": BZ average requires a uniform-BZ grid");
    }
};

// k_m = 2 pi m / (N a) for m = -N/2+1 .. N/2: the grid commensurate with an
// N-cell supercell.  Index m=0 is Gamma; m=N/2 (even N) is the zone edge.
inline KGrid uniform_bz_grid(int n, double a) {
    if (n < 2) throw ConfigError("uniform_bz_grid: need n >= 2");
    KGrid g;
    g.kind = GridKind::uniform_bz;
    g.points.reserve(n);
    g.weights.assign(n, 1.0 / n);
    for (int m = -(n - 1) / 2; m <= n / 2; ++m)
        g.points.push_back(2.0 * pi * m / (n * a));
    return g;
}

// Uniform display path across the half BZ [0, pi/a] (dispersion figures).
inline KGrid display_path_bz(int n, double a) {
    if (n < 2) throw ConfigError("display_path_bz: need n >= 2");
    KGrid g;
    g.kind = GridKind::display_path;
    g.weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) g.points.push_back(pi / a * i / (n - 1.0));
    return g;
}

// Near-Gamma display path: geometric spacing from k_min to k_max = span*omega/c
// (default span 20), plus the k=0 point.  This resolves the polariton window.
inline KGrid display_path_gamma(int n, double omega_over_c, double span = 20.0) {
    if (n < 3) throw ConfigError("display_path_gamma: need n >= 3");
    KGrid g;
    g.kind = GridKind::display_path;
    g.weights.assign(n, 0.0);
    double kmax = span * omega_over_c, kmin = kmax * 1e-3;
    g.points.push_back(0.0);
    double ratio = std::pow(kmax / kmin, 1.0 / (n - 2.0));
    double k = kmin;
    for (int i = 1; i < n; ++i, k *= ratio) g.points.push_back(k);
    g.points.back() = kmax;
    return g;
}

}  // namespace vibpol
