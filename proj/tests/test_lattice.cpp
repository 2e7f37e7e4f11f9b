#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vibpol/lattice.hpp"
#include "vibpol/spectra.hpp"
#include "vibpol/units.hpp"

using namespace vibpol;

TEST_CASE("resonant polariton frequencies match the closed form with self-energy") {
    // at k = 0, omega_0 = omega_m: eigenvalues omega_m^2 (sqrt(1+eta^2) +- eta)^2
    ModelParams p = default_chain_params();
    for (double eta : {0.02, 0.05, 0.1}) {
        p.eta = eta;
        auto e = eig_sym(dynamical_matrix(p, 0.0));
        double root = std::sqrt(1.0 + eta * eta);
        CHECK(std::sqrt(e.val[0]) == Catch::Approx(p.omega_m * (root - eta)).epsilon(1e-12));
        CHECK(std::sqrt(e.val[1]) == Catch::Approx(p.omega_m * (root + eta)).epsilon(1e-12));
    }
}

TEST_CASE("harmonic Rabi splitting is exactly 2 eta omega_m at resonance") {
    ModelParams p = default_chain_params();
    p.eta = 0.1;
    double rabi = rabi_splitting_harmonic(p);
    CHECK(ha_to_mev(rabi) == Catch::Approx(88.0).margin(0.01));
    CHECK(rabi == Catch::Approx(2.0 * p.eta * p.omega_m).epsilon(1e-12));
    // the ratio rabi/eta is eta-independent
    for (double eta : {0.02, 0.04, 0.06, 0.08, 0.1}) {
        p.eta = eta;
        CHECK(rabi_splitting_harmonic(p) / eta ==
              Catch::Approx(2.0 * p.omega_m).epsilon(1e-12));
    }
}

TEST_CASE("light fractions at resonance split evenly up to the self-energy tilt") {
    ModelParams p = default_chain_params();
    p.eta = 0.1;
    auto basis = phonon_basis(p, display_path_bz(3, p.a));
    double lf0 = basis.light_fraction[0][0], lf1 = basis.light_fraction[0][1];
    CHECK(lf0 + lf1 == Catch::Approx(1.0).margin(1e-12));
    // the dipole self-energy detunes the matter level upward, so the lower
    // branch is slightly more photonic than 1/2
    CHECK(lf0 > 0.5);
    CHECK(lf0 < 0.6);
    CHECK(lf1 > 0.4);
    CHECK(lf1 < 0.5);
}

TEST_CASE("bands are even in k") {
    ModelParams p = default_chain_params();
    p.eta = 0.05;
    for (double k : {1e-5, 3e-4, 0.1, 0.4}) {
        auto ep = eig_sym(dynamical_matrix(p, k));
        auto em = eig_sym(dynamical_matrix(p, -k));
        CHECK(ep.val[0] == Catch::Approx(em.val[0]).epsilon(1e-13));
        CHECK(ep.val[1] == Catch::Approx(em.val[1]).epsilon(1e-13));
    }
}

TEST_CASE("band gap is smallest at the cavity-matter crossing") {
    // red-detuned cavity: the bare bands cross at k* = sqrt(omega_m^2-omega_0^2)/c
    ModelParams p = default_chain_params();
    p.omega_0 = mev_to_ha(400.0);
    p.eta = 0.05;
    const double kstar = std::sqrt(p.omega_m * p.omega_m - p.omega_0 * p.omega_0) / p.c;
    KGrid path = display_path_gamma(400, p.omega_0 / p.c, 30.0);
    double best_gap = 1e300, best_k = 0.0;
    for (double k : path.points) {
        auto e = eig_sym(dynamical_matrix(p, k));
        double gap = std::sqrt(e.val[1]) - std::sqrt(e.val[0]);
        if (gap < best_gap) {
            best_gap = gap;
            best_k = k;
        }
    }
    CHECK(std::abs(best_k - kstar) / kstar < 0.15);
    // strictly larger gap away from the crossing
    auto e0 = eig_sym(dynamical_matrix(p, 0.0));
    CHECK(std::sqrt(e0.val[1]) - std::sqrt(e0.val[0]) > best_gap);
    auto eb = eig_sym(dynamical_matrix(p, path.points.back()));
    CHECK(std::sqrt(eb.val[1]) - std::sqrt(eb.val[0]) > best_gap);
}

TEST_CASE("two-oscillator crosscheck equals the dynamical matrix bands") {
    ModelParams p = default_chain_params();
    p.eta = 0.08;
    for (double k : {0.0, 1e-4, 0.2}) {
        auto basis = phonon_basis(p, display_path_bz(2, p.a));
        (void)basis;
        auto e = eig_sym(dynamical_matrix(p, k));
        auto x = dipole_gauge_crosscheck(p, k);
        CHECK(x[0] == Catch::Approx(std::sqrt(e.val[0])).epsilon(1e-13));
        CHECK(x[1] == Catch::Approx(std::sqrt(e.val[1])).epsilon(1e-13));
    }
}

TEST_CASE("matter band endpoints") {
    ModelParams p = default_chain_params();
    CHECK(ha_to_mev(matter_band(p, 0.0)) == Catch::Approx(440.0).epsilon(1e-10));
    double edge = std::sqrt(p.omega_m * p.omega_m + 4.0 * p.Omega_m * p.Omega_m);
    CHECK(matter_band(p, pi / p.a) == Catch::Approx(edge).epsilon(1e-12));
    CHECK(ha_to_mev(edge) == Catch::Approx(615.3).margin(0.1));
}

TEST_CASE("harmonic GF satisfies its defining inverse") {
    ModelParams p = default_chain_params();
    p.eta = 0.1;
    KGrid grid = display_path_bz(4, p.a);
    auto omega = make_omega_grid(16, 3.0 * p.omega_m);
    double delta = mev_to_ha(1.0);
    MatrixGF gf = harmonic_gf(p, grid, omega, delta);
    for (std::size_t ik = 0; ik < grid.size(); ++ik) {
        Mat<2> d = dynamical_matrix(p, grid.points[ik]);
        for (std::size_t iw = 0; iw < omega.size(); ++iw) {
            cplx z(omega[iw], delta);
            CMat<2> m;
            m(0, 0) = z * z - d(0, 0);
            m(1, 1) = z * z - d(1, 1);
            m(0, 1) = -d(0, 1);
            m(1, 0) = -d(1, 0);
            CMat<2> g;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) g(a, b) = gf(ik, iw, a, b);
            auto id = cmatmul(m, g);
            CHECK(std::abs(id(0, 0) - cplx(1, 0)) < 1e-10);
            CHECK(std::abs(id(1, 1) - cplx(1, 0)) < 1e-10);
            CHECK(std::abs(id(0, 1)) < 1e-10);
            CHECK(std::abs(id(1, 0)) < 1e-10);
        }
    }
}

TEST_CASE("unphysical wavevector grids are rejected for BZ averages") {
    KGrid path = display_path_bz(8, 5.669);
    CHECK_THROWS_AS(path.require_uniform("test"), ConfigError);
    KGrid uni = uniform_bz_grid(8, 5.669);
    CHECK_NOTHROW(uni.require_uniform("test"));
    double wsum = 0.0;
    for (double w : uni.weights) wsum += w;
    CHECK(wsum == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(uni.points.size() == 8);
}
