#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "vibpol/bath.hpp"
#include "vibpol/params.hpp"
#include "vibpol/units.hpp"

using namespace vibpol;

namespace {

// Closed-form local GF of the harmonic matter chain,
// D_loc(w) = [sqrt(u - v) sqrt(u + v)]^-1 with u = z^2 - w_m^2 - 2 W_m^2, v = 2 W_m^2.
LocalFn chain_local_gf(const ModelParams& p, const std::vector<double>& omega, double delta) {
    LocalFn loc;
    loc.omega_grid = omega;
    loc.values.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        cplx z(omega[i], delta);
        cplx u = z * z - p.omega_m * p.omega_m - 2.0 * p.Omega_m * p.Omega_m;
        cplx v = 2.0 * p.Omega_m * p.Omega_m;
        loc.values[i] = 1.0 / (std::sqrt(u - v) * std::sqrt(u + v));
    }
    return loc;
}

struct ChainCase {
    ModelParams p = default_chain_params();
    double delta;
    double omega_loc2 = 0.0;
    LocalFn d_loc;
    Hybridization h;

    // The discrete bath reproduces the continuum only on scales coarser than
    // the bin spacing, so each test picks a broadening delta that resolves (or
    // deliberately fails to resolve) the spacing it cares about.
    explicit ChainCase(double delta_mev) : delta(mev_to_ha(delta_mev)) {
        auto omega = make_omega_grid(16384, 3.0 * p.omega_m);
        omega_loc2 = local_matter_freq2(p);
        d_loc = chain_local_gf(p, omega, delta);
        h = hybridization_update(d_loc, {}, omega_loc2, delta);
    }
};

}  // namespace

TEST_CASE("chain hybridization is causal and discretizes cleanly") {
    ChainCase c(1.0);  // production broadening: resolves the 300-bin spacing
    CHECK(c.h.causal);

    BathModel bath = discretize_bath(c.h, 320, c.delta);
    REQUIRE(bath.size() >= 300);
    CHECK(bath.recon_error < 0.15);
    CHECK(std::is_sorted(bath.omega_b.begin(), bath.omega_b.end()));
    for (double wb : bath.omega_b) {
        CHECK(wb > 0.0);
        CHECK(wb < 3.0 * c.p.omega_m);
    }

    // total coupling strength: sum_b c_b^2 = (2/pi) int w J dw -> 2 W_m^4 for the chain
    double sum_c2 = 0.0;
    for (double cb : bath.c_b) sum_c2 += cb * cb;
    double v = 2.0 * c.p.Omega_m * c.p.Omega_m;
    CHECK(sum_c2 == Catch::Approx(0.5 * v * v).epsilon(0.05));

    // Double-broadening identity: J is read off at height delta, so in the
    // continuum limit the discrete bath evaluated at +i delta reproduces the
    // exact hybridization at +i 2delta (Poisson extension of a Herglotz
    // function).  The residual is the binning comb and decays ~ 1/n_bath.
    auto omega = c.d_loc.omega_grid;
    LocalFn d2 = chain_local_gf(c.p, omega, 2.0 * c.delta);
    auto fit_err = [&](const BathModel& b) {
        double num2 = 0.0, den2 = 0.0;
        for (std::size_t i = 0; i < omega.size(); ++i) {
            cplx z(omega[i], 2.0 * c.delta);
            cplx exact = z * z - c.omega_loc2 - 1.0 / d2.values[i];
            cplx fit = delta_fit_eval(b, omega[i], c.delta);
            num2 += std::norm(fit - exact);
            den2 += std::norm(exact);
        }
        return std::sqrt(num2 / den2);
    };
    double e320 = fit_err(bath);
    double e1280 = fit_err(discretize_bath(c.h, 1280, c.delta));
    INFO("double-broadening L2 error: " << e320 << " (320 modes), " << e1280 << " (1280)");
    CHECK(e320 < 0.05);
    CHECK(e1280 < 0.02);
    CHECK(e1280 < 0.6 * e320);
}

TEST_CASE("refining the bath does not degrade the reconstruction") {
    // broadening coarser than even the 20-bin spacing, so every fit is in the
    // smooth regime and the error must shrink toward the delta-limited floor
    ChainCase c(10.0);
    const double never = 1e9;  // measuring, not guarding
    double e20 = discretize_bath(c.h, 20, c.delta, never).recon_error;
    double e80 = discretize_bath(c.h, 80, c.delta, never).recon_error;
    double e320 = discretize_bath(c.h, 320, c.delta, never).recon_error;
    INFO("recon errors: " << e20 << " " << e80 << " " << e320);
    CHECK(e80 <= 1.05 * e20);
    CHECK(e320 <= 1.05 * e80);
    CHECK(e320 < e20);
    CHECK(e320 < 0.2);
}

TEST_CASE("a single mode cannot represent a continuous band") {
    ChainCase c(0.5);
    CHECK_THROWS_AS(discretize_bath(c.h, 1, c.delta), ConvergenceError);
}

TEST_CASE("acausal input is flagged and clipped") {
    ChainCase c(1.0);
    LocalFn bad = c.d_loc;
    for (auto& v : bad.values) v = std::conj(v);  // advanced instead of retarded
    Hybridization h = hybridization_update(bad, {}, c.omega_loc2, c.delta);
    CHECK_FALSE(h.causal);
    CHECK(h.clipped_max > 0.0);
    for (const auto& v : h.values) CHECK(v.imag() <= 0.0);

    // a generous noise tolerance accepts the same input (clip still applied)
    Hybridization lax = hybridization_update(bad, {}, c.omega_loc2, c.delta, 1e30);
    CHECK(lax.causal);
    for (const auto& v : lax.values) CHECK(v.imag() <= 0.0);
}

TEST_CASE("purely real hybridization yields an empty bath") {
    Hybridization h;
    h.omega_grid = make_omega_grid(64, 0.1);
    h.values.assign(64, cplx(-0.3, 0.0));
    BathModel bath = discretize_bath(h, 16, 1e-4);
    CHECK(bath.size() == 0);
    CHECK(delta_fit_eval(bath, 0.05, 1e-4) == cplx(0.0, 0.0));
}

TEST_CASE("self-energy grid mismatch is rejected") {
    ChainCase c(1.0);
    std::vector<cplx> sigma(c.d_loc.size() - 1, cplx(0, 0));
    CHECK_THROWS_AS(hybridization_update(c.d_loc, sigma, c.omega_loc2, c.delta), ConfigError);
}
