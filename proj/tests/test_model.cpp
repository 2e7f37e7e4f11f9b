#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vibpol/model.hpp"

using namespace vibpol;

namespace {

ModelParams small_params() {
    ModelParams p = default_chain_params();
    p.n_sites = 16;
    p.eta = 0.07;
    return p;
}

DisplacementState random_state(const ModelParams& p, std::mt19937& rng) {
    DisplacementState s = DisplacementState::zero(p.n_sites);
    // photon chain is stiff, keep x excursions small; matter thermal scale ~ 5 bohr
    std::uniform_real_distribution<double> ux(-0.05, 0.05), ur(-5.0, 5.0);
    for (int j = 0; j < p.n_sites; ++j) {
        s.x[j] = ux(rng);
        s.r[j] = ur(rng);
    }
    return s;
}

}  // namespace

TEST_CASE("forces match the finite-difference gradient of the potential") {
    ModelParams p = small_params();
    std::mt19937 rng(12345);
    const double h = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        DisplacementState s = random_state(p, rng);
        ForceField f = forces(p, s);
        for (int j = 0; j < p.n_sites; ++j) {
            auto fd = [&](std::vector<double>& comp, int idx) {
                double save = comp[idx];
                comp[idx] = save + h;
                double vp = potential_energy(p, s);
                comp[idx] = save - h;
                double vm = potential_energy(p, s);
                comp[idx] = save;
                return -(vp - vm) / (2.0 * h);
            };
            double fx = fd(s.x, j), fr = fd(s.r, j);
            double scale = std::max({std::abs(f.f_x[j]), std::abs(f.f_r[j]), 1e-6});
            worst = std::max(worst, std::abs(fx - f.f_x[j]) / scale);
            worst = std::max(worst, std::abs(fr - f.f_r[j]) / scale);
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("potential is invariant under cyclic relabeling of sites") {
    ModelParams p = small_params();
    std::mt19937 rng(777);
    DisplacementState s = random_state(p, rng);
    double v0 = potential_energy(p, s);
    DisplacementState t = s;
    const int n = p.n_sites;
    for (int j = 0; j < n; ++j) {
        t.x[j] = s.x[(j + 5) % n];
        t.r[j] = s.r[(j + 5) % n];
    }
    CHECK(potential_energy(p, t) == Catch::Approx(v0).epsilon(1e-13));
}

TEST_CASE("potential is even under simultaneous parity of both fields") {
    ModelParams p = small_params();
    std::mt19937 rng(31);
    DisplacementState s = random_state(p, rng);
    DisplacementState t = s;
    for (int j = 0; j < p.n_sites; ++j) {
        t.x[j] = -s.x[j];
        t.r[j] = -s.r[j];
    }
    CHECK(potential_energy(p, t) == Catch::Approx(potential_energy(p, s)).epsilon(1e-13));
}

TEST_CASE("zero displacement has zero potential and forces") {
    ModelParams p = small_params();
    DisplacementState s = DisplacementState::zero(p.n_sites);
    CHECK(potential_energy(p, s) == 0.0);
    ForceField f = forces(p, s);
    for (int j = 0; j < p.n_sites; ++j) {
        CHECK(f.f_x[j] == 0.0);
        CHECK(f.f_r[j] == 0.0);
    }
}

TEST_CASE("kinetic energy and state checks") {
    ModelParams p = small_params();
    DisplacementState s = DisplacementState::zero(p.n_sites);
    s.v_r[3] = 2.0;
    CHECK(kinetic_energy(s) == Catch::Approx(2.0));
    s.r.pop_back();
    CHECK_THROWS_AS(potential_energy(p, s), ConfigError);
}

TEST_CASE("effective couplings scale as stated") {
    ModelParams p = default_chain_params();
    p.eta = 0.1;
    auto ec = effective_couplings(p);
    CHECK(ec.G_lm == Catch::Approx(2.0 * 0.1 * p.omega_m * p.omega_m).epsilon(1e-12));
    CHECK(ec.d_se == Catch::Approx(2.0 * 0.01 * p.omega_m * p.omega_m).epsilon(1e-12));
    // coupling-free limit
    p.eta = 0.0;
    auto ec0 = effective_couplings(p);
    CHECK(ec0.G_lm == 0.0);
    CHECK(ec0.d_se == 0.0);
}

TEST_CASE("parameter validation rejects bad inputs") {
    ModelParams p = default_chain_params();
    p.stencil_order = 3;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_chain_params();
    p.omega_m = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = default_chain_params();
    p.n_sites = 1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_NOTHROW(default_chain_params().validate());
}
