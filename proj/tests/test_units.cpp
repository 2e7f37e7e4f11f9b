#include <catch2/catch_amalgamated.hpp>

#include "vibpol/units.hpp"

using namespace vibpol;

TEST_CASE("unit conversions round-trip") {
    CHECK(ha_to_mev(mev_to_ha(440.0)) == Catch::Approx(440.0).epsilon(1e-14));
    CHECK(bohr_to_angstrom(angstrom_to_bohr(3.0)) == Catch::Approx(3.0).epsilon(1e-14));
    CHECK(au_to_fs(fs_to_au(25.0)) == Catch::Approx(25.0).epsilon(1e-14));
}

TEST_CASE("chain constants in atomic units") {
    // the 440/215 meV chain at 300 K with a 3 Angstrom lattice constant
    CHECK(mev_to_ha(440.0) == Catch::Approx(0.0161697).epsilon(1e-5));
    CHECK(mev_to_ha(215.0) == Catch::Approx(0.0079011).epsilon(1e-4));
    CHECK(angstrom_to_bohr(3.0) == Catch::Approx(5.66918).epsilon(1e-5));
    CHECK(kelvin_to_kBT_ha(300.0) == Catch::Approx(9.500435e-4).epsilon(1e-6));
    CHECK(fs_to_au(au_to_fs(4.0)) == Catch::Approx(4.0).epsilon(1e-14));
    CHECK(au_to_fs(4.0) == Catch::Approx(0.0967552).epsilon(1e-6));
}

TEST_CASE("speed of light and pi") {
    CHECK(speed_of_light_au == Catch::Approx(137.035999).epsilon(1e-8));
    CHECK(pi == Catch::Approx(3.14159265358979).epsilon(1e-14));
}
