#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "vibpol/spectra.hpp"
#include "vibpol/units.hpp"

using namespace vibpol;

namespace {

// unit-area Lorentzian with half-width gamma
double lorentzian(double w, double w0, double gamma) {
    double d = w - w0;
    return gamma / (pi * (d * d + gamma * gamma));
}

std::vector<double> grid_mev(double lo, double hi, double step) {
    std::vector<double> w;
    for (double x = lo; x <= hi + 1e-9; x += step) w.push_back(mev_to_ha(x));
    return w;
}

}  // namespace

TEST_CASE("single Lorentzian: position, width and height recovered") {
    auto w = grid_mev(350.0, 550.0, 0.25);
    const double w0 = mev_to_ha(440.0), gamma = mev_to_ha(4.0);
    std::vector<double> A(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) A[i] = lorentzian(w[i], w0, gamma);

    auto peaks = find_peaks(w, A);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(peaks[0].position - w0) < mev_to_ha(0.25));
    CHECK(peaks[0].fwhm == Catch::Approx(2.0 * gamma).epsilon(0.05));
    CHECK(peaks[0].height == Catch::Approx(1.0 / (pi * gamma)).epsilon(0.03));
}

TEST_CASE("well-separated doublet: both peaks, ascending order") {
    auto w = grid_mev(350.0, 650.0, 0.25);
    const double wa = mev_to_ha(440.0), ga = mev_to_ha(2.5);
    const double wb = mev_to_ha(528.0), gb = mev_to_ha(4.0);
    std::vector<double> A(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        A[i] = lorentzian(w[i], wa, ga) + 0.7 * lorentzian(w[i], wb, gb);

    auto peaks = find_peaks(w, A);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].position < peaks[1].position);
    CHECK(std::abs(peaks[0].position - wa) < mev_to_ha(0.25));
    CHECK(std::abs(peaks[1].position - wb) < mev_to_ha(0.25));
    CHECK(peaks[0].fwhm == Catch::Approx(2.0 * ga).epsilon(0.05));
    CHECK(peaks[1].fwhm == Catch::Approx(2.0 * gb).epsilon(0.05));
}

TEST_CASE("overlapping doublet is deblended by the two-Lorentzian fit") {
    auto w = grid_mev(380.0, 520.0, 0.25);
    const double wa = mev_to_ha(440.0), wb = mev_to_ha(452.0);
    const double ga = mev_to_ha(4.0), gb = mev_to_ha(4.0);
    std::vector<double> A(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        A[i] = lorentzian(w[i], wa, ga) + lorentzian(w[i], wb, gb);

    auto peaks = find_peaks(w, A);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].position - wa) < mev_to_ha(1.0));
    CHECK(std::abs(peaks[1].position - wb) < mev_to_ha(1.0));
    CHECK(peaks[0].fwhm == Catch::Approx(2.0 * ga).epsilon(0.10));
    CHECK(peaks[1].fwhm == Catch::Approx(2.0 * gb).epsilon(0.10));
    CHECK((peaks[0].fitted && peaks[1].fitted));
}

TEST_CASE("peak finding is invariant under intensity rescaling") {
    auto w = grid_mev(350.0, 550.0, 0.25);
    std::vector<double> A(w.size()), B(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        A[i] = lorentzian(w[i], mev_to_ha(430.0), mev_to_ha(3.0)) +
               0.5 * lorentzian(w[i], mev_to_ha(470.0), mev_to_ha(5.0));
        B[i] = 1e6 * A[i];
    }
    auto pa = find_peaks(w, A);
    auto pb = find_peaks(w, B);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i].position == Catch::Approx(pb[i].position).margin(1e-12));
        CHECK(pa[i].fwhm == Catch::Approx(pb[i].fwhm).epsilon(1e-6));
        CHECK(pb[i].height == Catch::Approx(1e6 * pa[i].height).epsilon(1e-6));
    }
}

TEST_CASE("prominence floor suppresses minor bumps") {
    auto w = grid_mev(350.0, 550.0, 0.25);
    std::vector<double> A(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        A[i] = lorentzian(w[i], mev_to_ha(440.0), mev_to_ha(4.0)) +
               0.01 * lorentzian(w[i], mev_to_ha(500.0), mev_to_ha(4.0));

    CHECK(find_peaks(w, A).size() == 1);  // default 5% floor
    FindPeaksOptions opt;
    opt.prominence_frac = 0.001;
    CHECK(find_peaks(w, A, opt).size() == 2);
}

TEST_CASE("degenerate inputs") {
    auto w = grid_mev(350.0, 550.0, 1.0);
    std::vector<double> zero(w.size(), 0.0);
    CHECK(find_peaks(w, zero).empty());
    std::vector<double> short_a(w.size() - 1, 1.0);
    CHECK_THROWS_AS(find_peaks(w, short_a), ConfigError);
}

TEST_CASE("lifetime follows the inverse-bandwidth convention") {
    // tau = 1/(FWHM as ordinary frequency) = 2 pi / FWHM_angular
    double fwhm = 2.0 * pi / fs_to_au(100.0);
    CHECK(lifetime_fs_from_fwhm(fwhm) == Catch::Approx(100.0).epsilon(1e-10));
    CHECK(lifetime_fs_from_fwhm(0.0) == 0.0);
    // 70 meV angular FWHM -> about 59 fs
    CHECK(lifetime_fs_from_fwhm(mev_to_ha(70.0)) == Catch::Approx(59.08).epsilon(0.01));
}
