#include <doctest.h>

#include <cmath>

#include "fwm/errors.hpp"
#include "fwm/spectra.hpp"
#include "oracles.hpp"

using namespace fwm;

namespace {
std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> x;
    for (double v = lo; v <= hi + 1e-9; v += step) x.push_back(v);
    return x;
}
}  // namespace

TEST_CASE("splitting follows the light-shift law") {
    GainSpectrumModel m;
    CHECK(splitting(m, 0.2) == doctest::Approx(8.5e6));
    CHECK(splitting(m, 0.1) == doctest::Approx(4.25e6));
    m.slit_width = 455e-6;
    CHECK(splitting(m, 0.2) == doctest::Approx(8.5e6 * 530.0 / 455.0));
    m.splitting_intercept = 1e6;
    m.slit_width = 530e-6;
    CHECK(splitting(m, 0.2) == doctest::Approx(9.5e6));
}

TEST_CASE("resonances straddle the centroid") {
    const GainSpectrumModel m;
    const auto r = resonances(m, 0.2);
    REQUIRE(r.size() == 2);
    CHECK(r[0].center == doctest::Approx(-14e6));
    CHECK(r[1].center == doctest::Approx(-5.5e6));
    CHECK(r[0].family == ModeFamily::Satellite);
    CHECK(r[1].family == ModeFamily::Central);
    CHECK(r[0].weight / r[1].weight == doctest::Approx(530.0 / 455.0));
    GainSpectrumModel circ = m;
    circ.structured = false;
    const auto one = resonances(circ, 0.2);
    REQUIRE(one.size() == 1);
    CHECK(one[0].center == m.centroid);
}

TEST_CASE("lineshapes peak at one with the configured width") {
    for (auto s : {Lineshape::Lorentzian, Lineshape::Gaussian}) {
        CHECK(lineshape(3e6, 3e6, 10e6, s) == 1.0);
        CHECK(lineshape(8e6, 3e6, 10e6, s) == doctest::Approx(0.5));
    }
    CHECK(lineshape(9e6, 1e6, 4e6, Lineshape::Lorentzian) == doctest::Approx(oracle::lorentzian(9e6, 1e6, 4e6)));
}

TEST_CASE("spectral response is normalized and bounded") {
    const GainSpectrumModel m;
    double best = 0.0;
    for (double d : grid(-30e6, 15e6, 0.25e6))
        for (double q = 0.0; q <= 12e-3; q += 0.25e-3) {
            const double v = spectral_response(m, d, q, 0.2);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            best = std::max(best, v);
        }
    CHECK(best == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("mode strengths track the doublet weights") {
    const GainSpectrumModel m;
    const auto r = resonances(m, 0.2);
    const auto a = mode_strengths(m, r[0].center, 0.2);
    REQUIRE(a.size() == 2);
    const double n = response_normalization(m, 0.2);
    CHECK(a[0] == doctest::Approx(r[0].weight / n));
    CHECK(a[1] == doctest::Approx(r[1].weight * lineshape(r[0].center, r[1].center, r[1].fwhm, m.lineshape) / n));
}

TEST_CASE("doublet fit recovers synthetic lobes") {
    const auto x = grid(-30e6, 15e6, 1e6);
    std::vector<double> y;
    for (double v : x) y.push_back(0.8 * oracle::lorentzian(v, -12e6, 9e6) + 0.6 * oracle::lorentzian(v, -3e6, 11e6));
    const DoubletFit f = fit_doublet(x, y);
    CHECK(f.lower.center == doctest::Approx(-12e6).epsilon(1e-6));
    CHECK(f.upper.center == doctest::Approx(-3e6).epsilon(1e-6));
    CHECK(f.lower.fwhm == doctest::Approx(9e6).epsilon(1e-6));
    CHECK(f.upper.amplitude == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(f.r_squared > 0.999999);
    CHECK_THROWS_AS(fit_doublet({1, 2, 3}, {1, 2, 1}), DegenerateFit);
}

TEST_CASE("default doublet: fitted split, two raw maxima") {
    const GainSpectrumModel m;
    const auto x = grid(-30e6, 15e6, 1e6);
    const auto s = doublet_spectrum(m, x, 0.2);
    const double top = *std::max_element(s.begin(), s.end());
    CHECK(top <= 1.0);
    CHECK(top > 0.99);
    const DoubletFit f = fit_doublet(x, s);
    CHECK(f.separation() == doctest::Approx(8.5e6).epsilon(1e-6));
    CHECK(local_maxima(s).size() == 2);
    GainSpectrumModel circ = m;
    circ.structured = false;
    CHECK(local_maxima(doublet_spectrum(circ, x, 0.2)).size() == 1);
}

TEST_CASE("local maxima") {
    CHECK(local_maxima({0, 1, 0, 2, 0}) == std::vector<std::size_t>{1, 3});
    CHECK(local_maxima({0, 1, 1, 0}).size() == 1);
    CHECK(local_maxima({3, 2, 1}).empty());
}

TEST_CASE("resolvability uses half the narrower width") {
    CHECK(doublet_resolved(5e6, 10e6, 12e6));
    CHECK_FALSE(doublet_resolved(4.9e6, 10e6, 12e6));
}

TEST_CASE("linear fit") {
    const LinearFit f = fit_linear({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_linear({2, 2, 2}, {1, 2, 3}), DegenerateFit);
}

TEST_CASE("measured splitting is linear in power and falls with slit width") {
    GainSpectrumModel m;
    const auto pts = splitting_vs_power({0.1, 0.12, 0.14, 0.16, 0.18, 0.2}, m);
    std::vector<double> x, y;
    for (const auto& p : pts) {
        x.push_back(p.power);
        y.push_back(p.splitting);
    }
    const LinearFit f = fit_linear(x, y);
    CHECK(f.r_squared >= 0.999);
    CHECK(f.slope == doctest::Approx(m.light_shift_slope).epsilon(0.005));
    double prev = 1e12;
    for (double d : {455e-6, 530e-6, 580e-6}) {
        m.slit_width = d;
        CHECK(splitting(m, 0.2) < prev);
        prev = splitting(m, 0.2);
    }
}

TEST_CASE("relative peak gain and validation") {
    GainSpectrumModel m;
    m.slit_width = 455e-6;
    CHECK(relative_peak_gain(m) == doctest::Approx(455.0 / 530.0));
    m.linewidth1 = 0.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
}
