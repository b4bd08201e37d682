#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "fwm/errors.hpp"
#include "fwm/fwm_gain.hpp"
#include "fwm/propagation.hpp"
#include "oracles.hpp"

using namespace fwm;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambda = 794.98e-9;

ComplexField2D slit_field(const Grid2D& g) {
    return apply_aperture(make_gaussian(BeamSpec{900e-6, 0.2, 0, 0, 0}, g, kLambda),
                          SlitSpec{530e-6, kInf, 0, Axis::Y, 0});
}

PropagationPlan exact(double z, PropagationMethod m = PropagationMethod::AngularSpectrum) {
    return PropagationPlan{z, m, false, AliasingPolicy::Ignore};
}

std::string last_warning;
void capture(const std::string& m) { last_warning = m; }
void mute(const std::string&) {}
}  // namespace

TEST_CASE("zero distance is the identity") {
    const Grid2D g{128, 128, 8e-6, 8e-6};
    const ComplexField2D f = make_gaussian(BeamSpec{500e-6, 1e-3, 0, 0, 0.002}, g, kLambda);
    CHECK(propagate(f, exact(0.0)).a == f.a);
}

TEST_CASE("transfer functions conserve power") {
    const Grid2D g{256, 256, 8e-6, 8e-6};
    const ComplexField2D f = slit_field(g);
    for (auto m : {PropagationMethod::AngularSpectrum, PropagationMethod::FresnelTransfer})
        for (double z : {10e-3, 76e-3, 140e-3}) {
            const double p = total_power(propagate(f, exact(z, m)));
            CHECK(std::abs(p / total_power(f) - 1.0) < 1e-10);
        }
}

TEST_CASE("composition and inversion") {
    const Grid2D g{256, 256, 8e-6, 8e-6};
    const ComplexField2D f = slit_field(g);
    for (auto m : {PropagationMethod::AngularSpectrum, PropagationMethod::FresnelTransfer}) {
        const ComplexField2D one = propagate(f, exact(89e-3, m));
        const ComplexField2D two = propagate(propagate(f, exact(64e-3, m)), exact(25e-3, m));
        CHECK(relative_l2(two, one) < 1e-9);
        const ComplexField2D back = propagate(one, exact(-89e-3, m));
        CHECK(relative_l2(back, f) < 1e-9);
    }
}

TEST_CASE("propagate_sequence matches individual hops") {
    const Grid2D g{256, 256, 8e-6, 8e-6};
    const ComplexField2D f = slit_field(g);
    const std::vector<double> zs{0.0, 64e-3, 76e-3, 89e-3};
    const auto seq = propagate_sequence(f, zs, exact(0.0));
    REQUIRE(seq.size() == zs.size());
    CHECK(seq[0].a == f.a);
    for (std::size_t i = 1; i < zs.size(); ++i) CHECK(relative_l2(seq[i], propagate(f, exact(zs[i]))) < 1e-12);
    CHECK_THROWS_AS(propagate_sequence(f, {76e-3, 64e-3}, exact(0.0)), DomainError);
}

TEST_CASE("Gaussian waist grows by sqrt(2) over one Rayleigh range") {
    const Grid2D g{512, 512, 4e-6, 4e-6};
    const double w0 = 100e-6;
    const ComplexField2D f = make_gaussian(BeamSpec{2 * w0, 1e-3, 0, 0, 0}, g, kLambda);
    CHECK(second_moment_radius_x(f) == doctest::Approx(w0).epsilon(1e-3));
    for (double z : {0.5, 1.0, 1.5}) {
        const double zz = z * oracle::rayleigh_range(w0, kLambda);
        const ComplexField2D out = propagate(f, PropagationPlan{zz, PropagationMethod::AngularSpectrum, true, AliasingPolicy::Ignore});
        CHECK(second_moment_radius_x(out) == doctest::Approx(oracle::gaussian_radius(w0, zz, kLambda)).epsilon(0.01));
    }
}

TEST_CASE("Fresnel transfer matches the slit diffraction integral") {
    const Grid2D g{4, 2048, 4.3e-6, 4.3e-6};
    ComplexField2D f(g, kLambda);
    std::fill(f.a.begin(), f.a.end(), cplx(1.0, 0.0));
    f = apply_aperture(f, SlitSpec{530e-6, kInf, 0, Axis::Y, 15e-6});
    const ComplexField2D out = propagate(f, exact(40e-3, PropagationMethod::FresnelTransfer));
    double num = 0.0, den = 0.0;
    for (int iy = g.ny / 2 - 150; iy <= g.ny / 2 + 150; iy += 25) {
        const cplx ref = oracle::fresnel_slit(g.y(iy), 40e-3, kLambda, 265e-6, 15e-6);
        num += std::norm(out.at(1, iy) - ref);
        den += std::norm(ref);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("aliasing policy") {
    const Grid2D g{64, 64, 4e-6, 4e-6};
    const double zc = critical_distance(g, kLambda);
    CHECK(zc == doctest::Approx(64 * 16e-12 / kLambda));
    ComplexField2D f(g, kLambda);
    f.at(32, 32) = 1.0;
    PropagationPlan p{2 * zc, PropagationMethod::AngularSpectrum, false, AliasingPolicy::Fatal};
    CHECK_FALSE(sampling_ok(g, kLambda, p));
    CHECK_THROWS_AS(propagate(f, p), AliasingRisk);
    p.aliasing = AliasingPolicy::Warn;
    last_warning.clear();
    set_warning_sink(capture);
    propagate(f, p);
    set_warning_sink(mute);
    CHECK(last_warning.find("sampling bound") != std::string::npos);
    p.band_limit = true;
    p.aliasing = AliasingPolicy::Fatal;
    CHECK(sampling_ok(g, kLambda, p));
    CHECK_NOTHROW(propagate(f, p));
}

TEST_CASE("band limit removes only high angular frequencies") {
    const Grid2D g{64, 64, 4e-6, 4e-6};
    const auto h = transfer_function(g, kLambda, PropagationPlan{50e-3, PropagationMethod::AngularSpectrum, true, AliasingPolicy::Ignore});
    CHECK(std::abs(h[0]) == doctest::Approx(1.0));
    CHECK(std::abs(h[32]) == 0.0);  // Nyquist column lies outside the limit at this distance
}
