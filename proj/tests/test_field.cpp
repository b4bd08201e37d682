#include <doctest.h>

#include <cmath>
#include <limits>

#include "fwm/errors.hpp"
#include "fwm/field.hpp"
#include "oracles.hpp"

using namespace fwm;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambda = 794.98e-9;
}

TEST_CASE("grid validation and coordinates") {
    CHECK_THROWS_AS(Grid2D({3, 4, 1e-6, 1e-6}).validate(), DomainError);
    CHECK_THROWS_AS(Grid2D({4, 4, 0.0, 1e-6}).validate(), DomainError);
    const Grid2D g{8, 4, 2e-6, 3e-6};
    CHECK(g.x(4) == 0.0);
    CHECK(g.x(0) == doctest::Approx(-8e-6));
    CHECK(g.y(3) == doctest::Approx(3e-6));
    CHECK(g.size() == 32);
    CHECK(g.pixel_area() == doctest::Approx(6e-12));
}

TEST_CASE("gaussian power and peak match the analytic beam") {
    const Grid2D g{512, 512, 4e-6, 4e-6};
    const ComplexField2D f = make_gaussian(BeamSpec{900e-6, 0.2, 0, 0, 0}, g, kLambda);
    CHECK(total_power(f) == doctest::Approx(0.2).epsilon(2e-5));
    const double peak = std::norm(f.at(256, 256));
    CHECK(peak == doctest::Approx(oracle::gaussian_peak_intensity(0.2, 450e-6)).epsilon(1e-12));
    CHECK(peak == doctest::Approx(6.29e5).epsilon(1e-3));
}

TEST_CASE("undersized grid is rejected") {
    const Grid2D g{64, 64, 4e-6, 4e-6};
    CHECK_THROWS_AS(make_gaussian(BeamSpec{900e-6, 0.2, 0, 0, 0}, g, kLambda), GridTooSmall);
}

TEST_CASE("tilt adds a linear phase only") {
    const Grid2D g{256, 256, 8e-6, 8e-6};
    const ComplexField2D flat = make_gaussian(BeamSpec{600e-6, 1e-3, 0, 0, 0}, g, kLambda);
    const ComplexField2D tilted = make_gaussian(BeamSpec{600e-6, 1e-3, 0, 0, 0.01}, g, kLambda);
    const double k = 2 * std::numbers::pi / kLambda;
    for (int ix : {10, 100, 128, 200}) {
        CHECK(std::abs(tilted.at(ix, 128)) == doctest::Approx(std::abs(flat.at(ix, 128))));
        const cplx ratio = tilted.at(ix, 128) / flat.at(ix, 128);
        CHECK(std::abs(ratio - std::polar(1.0, k * std::sin(0.01) * g.x(ix))) < 1e-9);
    }
}

TEST_CASE("slit transmission against the erf oracle") {
    SlitSpec s{530e-6, kInf, 20e-6, Axis::Y, 15e-6};
    for (double y : {-400e-6, -245e-6, 0.0, 285e-6, 300e-6, 1e-3})
        CHECK(slit_transmission(s, 123.0, y) == doctest::Approx(oracle::soft_slit(y - 20e-6, 265e-6, 15e-6)).epsilon(1e-14));
    s.axis = Axis::X;
    CHECK(slit_transmission(s, 20e-6, 5.0) == doctest::Approx(oracle::soft_slit(0.0, 265e-6, 15e-6)));
    SlitSpec hard{100e-6, kInf, 0, Axis::X, 0};
    CHECK(slit_transmission(hard, 50e-6, 0) == 1.0);
    CHECK(slit_transmission(hard, 50.1e-6, 0) == 0.0);
    SlitSpec boxed{100e-6, 40e-6, 0, Axis::X, 0};
    CHECK(slit_transmission(boxed, 0, 30e-6) == 0.0);
}

TEST_CASE("hard aperture is idempotent and passive") {
    const Grid2D g{256, 256, 8e-6, 8e-6};
    const ComplexField2D f = make_gaussian(BeamSpec{900e-6, 0.2, 30e-6, -20e-6, 0.003}, g, kLambda);
    const SlitSpec s{530e-6, kInf, 0, Axis::Y, 0};
    const ComplexField2D once = apply_aperture(f, s);
    const ComplexField2D twice = apply_aperture(once, s);
    CHECK(once.a == twice.a);
    CHECK(total_power(once) <= total_power(f));
    for (std::size_t i = 0; i < f.a.size(); ++i) CHECK(std::abs(once.a[i]) <= std::abs(f.a[i]));
}

TEST_CASE("soft aperture is passive and shrinks with repetition") {
    const Grid2D g{128, 128, 12e-6, 12e-6};
    const ComplexField2D f = make_gaussian(BeamSpec{600e-6, 0.1, 0, 0, 0}, g, kLambda);
    const SlitSpec s{300e-6, kInf, 0, Axis::X, 20e-6};
    const ComplexField2D once = apply_aperture(f, s);
    const ComplexField2D twice = apply_aperture(once, s);
    CHECK(total_power(twice) <= total_power(once));
    CHECK(total_power(once) <= total_power(f));
}

TEST_CASE("grid mismatch is reported") {
    const ComplexField2D a(Grid2D{8, 8, 1e-6, 1e-6}, kLambda);
    const ComplexField2D b(Grid2D{8, 8, 2e-6, 1e-6}, kLambda);
    CHECK_THROWS_AS(require_same_grid(a, b, "test"), GridMismatch);
}

TEST_CASE("intensity image normalization") {
    ComplexField2D f(Grid2D{4, 4, 1e-6, 1e-6}, kLambda);
    f.at(1, 2) = cplx(3, 4);
    f.at(0, 0) = cplx(0, 1);
    const Image raw = intensity_image(f);
    CHECK(raw.v[2 * 4 + 1] == 25.0);
    CHECK(image_sum(raw) == 26.0);
    const Image n = intensity_image(f, true);
    CHECK(n.v[2 * 4 + 1] == 1.0);
    CHECK(n.v[0] == doctest::Approx(0.04));
}
