#include <doctest.h>

#include <string>

#include "fwm/config.hpp"
#include "fwm/errors.hpp"
#include "fwm/presets.hpp"

using namespace fwm;

namespace {
std::string error_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}
}  // namespace

TEST_CASE("defaults") {
    const ExperimentConfig c;
    CHECK(c.grid.nx == 1024);
    CHECK(c.slit_width == doctest::Approx(530e-6));
    CHECK(c.pump.power == doctest::Approx(0.2));
    CHECK(c.medium.detuning == doctest::Approx(2e9));
    CHECK(c.probe_beam.tilt == c.probe.crossing_angle);
    CHECK(c.medium.gain_strength > 0.0);
    CHECK_NOTHROW(c.validate());
    CHECK(parse_config_text("") == c);
}

TEST_CASE("values with units") {
    const ExperimentConfig c = parse_config_text(
        "# comment\n"
        "slit.width = 0.455 mm\n"
        "pump.power = 150 mW   # trailing comment\n"
        "pump.detuning = 1500 MHz\n"
        "probe.angle = 10 mrad\n"
        "spectrum.light_shift_slope = 42500000 Hz/W\n"
        "model.mode = split-step\n"
        "slit.axis = x\n"
        "run.seed = 42\n");
    CHECK(c.slit_width == doctest::Approx(455e-6));
    CHECK(c.pump.power == doctest::Approx(0.15));
    CHECK(c.medium.detuning == doctest::Approx(1.5e9));
    CHECK(c.probe.crossing_angle == doctest::Approx(0.01));
    CHECK(c.probe_beam.tilt == doctest::Approx(0.01));
    CHECK(c.spectrum.light_shift_slope == doctest::Approx(42.5e6));
    CHECK(c.mode == GainMode::SplitStep);
    CHECK(c.slit_axis == Axis::X);
    CHECK(c.seed == 42);
}

TEST_CASE("strict keys and positions") {
    CHECK(error_of("slit.width = 530 um\nslit.widht = 3 um\n") == "line 2, column 1: unknown key 'slit.widht'");
    CHECK(error_of("slit.width = 530 um\n  slit.width = 500 um\n").find("line 2, column 3: duplicate key") == 0);
    CHECK(error_of("pump.power\n").find("line 1, column 1") == 0);
    CHECK(error_of("pump.power =\n").find("missing value") != std::string::npos);
    CHECK(error_of("model.steps = 2.5\n").find("bad value") != std::string::npos);
    CHECK_THROWS_AS(parse_config_text("nope = 1\n"), ParseError);
}

TEST_CASE("unit errors") {
    CHECK_THROWS_AS(parse_config_text("slit.width = 530\n"), UnitError);
    CHECK_THROWS_AS(parse_config_text("slit.width = 530 mW\n"), UnitError);
    CHECK_THROWS_AS(parse_config_text("analysis.threshold = 0.1 mm\n"), UnitError);
    CHECK(error_of("pump.power = 5 kW\n").find("line 1, column 16: invalid unit 'kW'") == 0);
}

TEST_CASE("domain errors surface at parse time") {
    CHECK_THROWS_AS(parse_config_text("grid.nx = 7\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("probe.two_photon_detuning = 200 MHz\n"), DomainError);
    CHECK_THROWS_AS(parse_config_text("noise.conjugate_power = 60 uW\n"), DomainError);
}

TEST_CASE("emit then parse round-trips every preset") {
    for (const std::string& name : preset_names()) {
        const ExperimentConfig c = preset_config(name);
        const std::string text = emit_config_text(c);
        CAPTURE(name);
        CHECK(parse_config_text(text) == c);
        CHECK(emit_config_text(parse_config_text(text)) == text);
    }
}

TEST_CASE("round-trip keeps awkward values exact") {
    ExperimentConfig c;
    c.slit_width = 0.1 + 0.2;  // not a short decimal in micrometers
    c.spectrum.centroid = -9.75e6 / 3.0;
    c.noise.eta_probe = 1.0 / 3.0;
    CHECK(parse_config_text(emit_config_text(c)) == c);
}

TEST_CASE("module views share the top-level settings") {
    ExperimentConfig c;
    c.slit_width = 455e-6;
    c.pump.power = 0.12;
    c.slit_enabled = false;
    CHECK(c.spectrum_model().slit_width == 455e-6);
    CHECK_FALSE(c.spectrum_model().structured);
    c.structuring = Structuring::On;
    CHECK(c.spectrum_model().structured);
    CHECK(c.medium_params().pump_power == 0.12);
    CHECK(c.slit().height == std::numeric_limits<double>::infinity());
    CHECK(c.scan_deltas().size() == 46);
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 8);
    CHECK_THROWS_AS(preset_config("fig9"), UnknownPreset);
    const ExperimentConfig f1 = preset_config("fig1c");
    CHECK(f1.probe.two_photon_detuning == doctest::Approx(-5e6));
    CHECK(resonances(f1.spectrum_model(), f1.pump.power)[0].center == doctest::Approx(-5e6));
}

TEST_CASE("digests") {
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}
