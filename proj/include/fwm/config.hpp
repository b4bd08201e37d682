#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fwm/analysis.hpp"
#include "fwm/field.hpp"
#include "fwm/fwm_gain.hpp"
#include "fwm/noise.hpp"
#include "fwm/propagation.hpp"
#include "fwm/spectra.hpp"

namespace fwm {

enum class GainMode { SinglePass, SplitStep };
enum class Structuring { Auto, On, Off };

// Every physical parameter of the setup. Quantities are SI internally.
struct ExperimentConfig {
    Grid2D grid{};
    double wavelength = 794.98e-9;

    BeamSpec pump{900e-6, 0.2, 0.0, 0.0, 0.0};
    BeamSpec probe_beam{400e-6, 100e-6, 0.0, 0.0, 0.0};  // tilt comes from probe.crossing_angle
    ProbeParams probe{};

    bool slit_enabled = true;
    double slit_width = 530e-6;
    double slit_height = 0.0;  // 0 means unbounded
    double slit_offset = 0.0;
    Axis slit_axis = Axis::Y;
    double slit_edge_width = 0.0;

    MediumParams medium{};
    double camera_distance = 140e-3;  // from the cell center

    GainMode mode = GainMode::SinglePass;
    int steps = 8;
    bool band_limit = true;
    AliasingPolicy aliasing = AliasingPolicy::Warn;
    bool convergence_check = false;

    GainSpectrumModel spectrum{};
    Structuring structuring = Structuring::Auto;

    double scan_start = -30e6;
    double scan_stop = 15e6;
    double scan_step = 1e6;

    NoiseModel noise{};
    double noise_f_start = 50e3;
    double noise_f_stop = 5e6;
    int noise_points = 100;
    long long mc_samples = 100000;
    double noise_two_photon_detuning = 13e6;  // recorded with the traces

    SpotOptions spots{};
    double min_separation = 300e-6;
    double correlation_threshold = 0.9;
    int frames_per_point = 10;

    std::uint64_t seed = 1;

    ExperimentConfig();
    bool operator==(const ExperimentConfig&) const = default;

    void validate() const;  // throws DomainError

    // Module views with the shared fields (slit width, pump power, seed, ...) filled in.
    SlitSpec slit() const;
    MediumParams medium_params() const;
    GainSpectrumModel spectrum_model() const;
    NoiseModel noise_model() const;
    PropagationPlan plan(double z) const;
    std::vector<double> scan_deltas() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);
std::string emit_config_text(const ExperimentConfig& config);
void emit_config(const ExperimentConfig& config, const std::string& path);

// FNV-1a 64-bit, used for config and output digests in run manifests.
std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

}  // namespace fwm
