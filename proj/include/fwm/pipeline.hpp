#pragma once

#include <string>
#include <vector>

#include "fwm/analysis.hpp"
#include "fwm/config.hpp"

namespace fwm {

// Pump just after the slit (or the bare Gaussian when the slit is disabled).
ComplexField2D pump_at_slit(const ExperimentConfig& cfg);
ComplexField2D pump_at_cell(const ExperimentConfig& cfg);
// Tilted probe Gaussian at the cell-center plane.
ComplexField2D probe_at_cell(const ExperimentConfig& cfg);

struct CameraFrame {
    Image image;  // probe + conjugate intensity at the camera plane
    double probe_power = 0.0;
    double conjugate_power = 0.0;
};

// Runs the configured gain model and propagates both beams to the camera.
// `pump_cell` may pass a precomputed pump at the cell center (single-pass only).
CameraFrame simulate_camera(const ExperimentConfig& cfg, const ComplexField2D* pump_cell = nullptr);

// Maxima surviving suppression at the configured separation and threshold.
int count_resolvable_spots(const Image& image, const ExperimentConfig& cfg);

struct SpectralScan {
    std::vector<double> deltas;           // Hz
    std::vector<std::string> ids;
    std::vector<std::vector<double>> curves;  // curves[region][delta], W (intensity times area)
};

// Regions from the camera frame at the lower resonance, six expected.
SpotSet reference_spots(const ExperimentConfig& cfg, Image* frame = nullptr);

// Camera-plane intensity integrated over each region, for every detuning.
SpectralScan scan_two_photon(const ExperimentConfig& cfg, const std::vector<double>& deltas, const SpotSet& spots);

}  // namespace fwm
