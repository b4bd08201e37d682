#pragma once

#include <numbers>

#include "fwm/field.hpp"
#include "fwm/propagation.hpp"
#include "fwm/spectra.hpp"

namespace fwm {

struct MediumParams {
    double cell_length = 25e-3;
    double cell_center_z = 76e-3;      // distance from the slit plane
    double detuning = 2e9;             // one-photon detuning, Hz
    double temperature = 125.0;        // degrees C, recorded only
    double gain_strength = 0.0;        // g0 in m/W: G = g0 L |pump|^2 S
    double pump_power = 0.2;           // incident pump power driving the light shift, W
    double reference_detuning = 2e9;
    double gain_detuning_exponent = 1.0;        // gain scales as (reference / detuning)^p
    double dispersion_index = 7.04e-5;          // probe-mode excess index at the reference detuning
    double dispersion_detuning_exponent = 0.3;
    double dispersion_asymmetry = 0.0;          // odd-in-kx mismatch coefficient
    bool phase_matching = true;
    bool pump_depletion = false;
    double probe_phase = 0.0;
    double conjugate_phase = 0.0;

    void validate() const;  // throws DomainError
    double effective_gain_strength() const;  // g0 with the detuning scaling applied
    double effective_index() const;

    bool operator==(const MediumParams&) const = default;
};

struct ProbeParams {
    double two_photon_detuning = -14e6;               // Hz
    double crossing_angle = 0.6 * std::numbers::pi / 180.0;
    double power = 100e-6;
    double validity_window = 100e6;                   // |delta| must stay below this

    void validate() const;

    bool operator==(const ProbeParams&) const = default;
};

struct MixOutput {
    ComplexField2D probe;
    ComplexField2D conjugate;
};

struct SplitStepOutput {
    ComplexField2D probe;
    ComplexField2D conjugate;
    ComplexField2D pump;  // at the cell exit
};

// Longitudinal mismatch 2 k_pump - k_z(probe) - k_z(conjugate) for a probe at
// transverse wavevector (kx, ky) and its conjugate partner at (-kx, -ky).
double phase_mismatch(double kx, double ky, double wavelength, const MediumParams& medium);
double phase_matching_factor(double dk, double length);  // sinc^2(dk L / 2)

// Local parametric map with the generated fields restricted to each resonance's
// transverse mode family. Inputs and outputs refer to the cell-center plane.
MixOutput single_pass_gain(const ComplexField2D& pump, const ComplexField2D& probe_in,
                           const MediumParams& medium, const ProbeParams& probe,
                           const GainSpectrumModel& spectrum);

struct SplitStepOptions {
    int n_steps = 8;
    bool diffraction = true;
    bool gain = true;
    bool check_convergence = false;  // reruns with 2n steps; NonConvergence advisory if > 1e-3
    PropagationPlan plan{};          // method and band limiting for the free-space half steps
};

// Half-step propagation of all three fields around each local gain step. The
// pump is given at the slit plane, the probe at the cell-center plane; the probe
// and conjugate outputs are re-referenced to the cell-center plane.
SplitStepOutput split_step_gain(const ComplexField2D& pump_at_slit, const ComplexField2D& probe_in,
                                const MediumParams& medium, const ProbeParams& probe,
                                const GainSpectrumModel& spectrum, const SplitStepOptions& options);

double relative_l2(const ComplexField2D& a, const ComplexField2D& b);

}  // namespace fwm
