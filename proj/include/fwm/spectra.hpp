#pragma once

#include <vector>

namespace fwm {

enum class Lineshape { Lorentzian, Gaussian };

// Spatial-mode family a resonance feeds: the annular six-spot family or the
// central twin-beam pair.
enum class ModeFamily { Satellite, Central };

struct GainSpectrumModel {
    double centroid = -9.75e6;           // Hz, midpoint of the doublet
    double linewidth1 = 10e6;            // FWHM, Hz
    double linewidth2 = 10e6;
    double light_shift_slope = 42.5e6;   // Hz/W (42.5 kHz/mW)
    double splitting_intercept = 0.0;    // Hz
    double reference_slit = 530e-6;      // slit width at which the splitting law is anchored
    double slit_width = 530e-6;
    double weight_crossover_slit = 455e-6;  // slit width where both lobes weigh the same
    double weight_exponent = 1.0;
    double gain_slit_exponent = 1.0;
    bool structured = true;              // false: circularly symmetric pump, single line
    Lineshape lineshape = Lineshape::Lorentzian;
    bool transverse_filters = true;
    double off_axis_radius = 6e-3;       // annular admittance radius, rad from the beam axis
    double off_axis_width = 3e-3;
    double near_axis_width = 2e-3;

    void validate() const;  // throws DomainError

    bool operator==(const GainSpectrumModel&) const = default;
};

struct Resonance {
    double center;  // Hz
    double fwhm;    // Hz
    double weight;
    ModeFamily family;
};

// omega_2 - omega_1 for the configured slit at pump power p (W).
double splitting(const GainSpectrumModel& m, double pump_power);
// Lower resonance first. One entry when the pump is unstructured.
std::vector<Resonance> resonances(const GainSpectrumModel& m, double pump_power);

double lineshape(double delta, double center, double fwhm, Lineshape shape);  // peak value 1
double admittance(const GainSpectrumModel& m, ModeFamily family, double angle);

// Sum of weighted lobes times their transverse admittance at `angle` (rad from
// the beam carrier), normalized so the maximum over delta and angle is 1.
double spectral_response(const GainSpectrumModel& m, double delta, double angle, double pump_power);
double response_normalization(const GainSpectrumModel& m, double pump_power);

// Lobe strengths a_j(delta) = w_j l_j(delta) / normalization, in resonance order.
std::vector<double> mode_strengths(const GainSpectrumModel& m, double delta, double pump_power);

// Mode-peak spectrum sum_j w_j l_j(delta), normalized to a maximum of 1 over delta.
std::vector<double> doublet_spectrum(const GainSpectrumModel& m, const std::vector<double>& deltas,
                                     double pump_power);

// Overall gain relative to the reference slit: (d / d_ref)^gamma.
double relative_peak_gain(const GainSpectrumModel& m);

// Resolved iff the separation is at least the smaller half-width.
bool doublet_resolved(double separation, double fwhm1, double fwhm2);

// Indices of strict local maxima of a sampled curve (plateaus count once).
std::vector<std::size_t> local_maxima(const std::vector<double>& y);

struct LorentzLobe {
    double amplitude;
    double center;
    double fwhm;
};

struct DoubletFit {
    LorentzLobe lower;
    LorentzLobe upper;
    double r_squared;
    double separation() const { return upper.center - lower.center; }
};

// Least-squares fit of two Lorentzians (Levenberg-Marquardt). Throws DegenerateFit
// when fewer than 7 points are given or the fit does not converge.
DoubletFit fit_doublet(const std::vector<double>& x, const std::vector<double>& y);

struct LinearFit {
    double slope;
    double intercept;
    double r_squared;
};

struct PowerPoint {
    double power;      // W
    double splitting;  // Hz
};

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// Splitting measured by fitting the sampled doublet spectrum at each power.
std::vector<PowerPoint> splitting_vs_power(const std::vector<double>& powers, const GainSpectrumModel& m);

}  // namespace fwm
