#pragma once

#include <cstdint>
#include <vector>

namespace fwm {

struct NoiseModel {
    double probe_power = 45e-6;        // detected, W
    double conjugate_power = 25e-6;
    double eta_probe = 0.338;
    double eta_conjugate = 0.338;
    double electronic_floor_db = -10.0;   // relative to the shot-noise level
    double band_low = 0.1e6;
    double band_high = 5e6;
    double technical_knee = 100e3;
    double technical_level = 1.0;          // excess at f = knee/sqrt(2), in SNL units
    double rbw = 10e3;
    double vbw = 300.0;
    double transimpedance = 1e5;           // V/A
    double wavelength = 794.98e-9;
    double load_impedance = 50.0;
    bool absolute = false;                 // report dBm instead of dB relative to SNL
    double jitter_db = 0.0;                // seeded trace jitter (1 sigma)
    std::uint64_t seed = 1;

    // Seeded-amplifier gain implied by the detected powers: P_p / (P_p - P_c).
    double gain() const;
    void validate() const;  // throws DomainError

    bool operator==(const NoiseModel&) const = default;
};

double nrf_ideal(double gain);
double nrf_lossy(double gain, double eta_probe, double eta_conjugate);
// Equal efficiency on both arms that produces the requested NRF at `gain`.
double efficiency_for_nrf(double gain, double nrf);
double to_db(double linear);

struct NoiseTrace {
    std::vector<double> frequency;   // Hz
    std::vector<double> electronic;  // dB (relative to SNL) or dBm
    std::vector<double> difference;
    std::vector<double> snl;
    std::vector<double> probe;
};

// Shot-noise power at the analyzer for the total detected photocurrent, dBm.
double shot_noise_dbm(const NoiseModel& m);
NoiseTrace synthesize_trace(const NoiseModel& m, const std::vector<double>& frequencies);
std::vector<double> log_frequency_grid(double f_start, double f_stop, int points);

struct MonteCarloResult {
    double nrf;
    double standard_error;
    std::size_t samples;
};

// Photon-number sampling of the seeded two-mode amplifier (Gaussian state,
// Wigner sampling with a bright coherent seed of `seed_photons`), followed by
// binomial loss on each arm. Blocks use independent seeded substreams.
MonteCarloResult monte_carlo_nrf(double gain, double eta_probe, double eta_conjugate,
                                 std::size_t n_samples, std::uint64_t seed,
                                 double seed_photons = 1e4, std::size_t n_blocks = 64);

}  // namespace fwm
