#pragma once

// Reference computations used by the tests. None of these call into the
// library's propagation, gain or noise code.

#include <complex>
#include <cstdint>
#include <vector>

#include "fwm/field.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Erf-edged slit profile of full width 2*half, edge scale sigma (hard edge at 0).
double soft_slit(double t, double half, double sigma);

// 1-D Fresnel diffraction integral of a soft slit under unit plane-wave
// illumination, uniform along the other axis:
//   U(y) = e^{ikz} / sqrt(i lambda z) * Int t(y') exp(i pi (y - y')^2 / (lambda z)) dy'
// evaluated by adaptive Gauss-Kronrod quadrature on short subintervals.
cplx fresnel_slit(double y, double z, double wavelength, double half, double sigma);

double gaussian_peak_intensity(double power, double radius);   // 2P / (pi w^2)
double rayleigh_range(double radius, double wavelength);       // pi w^2 / lambda
double gaussian_radius(double radius, double z, double wavelength);  // w(z)

// Mismatch for a probe entering at external angle theta into a medium of
// excess index dn, conjugate mirrored: refraction by Snell's law, then
// 2k - 2 k n cos(theta_in).
double snell_mismatch(double theta, double wavelength, double dn);

struct Spot {
    double x, y, sigma, amplitude;
};

// Sum of isotropic Gaussians on the grid plus a constant background.
fwm::Image synthetic_frame(const fwm::Grid2D& grid, const std::vector<Spot>& spots, double background = 0.0);

// Seeded two-mode amplifier sampled in the Wigner picture with beam-splitter
// loss mixing in vacuum noise. Returns NRF and its standard error from
// independent batches.
struct NrfEstimate {
    double nrf;
    double standard_error;
};
NrfEstimate sampled_nrf(double gain, double eta_probe, double eta_conjugate, std::size_t samples,
                        std::uint64_t seed, double seed_photons = 1e4);

double lorentzian(double x, double center, double fwhm);  // peak 1

double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace oracle
