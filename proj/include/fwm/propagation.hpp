#pragma once

#include <vector>

#include "fwm/field.hpp"

namespace fwm {

enum class PropagationMethod { AngularSpectrum, FresnelTransfer };
enum class AliasingPolicy { Ignore, Warn, Fatal };

struct PropagationPlan {
    double z = 0.0;
    PropagationMethod method = PropagationMethod::AngularSpectrum;
    bool band_limit = true;
    AliasingPolicy aliasing = AliasingPolicy::Warn;

    bool operator==(const PropagationPlan&) const = default;
};

// Largest |z| for which the transfer function is adequately sampled without
// band limiting: min(N d^2) / lambda over both axes.
double critical_distance(const Grid2D& grid, double wavelength);
bool sampling_ok(const Grid2D& grid, double wavelength, const PropagationPlan& plan);

// Transfer function sampled on the DFT layout of `grid`.
std::vector<cplx> transfer_function(const Grid2D& grid, double wavelength, const PropagationPlan& plan);

// Multiplies a forward-transformed field by the transfer function in place.
void apply_transfer(std::vector<cplx>& spectrum, const Grid2D& grid, double wavelength,
                    const PropagationPlan& plan);

ComplexField2D propagate(const ComplexField2D& field, const PropagationPlan& plan);

// One forward transform, then one transfer per distance. z_list must be strictly increasing.
std::vector<ComplexField2D> propagate_sequence(const ComplexField2D& field,
                                               const std::vector<double>& z_list,
                                               PropagationPlan plan = {});

// 1/e^2 intensity radius along x through the second moment of a field's intensity.
double second_moment_radius_x(const ComplexField2D& field);

}  // namespace fwm
