#include "fwm/propagation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fwm/errors.hpp"
#include "fwm/fft.hpp"

namespace fwm {

namespace {

// Sampling-derived band limit for an n-sample axis of pitch d at distance z.
double band_limit_frequency(int n, double d, double wavelength, double z) {
    const double r = 2.0 * std::abs(z) / (n * d);
    return 1.0 / (wavelength * std::sqrt(r * r + 1.0));
}

void check_sampling(const Grid2D& grid, double wavelength, const PropagationPlan& plan) {
    if (plan.aliasing == AliasingPolicy::Ignore || sampling_ok(grid, wavelength, plan)) return;
    std::ostringstream msg;
    msg << "propagation over " << plan.z << " m exceeds the sampling bound "
        << critical_distance(grid, wavelength) << " m without band limiting";
    if (plan.aliasing == AliasingPolicy::Fatal) throw AliasingRisk(msg.str());
    warn(msg.str());
}

}  // namespace

double critical_distance(const Grid2D& grid, double wavelength) {
    return std::min(grid.nx * grid.dx * grid.dx, grid.ny * grid.dy * grid.dy) / wavelength;
}

bool sampling_ok(const Grid2D& grid, double wavelength, const PropagationPlan& plan) {
    return plan.band_limit || std::abs(plan.z) <= critical_distance(grid, wavelength);
}

std::vector<cplx> transfer_function(const Grid2D& grid, double wavelength,
                                    const PropagationPlan& plan) {
    std::vector<cplx> h(grid.size());
    const double z = plan.z;
    const double k = 2.0 * std::numbers::pi / wavelength;
    const double inv_l2 = 1.0 / (wavelength * wavelength);
    const double ux = band_limit_frequency(grid.nx, grid.dx, wavelength, z);
    const double uy = band_limit_frequency(grid.ny, grid.dy, wavelength, z);
    const cplx carrier = std::polar(1.0, k * z);
    for (int my = 0; my < grid.ny; ++my) {
        const double fy = fft_frequency(my, grid.ny, grid.dy);
        for (int mx = 0; mx < grid.nx; ++mx) {
            const double fx = fft_frequency(mx, grid.nx, grid.dx);
            const double f2 = fx * fx + fy * fy;
            cplx& out = h[static_cast<std::size_t>(my) * grid.nx + mx];
            if (z == 0.0) {
                out = 1.0;
                continue;
            }
            if (plan.band_limit && (f2 >= inv_l2 || std::abs(fx) > ux || std::abs(fy) > uy)) {
                out = 0.0;
                continue;
            }
            if (plan.method == PropagationMethod::FresnelTransfer) {
                out = carrier * std::polar(1.0, -std::numbers::pi * wavelength * z * f2);
            } else {
                const double kz2 = inv_l2 - f2;
                if (kz2 > 0.0)
                    out = std::polar(1.0, 2.0 * std::numbers::pi * z * std::sqrt(kz2));
                else
                    out = z > 0.0 ? std::exp(-2.0 * std::numbers::pi * z * std::sqrt(-kz2)) : 0.0;
            }
        }
    }
    return h;
}

void apply_transfer(std::vector<cplx>& spectrum, const Grid2D& grid, double wavelength,
                    const PropagationPlan& plan) {
    if (plan.z == 0.0) return;
    const std::vector<cplx> h = transfer_function(grid, wavelength, plan);
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= h[i];
}

ComplexField2D propagate(const ComplexField2D& field, const PropagationPlan& plan) {
    check_sampling(field.grid, field.wavelength, plan);
    ComplexField2D out = field;
    if (plan.z == 0.0) return out;
    fft2d_forward(out.a, out.grid.nx, out.grid.ny);
    apply_transfer(out.a, out.grid, out.wavelength, plan);
    fft2d_inverse(out.a, out.grid.nx, out.grid.ny);
    return out;
}

std::vector<ComplexField2D> propagate_sequence(const ComplexField2D& field,
                                               const std::vector<double>& z_list,
                                               PropagationPlan plan) {
    for (std::size_t i = 1; i < z_list.size(); ++i)
        if (!(z_list[i] > z_list[i - 1])) throw DomainError("z_list must be strictly increasing");
    std::vector<cplx> spectrum = field.a;
    fft2d_forward(spectrum, field.grid.nx, field.grid.ny);
    std::vector<ComplexField2D> out;
    out.reserve(z_list.size());
    for (double z : z_list) {
        plan.z = z;
        check_sampling(field.grid, field.wavelength, plan);
        ComplexField2D f = field;
        if (z != 0.0) {
            f.a = spectrum;
            apply_transfer(f.a, f.grid, f.wavelength, plan);
            fft2d_inverse(f.a, f.grid.nx, f.grid.ny);
        }
        out.push_back(std::move(f));
    }
    return out;
}

double second_moment_radius_x(const ComplexField2D& field) {
    const Grid2D& g = field.grid;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double i = std::norm(field.at(ix, iy));
            const double x = g.x(ix);
            s0 += i;
            s1 += i * x;
            s2 += i * x * x;
        }
    if (s0 == 0.0) return 0.0;
    const double mean = s1 / s0;
    return 2.0 * std::sqrt(s2 / s0 - mean * mean);
}

}  // namespace fwm
