#include "fwm/field.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "fwm/errors.hpp"

namespace fwm {

namespace {

void default_sink(const std::string& m) { std::cerr << "warning: " << m << '\n'; }
WarningSink g_sink = default_sink;

// Fraction of a 1-D Gaussian intensity exp(-2 t^2 / w^2) falling inside [lo, hi].
double gaussian_fraction_1d(double lo, double hi, double c, double w) {
    const double s = std::sqrt(2.0) / w;
    return 0.5 * (std::erf((hi - c) * s) - std::erf((lo - c) * s));
}

double edge_profile(double t, double half, double sigma) {
    if (sigma <= 0.0) return std::abs(t) <= half ? 1.0 : 0.0;
    return 0.5 * (std::erf((t + half) / sigma) - std::erf((t - half) / sigma));
}

}  // namespace

void set_warning_sink(WarningSink sink) { g_sink = sink ? sink : default_sink; }
void warn(const std::string& message) { g_sink(message); }

void Grid2D::validate() const {
    if (nx < 2 || ny < 2 || nx % 2 || ny % 2)
        throw DomainError("grid sample counts must be even and >= 2, got " + std::to_string(nx) +
                          "x" + std::to_string(ny));
    if (!(dx > 0.0) || !(dy > 0.0)) throw DomainError("grid pitch must be positive");
}

ComplexField2D::ComplexField2D(const Grid2D& g, double lambda) : grid(g), wavelength(lambda) {
    grid.validate();
    if (!(lambda > 0.0)) throw DomainError("wavelength must be positive");
    a.assign(grid.size(), cplx{});
}

double ComplexField2D::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

ComplexField2D make_gaussian(const BeamSpec& spec, const Grid2D& grid, double wavelength) {
    if (!(spec.waist_diameter > 0.0)) throw DomainError("beam waist diameter must be positive");
    if (spec.power < 0.0) throw DomainError("beam power must be non-negative");
    ComplexField2D f(grid, wavelength);
    const double w = spec.waist_diameter / 2.0;

    // Sample cells cover [x - dx/2, x + dx/2]; the grid spans nx cells.
    const double x0 = grid.x(0) - grid.dx / 2, x1 = grid.x(grid.nx - 1) + grid.dx / 2;
    const double y0 = grid.y(0) - grid.dy / 2, y1 = grid.y(grid.ny - 1) + grid.dy / 2;
    const double captured = gaussian_fraction_1d(x0, x1, spec.center_x, w) *
                            gaussian_fraction_1d(y0, y1, spec.center_y, w);
    if (captured < 0.999)
        throw GridTooSmall("grid captures only " + std::to_string(captured * 100.0) +
                           "% of the beam power (need 99.9%)");
    if (spec.power == 0.0) return f;

    const double peak = std::sqrt(2.0 * spec.power / (std::numbers::pi * w * w));
    const double kx = f.wavenumber() * std::sin(spec.tilt);
    std::vector<cplx> row(grid.nx);
    std::vector<double> gy(grid.ny);
    for (int ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x(ix) - spec.center_x;
        const double amp = std::exp(-x * x / (w * w));
        row[ix] = spec.tilt == 0.0 ? cplx(amp, 0.0) : std::polar(amp, kx * grid.x(ix));
    }
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy) - spec.center_y;
        gy[iy] = peak * std::exp(-y * y / (w * w));
    }
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) f.at(ix, iy) = gy[iy] * row[ix];
    return f;
}

double slit_transmission(const SlitSpec& slit, double x, double y) {
    const double along = slit.axis == Axis::X ? x : y;
    const double across = slit.axis == Axis::X ? y : x;
    double t = edge_profile(along - slit.center, slit.width / 2, slit.edge_width);
    if (std::isfinite(slit.height)) t *= edge_profile(across, slit.height / 2, slit.edge_width);
    return t;
}

ComplexField2D apply_aperture(const ComplexField2D& field, const SlitSpec& slit) {
    if (!(slit.width > 0.0)) throw DomainError("slit width must be positive");
    ComplexField2D out = field;
    const Grid2D& g = field.grid;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double t = slit_transmission(slit, g.x(ix), g.y(iy));
            if (t == 0.0)
                out.at(ix, iy) = cplx{};
            else if (t != 1.0)
                out.at(ix, iy) *= t;
        }
    return out;
}

double total_power(const ComplexField2D& field) {
    double s = 0.0;
    for (const cplx& v : field.a) s += std::norm(v);
    return s * field.grid.pixel_area();
}

Image intensity_image(const ComplexField2D& field, bool normalize) {
    Image img{field.grid, std::vector<double>(field.a.size())};
    std::transform(field.a.begin(), field.a.end(), img.v.begin(),
                   [](const cplx& v) { return std::norm(v); });
    if (normalize) {
        const double m = *std::max_element(img.v.begin(), img.v.end());
        if (m > 0.0)
            for (double& v : img.v) v /= m;
    }
    return img;
}

double image_sum(const Image& img) {
    double s = 0.0;
    for (double v : img.v) s += v;
    return s;
}

void require_same_grid(const ComplexField2D& a, const ComplexField2D& b, const char* what) {
    if (!(a.grid == b.grid) || a.wavelength != b.wavelength)
        throw GridMismatch(std::string(what) + ": fields do not share grid and wavelength");
}

}  // namespace fwm
