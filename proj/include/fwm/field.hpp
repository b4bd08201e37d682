#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace fwm {

using cplx = std::complex<double>;

// Uniform transverse grid, origin at sample (nx/2, ny/2).
struct Grid2D {
    int nx = 1024;
    int ny = 1024;
    double dx = 4.3e-6;
    double dy = 4.3e-6;

    void validate() const;  // throws DomainError
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double x(int ix) const { return (ix - nx / 2) * dx; }
    double y(int iy) const { return (iy - ny / 2) * dy; }
    double width() const { return nx * dx; }
    double height() const { return ny * dy; }
    double pixel_area() const { return dx * dy; }
    bool operator==(const Grid2D&) const = default;
};

// Row-major samples, index iy * nx + ix. |a|^2 is intensity in W/m^2.
struct ComplexField2D {
    Grid2D grid;
    double wavelength = 794.98e-9;
    std::vector<cplx> a;

    ComplexField2D() = default;
    ComplexField2D(const Grid2D& g, double lambda);

    cplx& at(int ix, int iy) { return a[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    const cplx& at(int ix, int iy) const { return a[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    double wavenumber() const;
};

struct BeamSpec {
    double waist_diameter = 900e-6;  // 1/e^2 intensity diameter
    double power = 0.2;
    double center_x = 0.0;
    double center_y = 0.0;
    double tilt = 0.0;  // propagation tilt in the x-z plane, radians

    bool operator==(const BeamSpec&) const = default;
};

enum class Axis { X, Y };

struct SlitSpec {
    double width = 530e-6;                                       // opening along `axis`
    double height = std::numeric_limits<double>::infinity();     // opening along the other axis
    double center = 0.0;                                         // offset along `axis`
    Axis axis = Axis::X;
    double edge_width = 0.0;  // erf apodization scale; 0 gives a hard edge

    bool operator==(const SlitSpec&) const = default;
};

// Real image on a grid, same indexing as ComplexField2D.
struct Image {
    Grid2D grid;
    std::vector<double> v;

    double& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    double at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * grid.nx + ix]; }
};

ComplexField2D make_gaussian(const BeamSpec& spec, const Grid2D& grid, double wavelength);
ComplexField2D apply_aperture(const ComplexField2D& field, const SlitSpec& slit);
double slit_transmission(const SlitSpec& slit, double x, double y);

double total_power(const ComplexField2D& field);
Image intensity_image(const ComplexField2D& field, bool normalize = false);
double image_sum(const Image& img);

void require_same_grid(const ComplexField2D& a, const ComplexField2D& b, const char* what);

}  // namespace fwm
