#pragma once

#include <vector>

#include "fwm/field.hpp"

namespace fwm {

// In-place 2-D DFT over a row-major nx-by-ny array. The inverse is scaled by
// 1/(nx*ny). Plans are cached per shape and shared between threads.
void fft2d_forward(std::vector<cplx>& data, int nx, int ny);
void fft2d_inverse(std::vector<cplx>& data, int nx, int ny);

// Spatial frequency (cycles per meter) of DFT bin m on an n-sample axis of pitch d.
inline double fft_frequency(int m, int n, double d) {
    return (m < n / 2 ? m : m - n) / (n * d);
}

}  // namespace fwm
