#pragma once

#include <string>

#include "fwm/field.hpp"

namespace fwm {

// Binary PGM (P5) scaled so the image maximum maps to full scale, plus a
// "<path>.hdr" sidecar recording grid pitch, extent and the scale factor.
void write_pgm(const std::string& path, const Image& img, int bits = 16);

// Reads a P5 file. Pixel pitch comes from the sidecar when present, else from
// `fallback_pitch` (meters); values are rescaled by the sidecar scale if any.
Image read_pgm(const std::string& path, double fallback_pitch = 0.0);

// Sub-image of width x height meters centered on (cx, cy). Dimensions are
// rounded to an even number of samples.
Image crop(const Image& img, double cx, double cy, double width, double height);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace fwm
