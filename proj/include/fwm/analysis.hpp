#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fwm/field.hpp"

namespace fwm {

enum class RoiShape { Rectangle, Circle };

struct SpotOptions {
    double threshold_fraction = 0.05;  // of (max - median) above the median
    double target_area = 1.4e-6;       // m^2
    RoiShape shape = RoiShape::Rectangle;

    bool operator==(const SpotOptions&) const = default;
};

struct Region {
    std::string id;
    double cx = 0.0;  // m, pixel of the local maximum
    double cy = 0.0;
    double peak = 0.0;
    double area = 0.0;  // m^2
    std::vector<std::size_t> pixels;  // row-major indices into the image
};

struct SpotSet {
    Grid2D grid;
    std::vector<Region> regions;
    bool best_effort = false;  // expected count not met or an ROI could not reach its area
    std::string warning;
};

// Local maxima above an adaptive threshold, greedy non-maximum suppression at
// min_separation, then ROIs grown to the target area inside each spot's
// Voronoi cell. Six spots get the I1..I6 labels (conjugates I1-I3 on the -x
// side, probes I4-I6 on the +x side, each ordered top to bottom); other counts
// get S1..Sn ordered by x then y.
SpotSet detect_spots(const Image& image, double min_separation, std::optional<int> n_expected = std::nullopt,
                     const SpotOptions& options = {});

// Maxima that survive suppression, without ROI construction. Sorted by decreasing peak.
std::vector<Region> find_maxima(const Image& image, double min_separation, double threshold_fraction);

// curves[r][k]: masked sum times pixel area for region r, frame (or block) k.
// With frames_per_point > 1, consecutive groups of frames are averaged.
std::vector<std::vector<double>> integrate_regions(const std::vector<Image>& frames, const SpotSet& spots,
                                                   int frames_per_point = 1);

struct CorrelationReport {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> pearson;
    std::vector<std::vector<double>> covariance;
    std::vector<std::vector<int>> groups;  // connected components at r >= threshold
};

CorrelationReport correlate(const std::vector<std::vector<double>>& curves,
                            const std::vector<std::string>& ids = {}, double threshold = 0.9);

// Pearson correlation between an image and its mirror about the vertical axis x = 0.
double mirror_correlation(const Image& image);

}  // namespace fwm
