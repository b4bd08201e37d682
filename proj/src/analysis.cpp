#include "fwm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

#include "fwm/errors.hpp"

namespace fwm {

namespace {

// Running maximum over a window of +-r samples along one axis (monotone deque).
void sliding_max(const double* in, double* out, int n, int stride, int r) {
    std::deque<int> dq;
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int hi = std::min(n - 1, i + r);
        for (; next <= hi; ++next) {
            while (!dq.empty() && in[dq.back() * stride] <= in[next * stride]) dq.pop_back();
            dq.push_back(next);
        }
        while (dq.front() < i - r) dq.pop_front();
        out[i * stride] = in[dq.front() * stride];
    }
}

std::vector<double> max_filter(const Image& img, int rx, int ry) {
    const int nx = img.grid.nx, ny = img.grid.ny;
    std::vector<double> tmp(img.v.size()), out(img.v.size());
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t o = static_cast<std::size_t>(iy) * nx;
        sliding_max(img.v.data() + o, tmp.data() + o, nx, 1, rx);
    }
    for (int ix = 0; ix < nx; ++ix) sliding_max(tmp.data() + ix, out.data() + ix, ny, nx, ry);
    return out;
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

void label(std::vector<Region>& regions) {
    std::vector<std::size_t> order(regions.size());
    std::iota(order.begin(), order.end(), 0);
    auto by_x = [&](std::size_t a, std::size_t b) {
        if (regions[a].cx != regions[b].cx) return regions[a].cx < regions[b].cx;
        return regions[a].cy > regions[b].cy;
    };
    std::sort(order.begin(), order.end(), by_x);
    if (regions.size() == 6) {
        auto top_first = [&](std::size_t a, std::size_t b) { return regions[a].cy > regions[b].cy; };
        std::sort(order.begin(), order.begin() + 3, top_first);
        std::sort(order.begin() + 3, order.end(), top_first);
        for (std::size_t i = 0; i < 6; ++i) regions[order[i]].id = "I" + std::to_string(i + 1);
    } else {
        for (std::size_t i = 0; i < order.size(); ++i) regions[order[i]].id = "S" + std::to_string(i + 1);
    }
    std::vector<Region> sorted;
    for (std::size_t i : order) sorted.push_back(std::move(regions[i]));
    regions = std::move(sorted);
}

}  // namespace

std::vector<Region> find_maxima(const Image& image, double min_separation, double threshold_fraction) {
    const Grid2D& g = image.grid;
    if (image.v.empty()) throw NoSpots("empty image");
    for (double v : image.v)
        if (v < 0.0 || !std::isfinite(v)) throw DomainError("image must be non-negative and finite");
    const double peak = *std::max_element(image.v.begin(), image.v.end());
    const double med = median(image.v);
    if (!(peak > med)) throw NoSpots("image is flat");
    const double threshold = med + threshold_fraction * (peak - med);

    const int rx = std::max(1, static_cast<int>(min_separation / g.dx));
    const int ry = std::max(1, static_cast<int>(min_separation / g.dy));
    const std::vector<double> mx = max_filter(image, rx, ry);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < image.v.size(); ++i)
        if (image.v[i] >= threshold && image.v[i] == mx[i]) cand.push_back(i);
    std::stable_sort(cand.begin(), cand.end(),
                     [&](std::size_t a, std::size_t b) { return image.v[a] > image.v[b]; });

    std::vector<Region> out;
    for (std::size_t i : cand) {
        const double x = g.x(static_cast<int>(i % g.nx)), y = g.y(static_cast<int>(i / g.nx));
        bool keep = true;
        for (const Region& r : out)
            if (std::hypot(x - r.cx, y - r.cy) < min_separation) {
                keep = false;
                break;
            }
        if (keep) out.push_back(Region{"", x, y, image.v[i], 0.0, {}});
    }
    return out;
}

SpotSet detect_spots(const Image& image, double min_separation, std::optional<int> n_expected,
                     const SpotOptions& options) {
    const Grid2D& g = image.grid;
    SpotSet set{g, find_maxima(image, min_separation, options.threshold_fraction), false, ""};
    std::vector<Region>& regions = set.regions;
    if (regions.empty()) throw NoSpots("no maxima above threshold");

    const bool rect = options.shape == RoiShape::Rectangle;
    auto dist = [&](double dx, double dy) { return rect ? std::max(std::abs(dx), std::abs(dy)) : std::hypot(dx, dy); };

    // Maxima sit on samples; integer offsets keep ownership translation-exact.
    std::vector<int> px(regions.size()), py(regions.size());
    for (std::size_t k = 0; k < regions.size(); ++k) {
        px[k] = static_cast<int>(std::lround(regions[k].cx / g.dx)) + g.nx / 2;
        py[k] = static_cast<int>(std::lround(regions[k].cy / g.dy)) + g.ny / 2;
    }

    // Voronoi ownership in the ROI metric; ties go to the brighter spot.
    std::vector<int> owner(g.size());
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            int best = 0;
            double bd = dist((ix - px[0]) * g.dx, (iy - py[0]) * g.dy);
            for (std::size_t k = 1; k < regions.size(); ++k) {
                const double d = dist((ix - px[k]) * g.dx, (iy - py[k]) * g.dy);
                if (d < bd) bd = d, best = static_cast<int>(k);
            }
            owner[static_cast<std::size_t>(iy) * g.nx + ix] = best;
        }

    const double pixel = g.pixel_area();
    const double start = rect ? std::sqrt(options.target_area) / 2 : std::sqrt(options.target_area / std::numbers::pi);
    for (std::size_t k = 0; k < regions.size(); ++k) {
        Region& r = regions[k];
        const int cx = px[k], cy = py[k];
        for (double half = start;; half += std::min(g.dx, g.dy)) {
            const int hx = static_cast<int>(half / g.dx), hy = static_cast<int>(half / g.dy);
            r.pixels.clear();
            for (int iy = std::max(0, cy - hy); iy <= std::min(g.ny - 1, cy + hy); ++iy)
                for (int ix = std::max(0, cx - hx); ix <= std::min(g.nx - 1, cx + hx); ++ix) {
                    const std::size_t i = static_cast<std::size_t>(iy) * g.nx + ix;
                    if (owner[i] != static_cast<int>(k)) continue;
                    if (!rect && std::hypot((ix - cx) * g.dx, (iy - cy) * g.dy) > half) continue;
                    r.pixels.push_back(i);
                }
            r.area = static_cast<double>(r.pixels.size()) * pixel;
            const bool covers_grid = cx - hx <= 0 && cy - hy <= 0 && cx + hx >= g.nx - 1 && cy + hy >= g.ny - 1;
            if (r.area >= options.target_area || covers_grid) break;
        }
        if (std::abs(r.area - options.target_area) > 0.1 * options.target_area) {
            set.best_effort = true;
            set.warning += std::string(set.warning.empty() ? "" : "; ") + "region area " +
                           std::to_string(r.area * 1e6) + " mm^2 misses the target";
        }
    }
    if (n_expected && static_cast<int>(regions.size()) != *n_expected) {
        set.best_effort = true;
        set.warning += std::string(set.warning.empty() ? "" : "; ") + "found " + std::to_string(regions.size()) +
                       " spots, expected " + std::to_string(*n_expected);
    }
    label(regions);
    return set;
}

std::vector<std::vector<double>> integrate_regions(const std::vector<Image>& frames, const SpotSet& spots,
                                                   int frames_per_point) {
    if (frames_per_point < 1) throw DomainError("frames_per_point must be >= 1");
    if (frames.size() % static_cast<std::size_t>(frames_per_point) != 0)
        throw DomainError("frame count is not a multiple of frames_per_point");
    for (const Image& f : frames)
        if (!(f.grid == spots.grid)) throw GeometryMismatch("frame geometry differs from the spot map");
    const double pixel = spots.grid.pixel_area();
    const std::size_t points = frames.size() / static_cast<std::size_t>(frames_per_point);
    std::vector<std::vector<double>> curves(spots.regions.size(), std::vector<double>(points, 0.0));
    for (std::size_t r = 0; r < spots.regions.size(); ++r)
        for (std::size_t p = 0; p < points; ++p) {
            double acc = 0.0;
            for (int k = 0; k < frames_per_point; ++k) {
                const Image& f = frames[p * frames_per_point + k];
                double s = 0.0;
                for (std::size_t i : spots.regions[r].pixels) s += f.v[i];
                acc += s * pixel;
            }
            curves[r][p] = acc / frames_per_point;
        }
    return curves;
}

CorrelationReport correlate(const std::vector<std::vector<double>>& curves, const std::vector<std::string>& ids,
                            double threshold) {
    const std::size_t n = curves.size();
    CorrelationReport rep;
    rep.ids = ids;
    if (rep.ids.empty())
        for (std::size_t i = 0; i < n; ++i) rep.ids.push_back("C" + std::to_string(i + 1));
    if (rep.ids.size() != n) throw DomainError("one id per curve required");
    if (n == 0) return rep;
    const std::size_t m = curves[0].size();
    if (m < 3) throw DomainError("correlation needs at least 3 scan points");
    std::vector<std::vector<double>> centered(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (curves[i].size() != m) throw DomainError("curves differ in length");
        const double mean = std::accumulate(curves[i].begin(), curves[i].end(), 0.0) / static_cast<double>(m);
        for (double v : curves[i]) centered[i].push_back(v - mean);
        const bool flat = std::all_of(curves[i].begin(), curves[i].end(), [&](double v) { return v == curves[i][0]; });
        if (flat) throw DegenerateCurve("curve " + rep.ids[i] + " has zero variance");
    }
    rep.pearson.assign(n, std::vector<double>(n, 0.0));
    rep.covariance.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double sxy = 0.0, sxx = 0.0, syy = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                sxy += centered[i][k] * centered[j][k];
                sxx += centered[i][k] * centered[i][k];
                syy += centered[j][k] * centered[j][k];
            }
            const double r = i == j ? 1.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
            rep.pearson[i][j] = rep.pearson[j][i] = r;
            rep.covariance[i][j] = rep.covariance[j][i] = sxy / static_cast<double>(m - 1);
        }
    // Union-find over pairs above threshold.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rep.pearson[i][j] >= threshold) parent[find(static_cast<int>(j))] = find(static_cast<int>(i));
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int root = find(static_cast<int>(i));
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(rep.groups.size());
            rep.groups.emplace_back();
        }
        rep.groups[slot[root]].push_back(static_cast<int>(i));
    }
    return rep;
}

double mirror_correlation(const Image& image) {
    const Grid2D& g = image.grid;
    const double n = static_cast<double>(image.v.size());
    const double mean = std::accumulate(image.v.begin(), image.v.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double a = image.at(ix, iy) - mean;
            const double b = image.at((g.nx - ix) % g.nx, iy) - mean;
            sxy += a * b;
            sxx += a * a;
        }
    return sxx > 0.0 ? sxy / sxx : 1.0;
}

}  // namespace fwm
