#include "fwm/spectra.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fwm/errors.hpp"

namespace fwm {

namespace {

double raw_response(const GainSpectrumModel& m, const std::vector<Resonance>& res, double delta,
                    double angle) {
    double s = 0.0;
    for (const Resonance& r : res)
        s += r.weight * lineshape(delta, r.center, r.fwhm, m.lineshape) * admittance(m, r.family, angle);
    return s;
}

double raw_peak_spectrum(const GainSpectrumModel& m, const std::vector<Resonance>& res, double delta) {
    double s = 0.0;
    for (const Resonance& r : res) s += r.weight * lineshape(delta, r.center, r.fwhm, m.lineshape);
    return s;
}

// Maximum of f on [lo, hi]: dense scan followed by Brent refinement around the best sample.
template <class F>
std::pair<double, double> maximize_1d(F f, double lo, double hi, int samples = 401) {
    double best_x = lo, best = f(lo);
    const double step = (hi - lo) / (samples - 1);
    for (int i = 1; i < samples; ++i) {
        const double x = lo + i * step;
        const double v = f(x);
        if (v > best) best = v, best_x = x;
    }
    const double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
    auto r = boost::math::tools::brent_find_minima([&](double x) { return -f(x); }, a, b, 52);
    if (-r.second > best) return {r.first, -r.second};
    return {best_x, best};
}

struct DoubletResidual {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    const std::vector<double>& x;
    const std::vector<double>& y;

    int inputs() const { return 6; }
    int values() const { return static_cast<int>(x.size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            double f = 0.0;
            for (int j = 0; j < 2; ++j) {
                const double u = (x[i] - p[3 * j + 1]) / p[3 * j + 2];
                f += p[3 * j] / (1.0 + u * u);
            }
            r[static_cast<Eigen::Index>(i)] = f - y[i];
        }
        return 0;
    }

    // Parameters per lobe: amplitude, center, half-width.
    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            for (int j = 0; j < 2; ++j) {
                const double a = p[3 * j], h = p[3 * j + 2];
                const double u = (x[i] - p[3 * j + 1]) / h;
                const double d = 1.0 + u * u;
                const auto row = static_cast<Eigen::Index>(i);
                jac(row, 3 * j) = 1.0 / d;
                jac(row, 3 * j + 1) = a * 2.0 * u / (h * d * d);
                jac(row, 3 * j + 2) = a * 2.0 * u * u / (h * d * d);
            }
        return 0;
    }
};

}  // namespace

void GainSpectrumModel::validate() const {
    if (!(linewidth1 > 0.0) || !(linewidth2 > 0.0)) throw DomainError("linewidths must be positive");
    if (!(slit_width > 0.0) || !(reference_slit > 0.0) || !(weight_crossover_slit > 0.0))
        throw DomainError("slit widths must be positive");
    if (light_shift_slope < 0.0) throw DomainError("light-shift slope must be non-negative");
    if (!(off_axis_width > 0.0) || !(near_axis_width > 0.0) || off_axis_radius < 0.0)
        throw DomainError("admittance widths must be positive");
}

double splitting(const GainSpectrumModel& m, double pump_power) {
    return (m.reference_slit / m.slit_width) * (m.splitting_intercept + m.light_shift_slope * pump_power);
}

std::vector<Resonance> resonances(const GainSpectrumModel& m, double pump_power) {
    if (!m.structured) return {{m.centroid, m.linewidth2, 1.0, ModeFamily::Central}};
    const double s = splitting(m, pump_power);
    const double w1 = std::pow(m.slit_width / m.weight_crossover_slit, m.weight_exponent);
    return {{m.centroid - s / 2, m.linewidth1, w1, ModeFamily::Satellite},
            {m.centroid + s / 2, m.linewidth2, 1.0, ModeFamily::Central}};
}

double lineshape(double delta, double center, double fwhm, Lineshape shape) {
    const double u = (delta - center) / (fwhm / 2);
    if (shape == Lineshape::Gaussian) return std::exp(-std::numbers::ln2 * u * u);
    return 1.0 / (1.0 + u * u);
}

double admittance(const GainSpectrumModel& m, ModeFamily family, double angle) {
    if (!m.transverse_filters) return 1.0;
    if (family == ModeFamily::Central) {
        const double u = angle / m.near_axis_width;
        return std::exp(-u * u);
    }
    const double u = (angle - m.off_axis_radius) / m.off_axis_width;
    return std::exp(-u * u);
}

double response_normalization(const GainSpectrumModel& m, double pump_power) {
    const auto res = resonances(m, pump_power);
    double lo = res.front().center, hi = res.front().center;
    double width = 0.0;
    for (const Resonance& r : res) {
        lo = std::min(lo, r.center);
        hi = std::max(hi, r.center);
        width = std::max(width, r.fwhm);
    }
    lo -= 2 * width;
    hi += 2 * width;
    if (!m.transverse_filters) {
        return maximize_1d([&](double d) { return raw_peak_spectrum(m, res, d); }, lo, hi).second;
    }
    // Coordinate ascent over (delta, angle); the surface is smooth and low dimensional.
    const double qmax = m.off_axis_radius + 4 * m.off_axis_width + 4 * m.near_axis_width;
    double best = 0.0, d = res.front().center, q = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
        auto [qq, vq] = maximize_1d([&](double a) { return raw_response(m, res, d, a); }, 0.0, qmax);
        q = qq;
        auto [dd, vd] = maximize_1d([&](double x) { return raw_response(m, res, x, q); }, lo, hi);
        d = dd;
        if (vd <= best * (1 + 1e-15)) {
            best = std::max(best, vd);
            break;
        }
        best = std::max(vq, vd);
    }
    return best;
}

double spectral_response(const GainSpectrumModel& m, double delta, double angle, double pump_power) {
    const auto res = resonances(m, pump_power);
    const double n = response_normalization(m, pump_power);
    return std::clamp(raw_response(m, res, delta, angle) / n, 0.0, 1.0);
}

std::vector<double> mode_strengths(const GainSpectrumModel& m, double delta, double pump_power) {
    const auto res = resonances(m, pump_power);
    const double n = response_normalization(m, pump_power);
    std::vector<double> a;
    for (const Resonance& r : res) a.push_back(r.weight * lineshape(delta, r.center, r.fwhm, m.lineshape) / n);
    return a;
}

std::vector<double> doublet_spectrum(const GainSpectrumModel& m, const std::vector<double>& deltas,
                                     double pump_power) {
    const auto res = resonances(m, pump_power);
    double lo = res.front().center - 2 * m.linewidth1, hi = res.back().center + 2 * m.linewidth2;
    const double peak = maximize_1d([&](double d) { return raw_peak_spectrum(m, res, d); }, lo, hi).second;
    std::vector<double> s;
    s.reserve(deltas.size());
    for (double d : deltas) s.push_back(raw_peak_spectrum(m, res, d) / peak);
    return s;
}

double relative_peak_gain(const GainSpectrumModel& m) {
    return std::pow(m.slit_width / m.reference_slit, m.gain_slit_exponent);
}

bool doublet_resolved(double separation, double fwhm1, double fwhm2) {
    return std::abs(separation) >= 0.5 * std::min(fwhm1, fwhm2);
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
    // Interior maxima only; a flat top counts once, at its middle sample.
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < y.size();) {
        std::size_t j = i;
        while (j + 1 < y.size() && y[j + 1] == y[i]) ++j;
        if (y[i - 1] < y[i] && j + 1 < y.size() && y[j + 1] < y[j]) out.push_back((i + j) / 2);
        i = j + 1;
    }
    return out;
}

DoubletFit fit_doublet(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 7) throw DegenerateFit("doublet fit needs at least 7 points");
    // Start from the global maximum; place lobes either side of it at a quarter of
    // the observed full width, which is close to the split for overlapping lines.
    const std::size_t imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double ymax = y[imax];
    double left = x.front(), right = x.back();
    for (std::size_t i = imax; i-- > 0;)
        if (y[i] < ymax / 2) { left = x[i]; break; }
    for (std::size_t i = imax; i < x.size(); ++i)
        if (y[i] < ymax / 2) { right = x[i]; break; }
    const double full = right - left;
    const double mid = 0.5 * (left + right);

    DoubletResidual f{x, y};
    Eigen::VectorXd p(6);
    p << 0.6 * ymax, mid - full / 4, full / 4, 0.6 * ymax, mid + full / 4, full / 4;
    Eigen::LevenbergMarquardt<DoubletResidual> lm(f);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 20000;
    const auto status = lm.minimize(p);
    if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
        status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation || !p.allFinite())
        throw DegenerateFit("doublet fit did not converge");

    LorentzLobe a{p[0], p[1], 2 * std::abs(p[2])}, b{p[3], p[4], 2 * std::abs(p[5])};
    if (a.center > b.center) std::swap(a, b);

    Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
    f(p, r);
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double tot = 0.0;
    for (double v : y) tot += (v - mean) * (v - mean);
    const double r2 = tot > 0.0 ? 1.0 - r.squaredNorm() / tot : 1.0;
    return {a, b, r2};
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DegenerateFit("linear fit needs at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DegenerateFit("all abscissae are equal");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (slope * x[i] + intercept);
        res += e * e;
    }
    return {slope, intercept, syy > 0.0 ? 1.0 - res / syy : 1.0};
}

std::vector<PowerPoint> splitting_vs_power(const std::vector<double>& powers, const GainSpectrumModel& m) {
    if (powers.size() < 3) throw DegenerateFit("splitting_vs_power needs at least 3 powers");
    if (!m.structured) throw DomainError("an unstructured pump has no doublet to measure");
    const double span = 4 * std::max(m.linewidth1, m.linewidth2);
    std::vector<double> deltas;
    for (int i = 0; i <= 400; ++i) deltas.push_back(m.centroid - span + i * (2 * span / 400));
    std::vector<PowerPoint> out;
    for (double p : powers) {
        const DoubletFit fit = fit_doublet(deltas, doublet_spectrum(m, deltas, p));
        out.push_back({p, fit.separation()});
    }
    return out;
}

}  // namespace fwm
