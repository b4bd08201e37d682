#include "fwm/noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fwm/errors.hpp"
#include "fwm/parallel.hpp"

namespace fwm {

namespace {

constexpr double kElectronCharge = 1.602176634e-19;
constexpr double kPlanck = 6.62607015e-34;
constexpr double kLightSpeed = 299792458.0;

void require_gain(double g) {
    if (!(g >= 1.0)) throw DomainError("amplifier gain must be >= 1, got " + std::to_string(g));
}

void require_efficiency(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("efficiency must lie in [0, 1]");
}

struct BlockSums {
    double n = 0.0;
    double sum_d = 0.0;
    double sum_d2 = 0.0;
    double sum_total = 0.0;

    double nrf() const {
        const double mean = sum_d / n;
        return (sum_d2 / n - mean * mean) * n / (n - 1.0) / (sum_total / n);
    }
};

}  // namespace

double NoiseModel::gain() const { return probe_power / (probe_power - conjugate_power); }

void NoiseModel::validate() const {
    if (!(probe_power > 0.0) || conjugate_power < 0.0 || !(conjugate_power < probe_power))
        throw DomainError("seeded amplifier needs 0 <= conjugate power < probe power");
    require_efficiency(eta_probe);
    require_efficiency(eta_conjugate);
    if (!(band_low > 0.0) || !(band_high > band_low)) throw DomainError("invalid squeezing band");
    if (!(rbw > 0.0) || !(vbw > 0.0)) throw DomainError("analyzer bandwidths must be positive");
}

double nrf_ideal(double gain) {
    require_gain(gain);
    return 1.0 / (2.0 * gain - 1.0);
}

double nrf_lossy(double gain, double eta_p, double eta_c) {
    require_gain(gain);
    require_efficiency(eta_p);
    require_efficiency(eta_c);
    // Per seed photon: probe mean G, conjugate mean G-1; bright-seed variances
    // G(2G-1) and (G-1)(2G-1), covariance 2G(G-1); binomial loss on each arm.
    const double g = gain, h = gain - 1.0;
    const double var = eta_p * eta_p * g * (2 * g - 1) + eta_p * (1 - eta_p) * g +
                       eta_c * eta_c * h * (2 * g - 1) + eta_c * (1 - eta_c) * h -
                       4.0 * eta_p * eta_c * g * h;
    const double mean = eta_p * g + eta_c * h;
    if (mean == 0.0) return 1.0;
    return var / mean;
}

double efficiency_for_nrf(double gain, double nrf) {
    const double ideal = nrf_ideal(gain);
    if (ideal == 1.0) throw DomainError("no squeezing at unit gain");
    return (1.0 - nrf) / (1.0 - ideal);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double shot_noise_dbm(const NoiseModel& m) {
    const double responsivity = kElectronCharge * m.wavelength / (kPlanck * kLightSpeed);
    const double current = responsivity * (m.eta_probe * m.probe_power + m.eta_conjugate * m.conjugate_power);
    const double v2 = 2.0 * kElectronCharge * current * m.rbw * m.transimpedance * m.transimpedance;
    return to_db(v2 / m.load_impedance / 1e-3);
}

std::vector<double> log_frequency_grid(double f_start, double f_stop, int points) {
    if (points < 2 || !(f_start > 0.0) || !(f_stop > f_start)) throw DomainError("invalid frequency grid");
    std::vector<double> f(points);
    const double a = std::log(f_start), b = std::log(f_stop);
    for (int i = 0; i < points; ++i) f[i] = std::exp(a + (b - a) * i / (points - 1));
    f.front() = f_start;
    f.back() = f_stop;
    return f;
}

NoiseTrace synthesize_trace(const NoiseModel& m, const std::vector<double>& frequencies) {
    m.validate();
    const double g = m.gain();
    const double nrf = nrf_lossy(g, m.eta_probe, m.eta_conjugate);
    const double probe_excess = 2.0 * g - 1.0;
    const double offset = m.absolute ? shot_noise_dbm(m) : 0.0;
    std::mt19937_64 rng(m.seed);
    std::normal_distribution<double> jitter(0.0, 1.0);

    NoiseTrace t;
    for (double f : frequencies) {
        if (!(f > 0.0)) throw DomainError("sideband frequencies must be positive");
        const double r = m.technical_knee / f;
        const double technical = f < m.technical_knee ? m.technical_level * (r * r - 1.0) : 0.0;
        double diff = to_db(nrf + technical);
        double snl = 0.0;
        double probe = to_db(probe_excess + technical);
        if (m.jitter_db > 0.0) {
            diff += m.jitter_db * jitter(rng);
            snl += m.jitter_db * jitter(rng);
            probe += m.jitter_db * jitter(rng);
        }
        t.frequency.push_back(f);
        t.electronic.push_back(m.electronic_floor_db + offset);
        t.difference.push_back(diff + offset);
        t.snl.push_back(snl + offset);
        t.probe.push_back(probe + offset);
    }
    return t;
}

MonteCarloResult monte_carlo_nrf(double gain, double eta_p, double eta_c, std::size_t n_samples,
                                 std::uint64_t seed, double seed_photons, std::size_t n_blocks) {
    require_gain(gain);
    require_efficiency(eta_p);
    require_efficiency(eta_c);
    if (n_blocks < 2 || n_samples < 2 * n_blocks) throw DomainError("too few Monte Carlo samples");

    const double sg = std::sqrt(gain), sh = std::sqrt(gain - 1.0);
    const double alpha = std::sqrt(seed_photons);
    std::vector<BlockSums> blocks(n_blocks);
    parallel_for(n_blocks, [&](std::size_t b) {
        std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(b)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> quad(0.0, 0.5);  // vacuum quadrature, <x^2> = 1/4
        const std::size_t count = n_samples / n_blocks + (b < n_samples % n_blocks ? 1 : 0);
        BlockSums s;
        for (std::size_t i = 0; i < count; ++i) {
            const std::complex<double> a(alpha + quad(rng), quad(rng));
            const std::complex<double> v(quad(rng), quad(rng));
            const std::complex<double> ap = sg * a + sh * std::conj(v);
            const std::complex<double> cp = sg * v + sh * std::conj(a);
            auto photons = [](std::complex<double> z) {
                return static_cast<long long>(std::max(0.0, std::round(std::norm(z) - 0.5)));
            };
            long long np = photons(ap), nc = photons(cp);
            if (eta_p < 1.0) np = std::binomial_distribution<long long>(np, eta_p)(rng);
            if (eta_c < 1.0) nc = std::binomial_distribution<long long>(nc, eta_c)(rng);
            const double d = static_cast<double>(np - nc);
            s.n += 1.0;
            s.sum_d += d;
            s.sum_d2 += d * d;
            s.sum_total += static_cast<double>(np + nc);
        }
        blocks[b] = s;
    });

    BlockSums all;
    double mean_block = 0.0;
    for (const BlockSums& s : blocks) {
        all.n += s.n;
        all.sum_d += s.sum_d;
        all.sum_d2 += s.sum_d2;
        all.sum_total += s.sum_total;
        mean_block += s.nrf();
    }
    mean_block /= static_cast<double>(n_blocks);
    double spread = 0.0;
    for (const BlockSums& s : blocks) spread += (s.nrf() - mean_block) * (s.nrf() - mean_block);
    spread /= static_cast<double>(n_blocks - 1);
    return {all.nrf(), std::sqrt(spread / static_cast<double>(n_blocks)), n_samples};
}

}  // namespace fwm
