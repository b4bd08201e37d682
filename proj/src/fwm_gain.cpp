#include "fwm/fwm_gain.hpp"

#include <cmath>
#include <string>

#include "fwm/errors.hpp"
#include "fwm/fft.hpp"

namespace fwm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Per-family transverse projectors on the DFT layout, one for each output beam.
struct FamilyProjector {
    std::vector<double> probe;
    std::vector<double> conjugate;
};

struct GainContext {
    std::vector<double> shares;             // a_j / sum a
    double total_strength = 0.0;            // sum a_j
    std::vector<FamilyProjector> projectors;
    bool all_pass = true;
};

GainContext make_context(const Grid2D& grid, double wavelength, const MediumParams& medium,
                         const ProbeParams& probe, const GainSpectrumModel& spectrum) {
    GainContext ctx;
    const auto res = resonances(spectrum, medium.pump_power);
    const auto a = mode_strengths(spectrum, probe.two_photon_detuning, medium.pump_power);
    for (double v : a) ctx.total_strength += v;
    for (double v : a) ctx.shares.push_back(ctx.total_strength > 0.0 ? v / ctx.total_strength : 0.0);
    ctx.all_pass = !spectrum.transverse_filters && !medium.phase_matching;
    if (ctx.all_pass) return ctx;

    const double k = kTwoPi / wavelength;
    const double carrier = k * std::sin(probe.crossing_angle);
    std::vector<double> m_probe(grid.size(), 1.0), m_conj(grid.size(), 1.0);
    std::vector<double> q_probe(grid.size()), q_conj(grid.size());
    for (int my = 0; my < grid.ny; ++my) {
        const double ky = kTwoPi * fft_frequency(my, grid.ny, grid.dy);
        for (int mx = 0; mx < grid.nx; ++mx) {
            const double kx = kTwoPi * fft_frequency(mx, grid.nx, grid.dx);
            const std::size_t i = static_cast<std::size_t>(my) * grid.nx + mx;
            q_probe[i] = std::hypot(kx - carrier, ky) / k;
            q_conj[i] = std::hypot(kx + carrier, ky) / k;
            if (medium.phase_matching) {
                m_probe[i] = phase_matching_factor(phase_mismatch(kx, ky, wavelength, medium), medium.cell_length);
                m_conj[i] = phase_matching_factor(phase_mismatch(-kx, -ky, wavelength, medium), medium.cell_length);
            }
        }
    }
    for (const Resonance& r : res) {
        FamilyProjector p{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            p.probe[i] = admittance(spectrum, r.family, q_probe[i]) * m_probe[i];
            p.conjugate[i] = admittance(spectrum, r.family, q_conj[i]) * m_conj[i];
        }
        ctx.projectors.push_back(std::move(p));
    }
    return ctx;
}

// Projects the generated field onto each family and rescales it so the family
// keeps the power it was allotted before projection.
std::vector<cplx> project_generated(std::vector<cplx> source, const Grid2D& grid, const GainContext& ctx,
                                    bool conjugate_side) {
    fft2d_forward(source, grid.nx, grid.ny);
    double total = 0.0;
    for (const cplx& v : source) total += std::norm(v);
    std::vector<cplx> acc(source.size(), cplx{});
    for (std::size_t j = 0; j < ctx.projectors.size(); ++j) {
        if (ctx.shares[j] == 0.0) continue;
        const std::vector<double>& pi = conjugate_side ? ctx.projectors[j].conjugate : ctx.projectors[j].probe;
        double kept = 0.0;
        for (std::size_t i = 0; i < source.size(); ++i) kept += std::norm(source[i] * pi[i]);
        if (kept == 0.0) continue;
        const double scale = ctx.shares[j] * std::sqrt(total / kept);
        for (std::size_t i = 0; i < source.size(); ++i) acc[i] += (scale * pi[i]) * source[i];
    }
    fft2d_inverse(acc, grid.nx, grid.ny);
    return acc;
}

// One local two-mode mixing step with gain map g (already including the
// spectral strength). Updates probe and conjugate in place. When pump_phase is
// given it holds exp(2i arg pump) and multiplies the cross-coupling terms.
void mixing_step(std::vector<cplx>& p, std::vector<cplx>& c, const std::vector<double>& g,
                 const Grid2D& grid, const GainContext& ctx, const std::vector<cplx>* pump_phase = nullptr) {
    const std::size_t n = p.size();
    auto coupling = [&](std::size_t i, double sh) { return pump_phase ? sh * (*pump_phase)[i] : cplx(sh, 0.0); };
    if (ctx.all_pass) {
        for (std::size_t i = 0; i < n; ++i) {
            const double ch = std::cosh(g[i]);
            const cplx sh = coupling(i, std::sinh(g[i]));
            const cplx pi = p[i], ci = c[i];
            p[i] = ch * pi + sh * std::conj(ci);
            c[i] = ch * ci + sh * std::conj(pi);
        }
        return;
    }
    std::vector<cplx> sp(n), sc(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (g[i] == 0.0) continue;
        any = true;
        const double ch1 = std::cosh(g[i]) - 1.0;
        const cplx sh = coupling(i, std::sinh(g[i]));
        sp[i] = ch1 * p[i] + sh * std::conj(c[i]);
        sc[i] = ch1 * c[i] + sh * std::conj(p[i]);
    }
    if (!any) return;
    const std::vector<cplx> dp = project_generated(std::move(sp), grid, ctx, false);
    std::vector<cplx> dc = project_generated(std::move(sc), grid, ctx, true);

    // Photons are created in pairs: scale the conjugate increment so the
    // probe-minus-conjugate power is unchanged by the step.
    double gained = 0.0, a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        gained += std::norm(p[i] + dp[i]) - std::norm(p[i]);
        a += std::norm(dc[i]);
        b += std::real(std::conj(c[i]) * dc[i]);
    }
    if (a > 0.0) {
        // a s^2 + 2 b s - gained = 0; take the root nearest the unscaled increment.
        const double disc = b * b + a * gained;
        double s = -b / a;
        if (disc >= 0.0) {
            const double r1 = (-b + std::sqrt(disc)) / a, r2 = (-b - std::sqrt(disc)) / a;
            s = std::abs(r1 - 1.0) <= std::abs(r2 - 1.0) ? r1 : r2;
        }
        for (cplx& v : dc) v *= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
        p[i] += dp[i];
        c[i] += dc[i];
    }
}

std::vector<double> gain_map(const ComplexField2D& pump, double scale) {
    std::vector<double> g(pump.a.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * std::norm(pump.a[i]);
    return g;
}

std::vector<cplx> doubled_phase(const ComplexField2D& pump) {
    std::vector<cplx> e(pump.a.size(), cplx(1.0, 0.0));
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double m = std::norm(pump.a[i]);
        if (m > 0.0) e[i] = pump.a[i] * pump.a[i] / m;
    }
    return e;
}

void apply_output_phases(MixOutput& out, const MediumParams& medium) {
    if (medium.probe_phase != 0.0)
        for (cplx& v : out.probe.a) v *= std::polar(1.0, medium.probe_phase);
    if (medium.conjugate_phase != 0.0)
        for (cplx& v : out.conjugate.a) v *= std::polar(1.0, medium.conjugate_phase);
}

}  // namespace

void MediumParams::validate() const {
    if (!(cell_length > 0.0)) throw DomainError("cell length must be positive");
    if (gain_strength < 0.0) throw DomainError("gain strength must be non-negative");
    if (detuning == 0.0 || reference_detuning == 0.0) throw DomainError("detunings must be nonzero");
    if (pump_power < 0.0) throw DomainError("pump power must be non-negative");
}

double MediumParams::effective_gain_strength() const {
    return gain_strength * std::pow(std::abs(reference_detuning / detuning), gain_detuning_exponent);
}

double MediumParams::effective_index() const {
    return dispersion_index * std::pow(std::abs(reference_detuning / detuning), dispersion_detuning_exponent);
}

void ProbeParams::validate() const {
    if (std::abs(two_photon_detuning) >= validity_window)
        throw DomainError("two-photon detuning " + std::to_string(two_photon_detuning * 1e-6) +
                          " MHz lies outside the model validity window");
    if (power < 0.0) throw DomainError("probe power must be non-negative");
}

double phase_mismatch(double kx, double ky, double wavelength, const MediumParams& medium) {
    const double k = kTwoPi / wavelength;
    const double kp = k * (1.0 + medium.effective_index());
    const double kperp2 = kx * kx + ky * ky;
    const double kz = std::sqrt(std::max(kp * kp - kperp2, 0.0));
    return 2.0 * k - 2.0 * kz + medium.dispersion_asymmetry * kx;
}

double phase_matching_factor(double dk, double length) {
    const double x = 0.5 * dk * length;
    if (std::abs(x) < 1e-8) return 1.0;
    const double s = std::sin(x) / x;
    return s * s;
}

MixOutput single_pass_gain(const ComplexField2D& pump, const ComplexField2D& probe_in,
                           const MediumParams& medium, const ProbeParams& probe,
                           const GainSpectrumModel& spectrum) {
    require_same_grid(pump, probe_in, "single_pass_gain");
    medium.validate();
    probe.validate();
    spectrum.validate();
    const Grid2D& grid = probe_in.grid;
    const GainContext ctx = make_context(grid, probe_in.wavelength, medium, probe, spectrum);
    const std::vector<double> g =
        gain_map(pump, medium.effective_gain_strength() * medium.cell_length * ctx.total_strength);

    MixOutput out{probe_in, ComplexField2D(grid, probe_in.wavelength)};
    mixing_step(out.probe.a, out.conjugate.a, g, grid, ctx);
    apply_output_phases(out, medium);
    return out;
}

SplitStepOutput split_step_gain(const ComplexField2D& pump_at_slit, const ComplexField2D& probe_in,
                                const MediumParams& medium, const ProbeParams& probe,
                                const GainSpectrumModel& spectrum, const SplitStepOptions& options) {
    require_same_grid(pump_at_slit, probe_in, "split_step_gain");
    if (options.n_steps < 1) throw DomainError("split-step needs at least one step");
    medium.validate();
    probe.validate();
    spectrum.validate();

    const Grid2D& grid = probe_in.grid;
    const double length = medium.cell_length;
    const double dz = length / options.n_steps;
    // With diffraction on, the mismatch accrues through propagation: probe and
    // conjugate travel with the medium index and couple through the pump phase.
    MediumParams local = medium;
    if (options.diffraction) local.phase_matching = false;
    const GainContext ctx = make_context(grid, probe_in.wavelength, local, probe, spectrum);
    const double g_per_length = options.gain ? medium.effective_gain_strength() * ctx.total_strength : 0.0;

    PropagationPlan plan = options.plan;
    auto hop = [&](const ComplexField2D& f, double z) {
        plan.z = z;
        return propagate(f, plan);
    };
    const double index = options.gain ? 1.0 + medium.effective_index() : 1.0;
    auto hop_in_medium = [&](ComplexField2D f, double z) {
        const double vacuum = f.wavelength;
        f.wavelength = vacuum / index;
        f = hop(f, z);
        f.wavelength = vacuum;
        return f;
    };

    SplitStepOutput out;
    if (options.diffraction) {
        out.pump = hop(pump_at_slit, medium.cell_center_z - length / 2);
        out.probe = hop(probe_in, -length / 2);
    } else {
        out.pump = hop(pump_at_slit, medium.cell_center_z);
        out.probe = probe_in;
    }
    out.conjugate = ComplexField2D(grid, probe_in.wavelength);

    for (int step = 0; step < options.n_steps; ++step) {
        if (options.diffraction) {
            out.pump = hop(out.pump, dz / 2);
            out.probe = hop_in_medium(out.probe, dz / 2);
            out.conjugate = hop_in_medium(out.conjugate, dz / 2);
        }
        if (g_per_length > 0.0) {
            const std::vector<double> g = gain_map(out.pump, g_per_length * dz);
            std::vector<double> before;
            if (medium.pump_depletion) {
                before.resize(g.size());
                for (std::size_t i = 0; i < g.size(); ++i)
                    before[i] = std::norm(out.probe.a[i]) + std::norm(out.conjugate.a[i]);
            }
            if (options.diffraction) {
                const std::vector<cplx> phase = doubled_phase(out.pump);
                mixing_step(out.probe.a, out.conjugate.a, g, grid, ctx, &phase);
            } else {
                mixing_step(out.probe.a, out.conjugate.a, g, grid, ctx);
            }
            if (medium.pump_depletion) {
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double gained = std::norm(out.probe.a[i]) + std::norm(out.conjugate.a[i]) - before[i];
                    const double ip = std::norm(out.pump.a[i]);
                    if (ip > 0.0 && gained > 0.0)
                        out.pump.a[i] *= std::sqrt(std::max(0.0, ip - gained) / ip);
                }
            }
        }
        if (options.diffraction) {
            out.pump = hop(out.pump, dz / 2);
            out.probe = hop_in_medium(out.probe, dz / 2);
            out.conjugate = hop_in_medium(out.conjugate, dz / 2);
        }
    }
    if (options.diffraction) {
        out.probe = hop(out.probe, -length / 2);
        out.conjugate = hop(out.conjugate, -length / 2);
    }
    MixOutput phased{out.probe, out.conjugate};
    apply_output_phases(phased, medium);
    out.probe = std::move(phased.probe);
    out.conjugate = std::move(phased.conjugate);

    if (options.check_convergence) {
        SplitStepOptions twice = options;
        twice.n_steps *= 2;
        twice.check_convergence = false;
        const SplitStepOutput fine = split_step_gain(pump_at_slit, probe_in, medium, probe, spectrum, twice);
        const double change = std::max(relative_l2(out.probe, fine.probe), relative_l2(out.conjugate, fine.conjugate));
        if (change >= 1e-3)
            warn("split-step output changed by " + std::to_string(change) + " when doubling to " +
                 std::to_string(twice.n_steps) + " steps (NonConvergence)");
    }
    return out;
}

double relative_l2(const ComplexField2D& a, const ComplexField2D& b) {
    require_same_grid(a, b, "relative_l2");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) {
        num += std::norm(a.a[i] - b.a[i]);
        den += std::norm(b.a[i]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

}  // namespace fwm
