#include "fwm/presets.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "fwm/errors.hpp"
#include "fwm/image_io.hpp"
#include "fwm/parallel.hpp"
#include "fwm/pipeline.hpp"

namespace fwm {

namespace {

std::string num(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

class Emitter {
public:
    Emitter(std::string dir, RunManifest& manifest) : dir_(std::move(dir)), manifest_(manifest) {}

    void text(const std::string& name, const std::string& content) {
        write_text(path(name), content);
        record(name);
    }

    void pgm(const std::string& name, const Image& img) {
        write_pgm(path(name), img, 16);
        record(name);
        record(name + ".hdr");
    }

private:
    std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }
    void record(const std::string& name) {
        manifest_.files.push_back({name, hex64(fnv1a64(read_text(path(name))))});
    }

    std::string dir_;
    RunManifest& manifest_;
};

// Six-spot images are shown at delta = -5 MHz; the doublet is moved so its
// lower resonance sits there.
void six_spot_detuning(ExperimentConfig& c) {
    c.probe.two_photon_detuning = -5e6;
    c.spectrum.centroid = -5e6 + splitting(c.spectrum_model(), c.pump.power) / 2;
}

void run_fig1c(const ExperimentConfig& cfg, Emitter& out) {
    const CameraFrame f = simulate_camera(cfg);
    out.pgm("fig1c_camera.pgm", f.image);
    const auto maxima = find_maxima(f.image, cfg.min_separation, cfg.spots.threshold_fraction);
    const double peak = maxima.empty() ? 1.0 : maxima.front().peak;
    std::string csv = "x_mm,y_mm,relative_peak\n";
    for (const Region& r : maxima) csv += num(r.cx * 1e3) + "," + num(r.cy * 1e3) + "," + num(r.peak / peak) + "\n";
    out.text("fig1c_spots.csv", csv);
    out.text("fig1c_summary.txt", "resolvable_maxima " + std::to_string(maxima.size()) + "\nmirror_correlation " +
                                      num(mirror_correlation(f.image)) + "\nprobe_power_W " + num(f.probe_power) +
                                      "\nconjugate_power_W " + num(f.conjugate_power) + "\n");
}

void run_fig2(const ExperimentConfig& cfg, Emitter& out) {
    const std::vector<double> zs{0.0, 64e-3, 76e-3, 89e-3};
    const auto fields = propagate_sequence(pump_at_slit(cfg), zs, cfg.plan(0.0));
    std::string csv = "z_mm,maxima,peak_intensity_W_per_m2\n";
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const Image c = crop(intensity_image(fields[i]), 0.0, 0.0, 1.1e-3, 1.1e-3);
        char name[64];
        std::snprintf(name, sizeof name, "fig2_z%03dmm.pgm", static_cast<int>(std::lround(zs[i] * 1e3)));
        out.pgm(name, c);
        const auto m = find_maxima(c, 50e-6, 0.2);
        csv += num(zs[i] * 1e3) + "," + std::to_string(m.size()) + "," + num(m.empty() ? 0.0 : m.front().peak) + "\n";
    }
    out.text("fig2_profiles.csv", csv);
}

void run_fig3(const ExperimentConfig& cfg, Emitter& out) {
    const std::vector<double> detunings{0.8e9, 1.0e9, 1.3e9, 1.5e9, 1.8e9, 2.0e9};
    std::vector<CameraFrame> frames(detunings.size());
    parallel_for(detunings.size(), [&](std::size_t i) {
        ExperimentConfig c = cfg;
        c.medium.detuning = detunings[i];
        frames[i] = simulate_camera(c);
    });
    std::string csv = "Delta_GHz,resolvable_spots,mirror_correlation\n";
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "fig3_Delta_%.1fGHz.pgm", detunings[i] * 1e-9);
        out.pgm(name, frames[i].image);
        csv += num(detunings[i] * 1e-9) + "," + std::to_string(count_resolvable_spots(frames[i].image, cfg)) + "," +
               num(mirror_correlation(frames[i].image)) + "\n";
    }
    out.text("fig3_spot_counts.csv", csv);
}

std::string fit_footer(const DoubletFit& f) {
    return "# fit: omega1_MHz=" + num(f.lower.center * 1e-6) + " omega2_MHz=" + num(f.upper.center * 1e-6) +
           " splitting_MHz=" + num(f.separation() * 1e-6) + " fwhm1_MHz=" + num(f.lower.fwhm * 1e-6) +
           " fwhm2_MHz=" + num(f.upper.fwhm * 1e-6) + " r2=" + num(f.r_squared) + "\n";
}

std::string scan_csv(const SpectralScan& scan, const std::vector<std::string>& keep) {
    std::string csv = "delta_MHz,region_id,integrated_intensity\n";
    for (std::size_t k = 0; k < scan.deltas.size(); ++k)
        for (std::size_t r = 0; r < scan.ids.size(); ++r) {
            if (!keep.empty() && std::find(keep.begin(), keep.end(), scan.ids[r]) == keep.end()) continue;
            csv += num(scan.deltas[k] * 1e-6) + "," + scan.ids[r] + "," + num(scan.curves[r][k]) + "\n";
        }
    return csv;
}

void run_fig4(const ExperimentConfig& cfg, Emitter& out) {
    const auto deltas = cfg.scan_deltas();
    GainSpectrumModel structured = cfg.spectrum_model();
    structured.structured = true;
    GainSpectrumModel circular = structured;
    circular.structured = false;
    const auto s = doublet_spectrum(structured, deltas, cfg.pump.power);
    const auto c = doublet_spectrum(circular, deltas, cfg.pump.power);
    std::string csv = "delta_MHz,structured,circular\n";
    for (std::size_t i = 0; i < deltas.size(); ++i) csv += num(deltas[i] * 1e-6) + "," + num(s[i]) + "," + num(c[i]) + "\n";
    csv += fit_footer(fit_doublet(deltas, s));
    out.text("fig4_model.csv", csv);

    const SpotSet spots = reference_spots(cfg);
    out.text("fig4_spots.csv", scan_csv(scan_two_photon(cfg, deltas, spots), {"I2", "I5"}));
}

void run_fig5a(const ExperimentConfig& cfg, Emitter& out) {
    const std::vector<double> widths{580e-6, 530e-6, 455e-6};
    const auto deltas = cfg.scan_deltas();
    std::vector<std::vector<double>> curves;
    std::string fits = "slit_um,omega1_MHz,omega2_MHz,splitting_MHz,weight_ratio,relative_peak_gain,resolved\n";
    for (double d : widths) {
        ExperimentConfig c = cfg;
        c.slit_width = d;
        const GainSpectrumModel m = c.spectrum_model();
        auto s = doublet_spectrum(m, deltas, c.pump.power);
        for (double& v : s) v *= relative_peak_gain(m);
        curves.push_back(s);
        const DoubletFit f = fit_doublet(deltas, doublet_spectrum(m, deltas, c.pump.power));
        const auto res = resonances(m, c.pump.power);
        fits += num(d * 1e6) + "," + num(f.lower.center * 1e-6) + "," + num(f.upper.center * 1e-6) + "," +
                num(f.separation() * 1e-6) + "," + num(res[0].weight / res[1].weight) + "," + num(relative_peak_gain(m)) +
                "," + (doublet_resolved(f.separation(), f.lower.fwhm, f.upper.fwhm) ? "yes" : "no") + "\n";
    }
    std::string csv = "delta_MHz,slit_580um,slit_530um,slit_455um\n";
    for (std::size_t i = 0; i < deltas.size(); ++i)
        csv += num(deltas[i] * 1e-6) + "," + num(curves[0][i]) + "," + num(curves[1][i]) + "," + num(curves[2][i]) + "\n";
    out.text("fig5a_spectra.csv", csv);
    out.text("fig5a_fits.csv", fits);
}

void run_fig5b(const ExperimentConfig& cfg, Emitter& out) {
    std::vector<double> powers;
    for (int i = 0; i < 6; ++i) powers.push_back(0.1 + 0.02 * i);
    const auto points = splitting_vs_power(powers, cfg.spectrum_model());
    std::vector<double> x, y;
    std::string csv = "P_mW,splitting_MHz\n";
    for (const PowerPoint& p : points) {
        x.push_back(p.power);
        y.push_back(p.splitting);
        csv += num(p.power * 1e3) + "," + num(p.splitting * 1e-6) + "\n";
    }
    const LinearFit f = fit_linear(x, y);
    csv += "# fit: slope_kHz_per_mW=" + num(f.slope * 1e-6) + " intercept_MHz=" + num(f.intercept * 1e-6) +
           " r2=" + num(f.r_squared, 15) + "\n";
    out.text("fig5b_splitting.csv", csv);
}

void run_fig6(const ExperimentConfig& cfg, Emitter& out) {
    Image reference;
    const SpotSet spots = reference_spots(cfg, &reference);
    out.pgm("fig6_reference.pgm", reference);
    std::string regions = "id,x_mm,y_mm,area_mm2\n";
    for (const Region& r : spots.regions)
        regions += r.id + "," + num(r.cx * 1e3) + "," + num(r.cy * 1e3) + "," + num(r.area * 1e6) + "\n";
    out.text("fig6_regions.csv", regions);

    const SpectralScan scan = scan_two_photon(cfg, cfg.scan_deltas(), spots);
    std::string curves = "delta_MHz";
    for (const auto& id : scan.ids) curves += "," + id;
    curves += "\n";
    for (std::size_t k = 0; k < scan.deltas.size(); ++k) {
        curves += num(scan.deltas[k] * 1e-6);
        for (const auto& c : scan.curves) curves += "," + num(c[k]);
        curves += "\n";
    }
    out.text("fig6_curves.csv", curves);

    const CorrelationReport rep = correlate(scan.curves, scan.ids, cfg.correlation_threshold);
    std::string corr = "id";
    for (const auto& id : rep.ids) corr += "," + id;
    corr += "\n";
    for (std::size_t i = 0; i < rep.ids.size(); ++i) {
        corr += rep.ids[i];
        for (double v : rep.pearson[i]) corr += "," + num(v);
        corr += "\n";
    }
    corr += "# groups:";
    for (const auto& g : rep.groups) {
        corr += " {";
        for (std::size_t i = 0; i < g.size(); ++i) corr += (i ? "," : "") + rep.ids[g[i]];
        corr += "}";
    }
    corr += "\n";
    out.text("fig6_correlation.csv", corr);
}

void run_fig7(const ExperimentConfig& cfg, Emitter& out) {
    const NoiseModel m = cfg.noise_model();
    const NoiseTrace t = synthesize_trace(m, log_frequency_grid(cfg.noise_f_start, cfg.noise_f_stop, cfg.noise_points));
    std::string csv = "f_Hz,electronic_dB,diff_dB,snl_dB,probe_dB\n";
    for (std::size_t i = 0; i < t.frequency.size(); ++i)
        csv += num(t.frequency[i]) + "," + num(t.electronic[i]) + "," + num(t.difference[i]) + "," + num(t.snl[i]) +
               "," + num(t.probe[i]) + "\n";
    out.text("fig7_traces.csv", csv);
    const double g = m.gain();
    const double nrf = nrf_lossy(g, m.eta_probe, m.eta_conjugate);
    const auto mc = monte_carlo_nrf(g, m.eta_probe, m.eta_conjugate, static_cast<std::size_t>(cfg.mc_samples), cfg.seed);
    const NoiseTrace at1 = synthesize_trace(m, {1e6});
    out.text("fig7_summary.txt",
             "gain " + num(g) + "\nnrf_ideal " + num(nrf_ideal(g)) + "\nnrf " + num(nrf) + "\nsqueezing_dB " +
                 num(to_db(nrf)) + "\ndiff_minus_snl_at_1MHz_dB " + num(at1.difference[0] - at1.snl[0]) +
                 "\nprobe_excess_dB " + num(to_db(2 * g - 1)) + "\nmonte_carlo_nrf " + num(mc.nrf) +
                 "\nmonte_carlo_stderr " + num(mc.standard_error) + "\ntwo_photon_detuning_MHz " +
                 num(cfg.noise_two_photon_detuning * 1e-6) + "\n");
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig1c", "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6", "fig7"};
    return names;
}

ExperimentConfig preset_config(const std::string& name) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw UnknownPreset("unknown preset '" + name + "' (valid: " + valid + ")");
    }
    ExperimentConfig c;
    if (name == "fig1c" || name == "fig3") six_spot_detuning(c);
    c.validate();
    return c;
}

std::string version_string() { return "fwmsim 1.0.0"; }

RunManifest run_preset(const std::string& name, const std::string& out_dir, const ExperimentConfig* config) {
    const ExperimentConfig cfg = config ? *config : preset_config(name);
    if (config) {
        preset_config(name);  // name check
        cfg.validate();
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IOFailure("cannot create " + out_dir + ": " + ec.message());

    RunManifest manifest;
    manifest.preset = name;
    manifest.seed = cfg.seed;
    const std::string config_text = emit_config_text(cfg);
    manifest.config_digest = hex64(fnv1a64(config_text));
    Emitter out(out_dir, manifest);
    out.text("config.txt", config_text);

    if (name == "fig1c") run_fig1c(cfg, out);
    else if (name == "fig2") run_fig2(cfg, out);
    else if (name == "fig3") run_fig3(cfg, out);
    else if (name == "fig4") run_fig4(cfg, out);
    else if (name == "fig5a") run_fig5a(cfg, out);
    else if (name == "fig5b") run_fig5b(cfg, out);
    else if (name == "fig6") run_fig6(cfg, out);
    else run_fig7(cfg, out);

    std::ostringstream m;
    m << "preset " << name << "\nversion " << version_string() << "\nfftw " << fftw_version << "\nconfig_fnv1a64 "
      << manifest.config_digest << "\nseed " << manifest.seed << "\n";
    for (const EmittedFile& f : manifest.files) m << "file " << f.name << " " << f.digest << "\n";
    write_text((std::filesystem::path(out_dir) / "manifest.txt").string(), m.str());
    return manifest;
}

}  // namespace fwm
