#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "fwm/errors.hpp"
#include "fwm/image_io.hpp"
#include "fwm/parallel.hpp"
#include "fwm/pipeline.hpp"
#include "fwm/presets.hpp"

using namespace fwm;

namespace {

std::string num(double v, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IOFailure("cannot create " + dir + ": " + ec.message());
}

struct FrameEntry {
    std::string file;
    double delta;
};

// Either "<file> <delta_MHz>" per line, or one delta per line matched to the
// directory's .pgm files in name order.
std::vector<FrameEntry> read_scan_manifest(const std::string& path, const std::string& frames_dir) {
    std::istringstream in(read_text(path));
    std::vector<FrameEntry> entries;
    std::vector<double> bare;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a)) continue;
        if (ls >> b) {
            entries.push_back({a, std::stod(b) * 1e6});
        } else {
            bare.push_back(std::stod(a) * 1e6);
        }
    }
    if (!entries.empty() && !bare.empty()) throw IOFailure(path + ": mixes bare and file-tagged lines");
    if (!bare.empty()) {
        std::vector<std::string> files;
        for (const auto& e : std::filesystem::directory_iterator(frames_dir))
            if (e.path().extension() == ".pgm") files.push_back(e.path().filename().string());
        std::sort(files.begin(), files.end());
        if (files.size() != bare.size())
            throw IOFailure("manifest lists " + std::to_string(bare.size()) + " detunings but " + frames_dir +
                            " holds " + std::to_string(files.size()) + " frames");
        for (std::size_t i = 0; i < files.size(); ++i) entries.push_back({files[i], bare[i]});
    }
    if (entries.empty()) throw IOFailure(path + ": no frames listed");
    return entries;
}

std::string matrix_csv(const std::vector<std::string>& ids, const std::vector<std::vector<double>>& m) {
    std::string csv = "id";
    for (const auto& id : ids) csv += "," + id;
    csv += "\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        csv += ids[i];
        for (double v : m[i]) csv += "," + num(v);
        csv += "\n";
    }
    return csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Four-wave mixing with a slit-structured pump: propagation, gain, spectra, noise and spot analysis"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--threads", threads, "worker cap (default: FWMSIM_THREADS or all cores)");

    auto* prop = app.add_subcommand("propagate", "propagate the slit-diffracted pump and write its intensity");
    double prop_z_mm = 0.0, prop_slit_um = 0.0, prop_crop_mm = 0.0;
    std::string prop_out = "pump.pgm";
    prop->add_option("--z", prop_z_mm, "distance from the slit, mm")->required();
    prop->add_option("--slit", prop_slit_um, "slit width, um (0 keeps the config value)");
    prop->add_option("--crop-mm", prop_crop_mm, "square crop size, mm (0 writes the full grid)");
    prop->add_option("--out", prop_out, "output PGM");

    auto* mix = app.add_subcommand("mix", "run the gain model and write the camera-plane image");
    double mix_slit = 0.0, mix_pump = 0.0, mix_delta = 0.0, mix_delta2 = NAN, mix_camera = 0.0;
    int mix_steps = 0;
    std::string mix_out = "camera.pgm";
    mix->add_option("--slit-um", mix_slit, "slit width, um");
    mix->add_option("--pump-mw", mix_pump, "pump power, mW");
    mix->add_option("--delta-ghz", mix_delta, "one-photon detuning, GHz");
    mix->add_option("--delta2-mhz", mix_delta2, "two-photon detuning, MHz");
    mix->add_option("--steps", mix_steps, "use the split-step model with this many steps");
    mix->add_option("--camera-mm", mix_camera, "camera distance after the cell center, mm");
    mix->add_option("--out", mix_out, "output PGM");

    auto* spec = app.add_subcommand("spectrum", "scan the two-photon detuning and integrate each spot");
    std::string spec_out = "spectrum.csv";
    spec->add_option("--out", spec_out, "output CSV (delta_MHz, region_id, integrated_intensity)");

    auto* split = app.add_subcommand("splitting", "doublet splitting against pump power");
    std::vector<double> split_powers{100, 120, 140, 160, 180, 200};
    std::string split_out = "splitting.csv";
    split->add_option("--powers-mw", split_powers, "pump powers, mW");
    split->add_option("--out", split_out, "output CSV");

    auto* sq = app.add_subcommand("squeeze", "intensity-difference noise traces");
    std::string sq_out = "squeeze.csv";
    sq->add_option("--out", sq_out, "output CSV");

    auto* an = app.add_subcommand("analyze", "segment spots in camera frames and correlate their intensities");
    std::string an_frames, an_manifest, an_out = "analysis";
    double an_pitch_um = 0.0;
    int an_expected = 6;
    an->add_option("--frames", an_frames, "directory of PGM frames")->required();
    an->add_option("--manifest", an_manifest, "scan manifest: one detuning (MHz) per frame")->required();
    an->add_option("--out-dir", an_out, "output directory");
    an->add_option("--pitch-um", an_pitch_um, "pixel pitch for frames without a sidecar header");
    an->add_option("--expected", an_expected, "expected spot count (0 disables the check)");

    auto* pre = app.add_subcommand("preset", "reproduce one figure's outputs");
    std::string pre_name, pre_out;
    pre->add_option("name", pre_name, "fig1c, fig2, fig3, fig4, fig5a, fig5b, fig6 or fig7")->required();
    pre->add_option("--out-dir", pre_out, "output directory (default: the preset name)");

    auto* chk = app.add_subcommand("config-check", "validate a configuration file");
    std::string chk_path;
    bool chk_emit = false;
    chk->add_option("path", chk_path, "configuration file")->required();
    chk->add_flag("--emit", chk_emit, "print the fully resolved configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) set_thread_count(threads);
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : parse_config(config_path);

        if (*prop) {
            if (prop_slit_um > 0.0) cfg.slit_width = prop_slit_um * 1e-6;
            cfg.validate();
            const ComplexField2D f = propagate(pump_at_slit(cfg), cfg.plan(prop_z_mm * 1e-3));
            Image img = intensity_image(f);
            if (prop_crop_mm > 0.0) img = crop(img, 0.0, 0.0, prop_crop_mm * 1e-3, prop_crop_mm * 1e-3);
            write_pgm(prop_out, img);
            std::cout << "power_W " << num(total_power(f)) << "\npeak_intensity_W_per_m2 "
                      << num(*std::max_element(img.v.begin(), img.v.end())) << "\n";
        } else if (*mix) {
            if (mix_slit > 0.0) cfg.slit_width = mix_slit * 1e-6;
            if (mix_pump > 0.0) cfg.pump.power = mix_pump * 1e-3;
            if (mix_delta != 0.0) cfg.medium.detuning = mix_delta * 1e9;
            if (!std::isnan(mix_delta2)) cfg.probe.two_photon_detuning = mix_delta2 * 1e6;
            if (mix_steps > 0) {
                cfg.mode = GainMode::SplitStep;
                cfg.steps = mix_steps;
            }
            if (mix_camera > 0.0) cfg.camera_distance = mix_camera * 1e-3;
            cfg.validate();
            const CameraFrame f = simulate_camera(cfg);
            write_pgm(mix_out, f.image);
            std::cout << "resolvable_spots " << count_resolvable_spots(f.image, cfg) << "\nmirror_correlation "
                      << num(mirror_correlation(f.image)) << "\nprobe_power_W " << num(f.probe_power)
                      << "\nconjugate_power_W " << num(f.conjugate_power) << "\n";
        } else if (*spec) {
            cfg.validate();
            const SpotSet spots = reference_spots(cfg);
            const SpectralScan scan = scan_two_photon(cfg, cfg.scan_deltas(), spots);
            std::string csv = "delta_MHz,region_id,integrated_intensity\n";
            for (std::size_t k = 0; k < scan.deltas.size(); ++k)
                for (std::size_t r = 0; r < scan.ids.size(); ++r)
                    csv += num(scan.deltas[k] * 1e-6) + "," + scan.ids[r] + "," + num(scan.curves[r][k]) + "\n";
            write_text(spec_out, csv);
        } else if (*split) {
            cfg.validate();
            std::vector<double> powers;
            for (double p : split_powers) powers.push_back(p * 1e-3);
            const auto pts = splitting_vs_power(powers, cfg.spectrum_model());
            std::vector<double> x, y;
            std::string csv = "P_mW,splitting_MHz\n";
            for (const auto& p : pts) {
                x.push_back(p.power);
                y.push_back(p.splitting);
                csv += num(p.power * 1e3) + "," + num(p.splitting * 1e-6) + "\n";
            }
            const LinearFit fit = fit_linear(x, y);
            csv += "# fit: slope_kHz_per_mW=" + num(fit.slope * 1e-6) + " intercept_MHz=" + num(fit.intercept * 1e-6) +
                   " r2=" + num(fit.r_squared, 15) + "\n";
            write_text(split_out, csv);
        } else if (*sq) {
            cfg.validate();
            const NoiseModel m = cfg.noise_model();
            const NoiseTrace t = synthesize_trace(m, log_frequency_grid(cfg.noise_f_start, cfg.noise_f_stop, cfg.noise_points));
            std::string csv = "f_Hz,electronic_dB,diff_dB,snl_dB,probe_dB\n";
            for (std::size_t i = 0; i < t.frequency.size(); ++i)
                csv += num(t.frequency[i]) + "," + num(t.electronic[i]) + "," + num(t.difference[i]) + "," +
                       num(t.snl[i]) + "," + num(t.probe[i]) + "\n";
            write_text(sq_out, csv);
            const double nrf = nrf_lossy(m.gain(), m.eta_probe, m.eta_conjugate);
            std::cout << "gain " << num(m.gain()) << "\nnrf " << num(nrf) << "\nsqueezing_dB " << num(to_db(nrf))
                      << "\nideal_squeezing_dB " << num(to_db(nrf_ideal(m.gain()))) << "\n";
        } else if (*an) {
            cfg.validate();
            const auto entries = read_scan_manifest(an_manifest, an_frames);
            std::vector<Image> frames(entries.size());
            parallel_for(entries.size(), [&](std::size_t i) {
                frames[i] = read_pgm(join_path(an_frames, entries[i].file), an_pitch_um * 1e-6);
            });
            Image mean = frames[0];
            for (std::size_t i = 1; i < frames.size(); ++i) {
                if (!(frames[i].grid == mean.grid)) throw GeometryMismatch(entries[i].file + " differs in geometry");
                for (std::size_t k = 0; k < mean.v.size(); ++k) mean.v[k] += frames[i].v[k];
            }
            const SpotSet spots = detect_spots(mean, cfg.min_separation,
                                               an_expected > 0 ? std::optional<int>(an_expected) : std::nullopt, cfg.spots);
            if (spots.best_effort) warn("spot detection: " + spots.warning);

            // Frames sharing consecutive equal detunings are averaged into one point.
            std::vector<double> deltas;
            std::vector<std::vector<double>> curves(spots.regions.size());
            for (std::size_t i = 0; i < entries.size();) {
                std::size_t j = i;
                while (j < entries.size() && entries[j].delta == entries[i].delta) ++j;
                const std::vector<Image> block(frames.begin() + static_cast<std::ptrdiff_t>(i),
                                               frames.begin() + static_cast<std::ptrdiff_t>(j));
                const auto c = integrate_regions(block, spots, static_cast<int>(j - i));
                for (std::size_t r = 0; r < c.size(); ++r) curves[r].push_back(c[r][0]);
                deltas.push_back(entries[i].delta);
                i = j;
            }
            std::vector<std::string> ids;
            for (const auto& r : spots.regions) ids.push_back(r.id);
            ensure_dir(an_out);
            std::string csv = "delta_MHz";
            for (const auto& id : ids) csv += "," + id;
            csv += "\n";
            for (std::size_t k = 0; k < deltas.size(); ++k) {
                csv += num(deltas[k] * 1e-6);
                for (const auto& c : curves) csv += "," + num(c[k]);
                csv += "\n";
            }
            write_text(join_path(an_out, "curves.csv"), csv);
            std::string regions = "id,x_mm,y_mm,area_mm2\n";
            for (const auto& r : spots.regions)
                regions += r.id + "," + num(r.cx * 1e3) + "," + num(r.cy * 1e3) + "," + num(r.area * 1e6) + "\n";
            write_text(join_path(an_out, "regions.csv"), regions);
            const CorrelationReport rep = correlate(curves, ids, cfg.correlation_threshold);
            write_text(join_path(an_out, "correlation.csv"), matrix_csv(rep.ids, rep.pearson));
            write_text(join_path(an_out, "covariance.csv"), matrix_csv(rep.ids, rep.covariance));
            std::cout << "regions " << ids.size() << "\npoints " << deltas.size() << "\ngroups";
            for (const auto& g : rep.groups) {
                std::cout << " {";
                for (std::size_t i = 0; i < g.size(); ++i) std::cout << (i ? "," : "") << rep.ids[g[i]];
                std::cout << "}";
            }
            std::cout << "\n";
        } else if (*pre) {
            const std::string dir = pre_out.empty() ? pre_name : pre_out;
            const RunManifest m = run_preset(pre_name, dir, config_path.empty() ? nullptr : &cfg);
            std::cout << "preset " << m.preset << " config " << m.config_digest << "\n";
            for (const auto& f : m.files) std::cout << f.digest << "  " << join_path(dir, f.name) << "\n";
        } else if (*chk) {
            const ExperimentConfig c = parse_config(chk_path);
            if (chk_emit) std::cout << emit_config_text(c);
            std::cout << "ok " << chk_path << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
