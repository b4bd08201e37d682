#include "fwm/pipeline.hpp"

#include "fwm/errors.hpp"
#include "fwm/parallel.hpp"

namespace fwm {

ComplexField2D pump_at_slit(const ExperimentConfig& cfg) {
    ComplexField2D pump = make_gaussian(cfg.pump, cfg.grid, cfg.wavelength);
    return cfg.slit_enabled ? apply_aperture(pump, cfg.slit()) : pump;
}

ComplexField2D pump_at_cell(const ExperimentConfig& cfg) {
    return propagate(pump_at_slit(cfg), cfg.plan(cfg.medium.cell_center_z));
}

ComplexField2D probe_at_cell(const ExperimentConfig& cfg) {
    BeamSpec spec = cfg.probe_beam;
    spec.power = cfg.probe.power;
    spec.tilt = cfg.probe.crossing_angle;
    return make_gaussian(spec, cfg.grid, cfg.wavelength);
}

CameraFrame simulate_camera(const ExperimentConfig& cfg, const ComplexField2D* pump_cell) {
    const ComplexField2D probe = probe_at_cell(cfg);
    ComplexField2D p, c;
    if (cfg.mode == GainMode::SplitStep) {
        SplitStepOptions opt;
        opt.n_steps = cfg.steps;
        opt.plan = cfg.plan(0.0);
        opt.check_convergence = cfg.convergence_check;
        auto out = split_step_gain(pump_at_slit(cfg), probe, cfg.medium_params(), cfg.probe, cfg.spectrum_model(), opt);
        p = std::move(out.probe);
        c = std::move(out.conjugate);
    } else {
        const ComplexField2D local = pump_cell ? ComplexField2D{} : pump_at_cell(cfg);
        auto out = single_pass_gain(pump_cell ? *pump_cell : local, probe, cfg.medium_params(), cfg.probe,
                                    cfg.spectrum_model());
        p = std::move(out.probe);
        c = std::move(out.conjugate);
    }
    const PropagationPlan cam = cfg.plan(cfg.camera_distance);
    p = propagate(p, cam);
    c = propagate(c, cam);
    CameraFrame frame;
    frame.image = intensity_image(p);
    const Image ic = intensity_image(c);
    for (std::size_t i = 0; i < frame.image.v.size(); ++i) frame.image.v[i] += ic.v[i];
    frame.probe_power = total_power(p);
    frame.conjugate_power = total_power(c);
    return frame;
}

int count_resolvable_spots(const Image& image, const ExperimentConfig& cfg) {
    return static_cast<int>(find_maxima(image, cfg.min_separation, cfg.spots.threshold_fraction).size());
}

SpotSet reference_spots(const ExperimentConfig& cfg, Image* frame) {
    ExperimentConfig at = cfg;
    at.probe.two_photon_detuning = resonances(cfg.spectrum_model(), cfg.pump.power).front().center;
    CameraFrame f = simulate_camera(at);
    SpotSet spots = detect_spots(f.image, cfg.min_separation, 6, cfg.spots);
    if (spots.best_effort) warn("reference spot detection: " + spots.warning);
    if (frame) *frame = std::move(f.image);
    return spots;
}

SpectralScan scan_two_photon(const ExperimentConfig& cfg, const std::vector<double>& deltas, const SpotSet& spots) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] > deltas[i - 1])) throw DomainError("scan detunings must be sorted ascending");
    SpectralScan scan;
    scan.deltas = deltas;
    for (const Region& r : spots.regions) scan.ids.push_back(r.id);
    scan.curves.assign(spots.regions.size(), std::vector<double>(deltas.size(), 0.0));

    const bool reuse_pump = cfg.mode == GainMode::SinglePass;
    const ComplexField2D pump = reuse_pump ? pump_at_cell(cfg) : ComplexField2D{};
    parallel_for(deltas.size(), [&](std::size_t k) {
        ExperimentConfig at = cfg;
        at.probe.two_photon_detuning = deltas[k];
        const CameraFrame f = simulate_camera(at, reuse_pump ? &pump : nullptr);
        const auto curves = integrate_regions({f.image}, spots, 1);
        for (std::size_t r = 0; r < curves.size(); ++r) scan.curves[r][k] = curves[r][0];
    });
    return scan;
}

}  // namespace fwm
