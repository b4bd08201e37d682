#include "fwm/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "fwm/errors.hpp"
#include "fwm/image_io.hpp"

namespace fwm {

namespace {

// Peak gain coefficient calibrated so the slit-structured preset at 200 mW and
// 2 GHz reaches a local gain argument of ~3.8 at the brightest pump point.
constexpr double kDefaultGainStrength = 1.63e-4;

enum class Dim { Length, Power, Frequency, Angle, Area, GainStrength, Slope, Temperature, Impedance, Decibel, Scalar };

struct Unit {
    const char* suffix;
    double scale;
};

const std::vector<Unit>& units(Dim d) {
    static const std::map<Dim, std::vector<Unit>> table = {
        {Dim::Length, {{"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}}},
        {Dim::Power, {{"uW", 1e-6}, {"mW", 1e-3}, {"W", 1.0}}},
        {Dim::Frequency, {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
        {Dim::Angle, {{"mrad", 1e-3}, {"rad", 1.0}, {"deg", std::numbers::pi / 180.0}}},
        {Dim::Area, {{"um2", 1e-12}, {"mm2", 1e-6}, {"m2", 1.0}}},
        {Dim::GainStrength, {{"m/W", 1.0}}},
        {Dim::Slope, {{"Hz/W", 1.0}, {"kHz/mW", 1e6}, {"MHz/W", 1e6}}},
        {Dim::Temperature, {{"C", 1.0}}},
        {Dim::Impedance, {{"V/A", 1.0}}},
        {Dim::Decibel, {{"dB", 1.0}}},
        {Dim::Scalar, {}},
    };
    return table.at(d);
}

bool parse_double(const std::string& s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

// Decimal exponent of a power-of-ten unit, or nothing for units like deg.
std::optional<int> decimal_exponent(const Unit& u) {
    const int e = static_cast<int>(std::lround(std::log10(u.scale)));
    if (std::pow(10.0, e) != u.scale) return std::nullopt;
    return e;
}

// Applies the unit by shifting the decimal exponent of the literal text, so
// "4.3 um" parses to exactly the double nearest 4.3e-6.
bool to_si(const std::string& number, const Unit& u, double& out) {
    const auto e = decimal_exponent(u);
    if (!e) {
        if (!parse_double(number, out)) return false;
        out *= u.scale;
        return true;
    }
    const auto pos = number.find_first_of("eE");
    int exp = *e;
    if (pos != std::string::npos) {
        int given = 0;
        const char* first = number.data() + pos + 1;
        if (*first == '+') ++first;
        auto [p, ec] = std::from_chars(first, number.data() + number.size(), given);
        if (ec != std::errc() || p != number.data() + number.size()) return false;
        exp += given;
    }
    return parse_double(number.substr(0, pos) + "e" + std::to_string(exp), out);
}

using Cfg = ExperimentConfig;

// A quantity key carries a unit dimension and the unit used when emitting;
// text keys (integers, booleans, choices) convert through strings.
struct Key {
    std::string name;
    bool quantity;
    Dim dim = Dim::Scalar;
    std::string display;
    std::function<double(const Cfg&)> get;
    std::function<void(Cfg&, double)> set;
    std::function<std::string(const Cfg&)> get_text;
    std::function<void(Cfg&, const std::string&)> set_text;  // throws std::invalid_argument
};

#define QTY(NAME, DIM, UNIT, MEMBER) \
    Key{NAME, true, Dim::DIM, UNIT, [](const Cfg& c) { return c.MEMBER; }, [](Cfg& c, double v) { c.MEMBER = v; }, {}, {}}

long long parse_integer(const std::string& s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an integer");
    return v;
}

#define INT(NAME, MEMBER, TYPE)                                                                    \
    Key{NAME, false, Dim::Scalar, "", {}, {}, [](const Cfg& c) { return std::to_string(c.MEMBER); }, \
        [](Cfg& c, const std::string& s) { c.MEMBER = static_cast<TYPE>(parse_integer(s)); }}

bool parse_bool(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw std::invalid_argument("expected true or false");
}

#define BOOL(NAME, MEMBER)                                                                                \
    Key{NAME, false, Dim::Scalar, "", {}, {}, [](const Cfg& c) { return std::string(c.MEMBER ? "true" : "false"); }, \
        [](Cfg& c, const std::string& s) { c.MEMBER = parse_bool(s); }}

template <class E>
Key choice(const std::string& name, E Cfg::*member, std::vector<std::pair<std::string, E>> options) {
    return Key{name, false, Dim::Scalar, "", {}, {},
               [member, options](const Cfg& c) {
                   for (const auto& [text, value] : options)
                       if (c.*member == value) return text;
                   return options.front().first;
               },
               [member, options](Cfg& c, const std::string& s) {
                   for (const auto& [text, value] : options)
                       if (s == text) {
                           c.*member = value;
                           return;
                       }
                   std::string valid;
                   for (const auto& o : options) valid += (valid.empty() ? "" : ", ") + o.first;
                   throw std::invalid_argument("expected one of: " + valid);
               }};
}

// Nested members need a small adapter because choice() takes a member pointer on Cfg.
Key lineshape_key() {
    return Key{"spectrum.lineshape", false, Dim::Scalar, "", {}, {},
               [](const Cfg& c) { return std::string(c.spectrum.lineshape == Lineshape::Gaussian ? "gaussian" : "lorentzian"); },
               [](Cfg& c, const std::string& s) {
                   if (s == "lorentzian") c.spectrum.lineshape = Lineshape::Lorentzian;
                   else if (s == "gaussian") c.spectrum.lineshape = Lineshape::Gaussian;
                   else throw std::invalid_argument("expected lorentzian or gaussian");
               }};
}

Key roi_shape_key() {
    return Key{"analysis.roi_shape", false, Dim::Scalar, "", {}, {},
               [](const Cfg& c) { return std::string(c.spots.shape == RoiShape::Circle ? "circle" : "rectangle"); },
               [](Cfg& c, const std::string& s) {
                   if (s == "rectangle") c.spots.shape = RoiShape::Rectangle;
                   else if (s == "circle") c.spots.shape = RoiShape::Circle;
                   else throw std::invalid_argument("expected rectangle or circle");
               }};
}

Key seed_key() {
    return Key{"run.seed", false, Dim::Scalar, "", {}, {},
               [](const Cfg& c) { return std::to_string(c.seed); },
               [](Cfg& c, const std::string& s) {
                   std::uint64_t v = 0;
                   auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
                   if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an unsigned integer");
                   c.seed = v;
               }};
}

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = {
        INT("grid.nx", grid.nx, int),
        INT("grid.ny", grid.ny, int),
        QTY("grid.pitch_x", Length, "um", grid.dx),
        QTY("grid.pitch_y", Length, "um", grid.dy),
        QTY("optics.wavelength", Length, "nm", wavelength),

        QTY("pump.waist_diameter", Length, "um", pump.waist_diameter),
        QTY("pump.power", Power, "mW", pump.power),
        QTY("pump.offset_x", Length, "um", pump.center_x),
        QTY("pump.offset_y", Length, "um", pump.center_y),
        QTY("pump.detuning", Frequency, "GHz", medium.detuning),

        QTY("probe.waist_diameter", Length, "um", probe_beam.waist_diameter),
        QTY("probe.power", Power, "uW", probe.power),
        QTY("probe.offset_x", Length, "um", probe_beam.center_x),
        QTY("probe.offset_y", Length, "um", probe_beam.center_y),
        QTY("probe.angle", Angle, "deg", probe.crossing_angle),
        QTY("probe.two_photon_detuning", Frequency, "MHz", probe.two_photon_detuning),
        QTY("probe.validity_window", Frequency, "MHz", probe.validity_window),

        BOOL("slit.enabled", slit_enabled),
        QTY("slit.width", Length, "um", slit_width),
        QTY("slit.height", Length, "um", slit_height),
        QTY("slit.offset", Length, "um", slit_offset),
        choice<Axis>("slit.axis", &Cfg::slit_axis, {{"y", Axis::Y}, {"x", Axis::X}}),
        QTY("slit.edge_width", Length, "um", slit_edge_width),

        QTY("cell.length", Length, "mm", medium.cell_length),
        QTY("cell.center_distance", Length, "mm", medium.cell_center_z),
        QTY("cell.temperature", Temperature, "C", medium.temperature),
        QTY("camera.distance", Length, "mm", camera_distance),

        QTY("medium.gain_strength", GainStrength, "m/W", medium.gain_strength),
        QTY("medium.reference_detuning", Frequency, "GHz", medium.reference_detuning),
        QTY("medium.gain_detuning_exponent", Scalar, "", medium.gain_detuning_exponent),
        QTY("medium.dispersion_index", Scalar, "", medium.dispersion_index),
        QTY("medium.dispersion_detuning_exponent", Scalar, "", medium.dispersion_detuning_exponent),
        QTY("medium.dispersion_asymmetry", Scalar, "", medium.dispersion_asymmetry),
        BOOL("medium.phase_matching", medium.phase_matching),
        BOOL("medium.pump_depletion", medium.pump_depletion),
        QTY("medium.probe_phase", Angle, "rad", medium.probe_phase),
        QTY("medium.conjugate_phase", Angle, "rad", medium.conjugate_phase),

        choice<GainMode>("model.mode", &Cfg::mode, {{"single-pass", GainMode::SinglePass}, {"split-step", GainMode::SplitStep}}),
        INT("model.steps", steps, int),
        BOOL("model.band_limit", band_limit),
        choice<AliasingPolicy>("model.aliasing", &Cfg::aliasing,
                               {{"warn", AliasingPolicy::Warn}, {"fatal", AliasingPolicy::Fatal}, {"ignore", AliasingPolicy::Ignore}}),
        BOOL("model.convergence_check", convergence_check),

        QTY("spectrum.centroid", Frequency, "MHz", spectrum.centroid),
        QTY("spectrum.linewidth1", Frequency, "MHz", spectrum.linewidth1),
        QTY("spectrum.linewidth2", Frequency, "MHz", spectrum.linewidth2),
        QTY("spectrum.light_shift_slope", Slope, "kHz/mW", spectrum.light_shift_slope),
        QTY("spectrum.splitting_intercept", Frequency, "MHz", spectrum.splitting_intercept),
        QTY("spectrum.reference_slit", Length, "um", spectrum.reference_slit),
        QTY("spectrum.weight_crossover_slit", Length, "um", spectrum.weight_crossover_slit),
        QTY("spectrum.weight_exponent", Scalar, "", spectrum.weight_exponent),
        QTY("spectrum.gain_slit_exponent", Scalar, "", spectrum.gain_slit_exponent),
        lineshape_key(),
        choice<Structuring>("spectrum.structured", &Cfg::structuring,
                            {{"auto", Structuring::Auto}, {"on", Structuring::On}, {"off", Structuring::Off}}),
        BOOL("spectrum.transverse_filters", spectrum.transverse_filters),
        QTY("spectrum.off_axis_radius", Angle, "mrad", spectrum.off_axis_radius),
        QTY("spectrum.off_axis_width", Angle, "mrad", spectrum.off_axis_width),
        QTY("spectrum.near_axis_width", Angle, "mrad", spectrum.near_axis_width),

        QTY("scan.delta_start", Frequency, "MHz", scan_start),
        QTY("scan.delta_stop", Frequency, "MHz", scan_stop),
        QTY("scan.delta_step", Frequency, "MHz", scan_step),

        QTY("noise.probe_power", Power, "uW", noise.probe_power),
        QTY("noise.conjugate_power", Power, "uW", noise.conjugate_power),
        QTY("noise.efficiency_probe", Scalar, "", noise.eta_probe),
        QTY("noise.efficiency_conjugate", Scalar, "", noise.eta_conjugate),
        QTY("noise.electronic_floor", Decibel, "dB", noise.electronic_floor_db),
        QTY("noise.band_low", Frequency, "MHz", noise.band_low),
        QTY("noise.band_high", Frequency, "MHz", noise.band_high),
        QTY("noise.technical_knee", Frequency, "kHz", noise.technical_knee),
        QTY("noise.technical_level", Scalar, "", noise.technical_level),
        QTY("noise.rbw", Frequency, "kHz", noise.rbw),
        QTY("noise.vbw", Frequency, "Hz", noise.vbw),
        QTY("noise.transimpedance", Impedance, "V/A", noise.transimpedance),
        BOOL("noise.absolute", noise.absolute),
        QTY("noise.jitter", Decibel, "dB", noise.jitter_db),
        QTY("noise.f_start", Frequency, "kHz", noise_f_start),
        QTY("noise.f_stop", Frequency, "MHz", noise_f_stop),
        INT("noise.points", noise_points, int),
        INT("noise.mc_samples", mc_samples, long long),
        QTY("noise.two_photon_detuning", Frequency, "MHz", noise_two_photon_detuning),

        QTY("analysis.roi_area", Area, "mm2", spots.target_area),
        roi_shape_key(),
        QTY("analysis.threshold", Scalar, "", spots.threshold_fraction),
        QTY("analysis.min_separation", Length, "um", min_separation),
        QTY("analysis.correlation_threshold", Scalar, "", correlation_threshold),
        INT("analysis.frames_per_point", frames_per_point, int),

        seed_key(),
    };
    return keys;
}

#undef QTY
#undef INT
#undef BOOL

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}


// Shortest representation in the display unit that parses back to the same
// double; falls back to SI when no such decimal exists.
std::string format_quantity(double si, const Key& key) {
    if (key.dim == Dim::Scalar) return format_double(si);
    for (const Unit& u : units(key.dim)) {
        if (key.display != u.suffix) continue;
        for (int prec = 1; prec <= 17; ++prec) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.*g", prec, si / u.scale);
            double shown = 0.0, back = 0.0;
            if (!parse_double(buf, shown) || !to_si(buf, u, back) || back != si) continue;
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, shown);
            return std::string(buf, end) + " " + u.suffix;
        }
    }
    const Unit& base = *std::find_if(units(key.dim).begin(), units(key.dim).end(), [](const Unit& u) { return u.scale == 1.0; });
    return format_double(si) + " " + base.suffix;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
    probe_beam.tilt = probe.crossing_angle;
    medium.gain_strength = kDefaultGainStrength;
}

void ExperimentConfig::validate() const {
    grid.validate();
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
    };
    positive(pump.waist_diameter, "pump.waist_diameter");
    positive(probe_beam.waist_diameter, "probe.waist_diameter");
    positive(slit_width, "slit.width");
    positive(medium.cell_length, "cell.length");
    positive(medium.cell_center_z, "cell.center_distance");
    positive(camera_distance, "camera.distance");
    positive(scan_step, "scan.delta_step");
    positive(min_separation, "analysis.min_separation");
    positive(spots.target_area, "analysis.roi_area");
    if (pump.power < 0.0 || probe.power < 0.0) throw DomainError("powers must be non-negative");
    if (slit_height < 0.0 || slit_edge_width < 0.0) throw DomainError("slit dimensions must be non-negative");
    if (steps < 1) throw DomainError("model.steps must be >= 1");
    if (frames_per_point < 1) throw DomainError("analysis.frames_per_point must be >= 1");
    if (mc_samples < 1000) throw DomainError("noise.mc_samples must be >= 1000");
    if (!(scan_stop >= scan_start)) throw DomainError("scan.delta_stop must not precede scan.delta_start");
    medium_params().validate();
    probe.validate();
    spectrum_model().validate();
    noise_model().validate();
}

SlitSpec ExperimentConfig::slit() const {
    SlitSpec s;
    s.width = slit_width;
    s.height = slit_height > 0.0 ? slit_height : std::numeric_limits<double>::infinity();
    s.center = slit_offset;
    s.axis = slit_axis;
    s.edge_width = slit_edge_width;
    return s;
}

MediumParams ExperimentConfig::medium_params() const {
    MediumParams m = medium;
    m.pump_power = pump.power;
    return m;
}

GainSpectrumModel ExperimentConfig::spectrum_model() const {
    GainSpectrumModel m = spectrum;
    m.slit_width = slit_width;
    m.structured = structuring == Structuring::Auto ? slit_enabled : structuring == Structuring::On;
    return m;
}

NoiseModel ExperimentConfig::noise_model() const {
    NoiseModel n = noise;
    n.wavelength = wavelength;
    n.seed = seed;
    return n;
}

PropagationPlan ExperimentConfig::plan(double z) const {
    PropagationPlan p;
    p.z = z;
    p.band_limit = band_limit;
    p.aliasing = aliasing;
    return p;
}

std::vector<double> ExperimentConfig::scan_deltas() const {
    std::vector<double> d;
    const long n = std::lround(std::floor((scan_stop - scan_start) / scan_step + 1e-9));
    for (long i = 0; i <= n; ++i) d.push_back(scan_start + static_cast<double>(i) * scan_step);
    return d;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::map<std::string, const Key*> index;
    for (const Key& k : registry()) index[k.name] = &k;
    std::map<std::string, int> seen;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        const int key_col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, key_col);
        const std::string key = trim(line.substr(0, eq));
        const auto it = index.find(key);
        if (it == index.end()) throw ParseError("unknown key '" + key + "'", line_no, key_col);
        if (seen.count(key))
            throw ParseError("duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")",
                             line_no, key_col);
        seen[key] = line_no;
        const Key& k = *it->second;

        const std::string rhs = line.substr(eq + 1);
        const auto vpos = rhs.find_first_not_of(" \t");
        const int value_col = static_cast<int>(eq + 1 + (vpos == std::string::npos ? 0 : vpos)) + 1;
        const std::string value = trim(rhs);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no, value_col);

        if (!k.quantity) {
            try {
                k.set_text(cfg, value);
            } catch (const std::invalid_argument& e) {
                throw ParseError("bad value for '" + key + "': " + e.what(), line_no, value_col);
            } catch (const std::out_of_range&) {
                throw ParseError("value out of range for '" + key + "'", line_no, value_col);
            }
            continue;
        }
        const auto space = value.find_first_of(" \t");
        const std::string number = value.substr(0, space);
        const std::string suffix = space == std::string::npos ? "" : trim(value.substr(space));
        double v = 0.0;
        if (!parse_double(number, v)) throw ParseError("bad number '" + number + "' for '" + key + "'", line_no, value_col);
        const int unit_col = value_col + static_cast<int>(value.find(suffix.empty() ? number : suffix));
        const Unit* unit = nullptr;
        if (k.dim == Dim::Scalar) {
            if (!suffix.empty())
                throw UnitError("line " + std::to_string(line_no) + ", column " + std::to_string(unit_col) + ": '" +
                                key + "' is dimensionless, unexpected unit '" + suffix + "'");
        } else {
            for (const Unit& u : units(k.dim))
                if (suffix == u.suffix) unit = &u;
            if (!unit) {
                std::string valid;
                for (const Unit& u : units(k.dim)) valid += std::string(valid.empty() ? "" : ", ") + u.suffix;
                throw UnitError("line " + std::to_string(line_no) + ", column " + std::to_string(unit_col) + ": " +
                                (suffix.empty() ? "missing unit" : "invalid unit '" + suffix + "'") + " for '" +
                                key + "' (expected one of: " + valid + ")");
            }
        }
        if (unit) to_si(number, *unit, v);
        k.set(cfg, v);
    }
    cfg.probe_beam.tilt = cfg.probe.crossing_angle;
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) { return parse_config_text(read_text(path)); }

std::string emit_config_text(const ExperimentConfig& config) {
    std::string out;
    std::string section;
    for (const Key& k : registry()) {
        const std::string head = k.name.substr(0, k.name.find('.'));
        if (head != section) {
            if (!section.empty()) out += "\n";
            section = head;
        }
        out += k.name + " = " + (k.quantity ? format_quantity(k.get(config), k) : k.get_text(config)) + "\n";
    }
    return out;
}

void emit_config(const ExperimentConfig& config, const std::string& path) {
    write_text(path, emit_config_text(config));
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace fwm
