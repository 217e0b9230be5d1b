#include "mplc/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "mplc/errors.hpp"

namespace mplc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> samples(double lo, double hi, double step, bool include_hi) {
    const double span = (hi - lo) / step;
    const auto n = static_cast<std::size_t>(std::llround(span));
    std::vector<double> out;
    for (std::size_t i = 0; i < n + (include_hi ? 1 : 0); ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

bool divides(double lo, double hi, double step) {
    const double n = (hi - lo) / step;
    return std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, std::abs(n));
}

struct Entry {
    int line;
    std::string key;
    std::string value;
};

using Setter = std::function<void(RunConfig&, const std::string&)>;

double number_of(const std::string& v) { return parse_number(v); }

std::size_t count_of(const std::string& v) {
    const double d = parse_number(v);
    if (d < 0.0 || d != std::floor(d) || d > 1e12) throw std::invalid_argument("expected a non-negative integer");
    return static_cast<std::size_t>(d);
}

bool flag_of(const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw std::invalid_argument("expected true or false");
}

std::vector<double> list_of(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_number(item));
    }
    return out;
}

// Beam blocks use micrometres, centimetres and radians per grid sample.
void beam_setters(std::map<std::string, Setter>& s, const std::string& section,
                  BeamArraySpec DesignProblem::*member) {
    auto spec = [member](RunConfig& c) -> BeamArraySpec& { return c.problem.*member; };
    s[section + ".m"] = [spec](RunConfig& c, const std::string& v) { spec(c).count = count_of(v); };
    s[section + ".waist_um"] = [spec](RunConfig& c, const std::string& v) { spec(c).waist = number_of(v) * 1e-6; };
    s[section + ".waist_offset_cm"] = [spec](RunConfig& c, const std::string& v) {
        spec(c).waist_offset = number_of(v) * 1e-2;
    };
    s[section + ".spacing_um"] = [spec](RunConfig& c, const std::string& v) {
        spec(c).spacing = number_of(v) * 1e-6;
    };
    s[section + ".center_x_um"] = [spec](RunConfig& c, const std::string& v) {
        spec(c).axis_origin.x = number_of(v) * 1e-6;
    };
    s[section + ".first_center_y_um"] = [spec](RunConfig& c, const std::string& v) {
        spec(c).axis_origin.y = number_of(v) * 1e-6;
    };
    // Converted to rad/m once the grid pitch is known.
    s[section + ".tilt_rad_per_px"] = [spec](RunConfig& c, const std::string& v) {
        spec(c).tilt_gradient = number_of(v);
    };
    s[section + ".tilt_beam_index"] = [spec](RunConfig& c, const std::string& v) {
        spec(c).tilt_beam = count_of(v);
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> s;
        s["grid.nx"] = [](RunConfig& c, const std::string& v) {
            const auto& g = c.problem.grid;
            c.problem.grid = SamplingGrid::centered(count_of(v), g.ny(), g.pitch());
        };
        s["grid.ny"] = [](RunConfig& c, const std::string& v) {
            const auto& g = c.problem.grid;
            c.problem.grid = SamplingGrid::centered(g.nx(), count_of(v), g.pitch());
        };
        s["grid.pitch"] = [](RunConfig& c, const std::string& v) {
            const auto& g = c.problem.grid;
            c.problem.grid = SamplingGrid::centered(g.nx(), g.ny(), number_of(v));
        };
        s["cascade.planes"] = [](RunConfig& c, const std::string& v) { c.problem.cascade.planes = count_of(v); };
        s["cascade.plane_spacing"] = [](RunConfig& c, const std::string& v) {
            c.problem.cascade.plane_spacing = number_of(v);
        };
        s["cascade.wavelength"] = [](RunConfig& c, const std::string& v) {
            c.problem.cascade.wavelength = number_of(v);
        };
        beam_setters(s, "input", &DesignProblem::input);
        beam_setters(s, "output", &DesignProblem::output);
        s["optimizer.iterations"] = [](RunConfig& c, const std::string& v) { c.optimizer.iterations = count_of(v); };
        s["optimizer.plane_order"] = [](RunConfig& c, const std::string& v) {
            if (v == "ascending") c.optimizer.plane_order = PlaneOrder::ascending;
            else if (v == "descending") c.optimizer.plane_order = PlaneOrder::descending;
            else throw std::invalid_argument("expected ascending or descending");
        };
        s["optimizer.stop_fidelity"] = [](RunConfig& c, const std::string& v) {
            if (v == "none") c.optimizer.stop_fidelity.reset();
            else c.optimizer.stop_fidelity = number_of(v);
        };
        s["optimizer.phase_reference"] = [](RunConfig& c, const std::string& v) {
            if (v == "overlap") c.optimizer.phase_reference = PhaseReference::overlap;
            else if (v == "plain_integral") c.optimizer.phase_reference = PhaseReference::plain_integral;
            else throw std::invalid_argument("expected overlap or plain_integral");
        };
        s["optimizer.update_mode"] = [](RunConfig& c, const std::string& v) {
            if (v == "replace") c.optimizer.update_mode = UpdateMode::replace;
            else if (v == "increment") c.optimizer.update_mode = UpdateMode::increment;
            else throw std::invalid_argument("expected replace or increment");
        };
        s["design.theta"] = [](RunConfig& c, const std::string& v) { c.design_theta = number_of(v); };
        s["design.phi"] = [](RunConfig& c, const std::string& v) { c.design_phi = number_of(v); };
        s["sweep.theta_min"] = [](RunConfig& c, const std::string& v) { c.sweep.theta_min = number_of(v); };
        s["sweep.theta_max"] = [](RunConfig& c, const std::string& v) { c.sweep.theta_max = number_of(v); };
        s["sweep.theta_step"] = [](RunConfig& c, const std::string& v) { c.sweep.theta_step = number_of(v); };
        s["sweep.phi_min"] = [](RunConfig& c, const std::string& v) { c.sweep.phi_min = number_of(v); };
        s["sweep.phi_max"] = [](RunConfig& c, const std::string& v) { c.sweep.phi_max = number_of(v); };
        s["sweep.phi_step"] = [](RunConfig& c, const std::string& v) { c.sweep.phi_step = number_of(v); };
        s["sweep.correcting_mask"] = [](RunConfig& c, const std::string& v) { c.sweep.correcting_mask = flag_of(v); };
        s["sweep.perturb_alpha"] = [](RunConfig& c, const std::string& v) { c.sweep.perturb_alpha = number_of(v); };
        s["sweep.workers"] = [](RunConfig& c, const std::string& v) { c.sweep.workers = count_of(v); };
        s["sweep.record_timing"] = [](RunConfig& c, const std::string& v) { c.sweep.record_timing = flag_of(v); };
        s["slm.width"] = [](RunConfig& c, const std::string& v) { c.slm.slm_width = number_of(v); };
        s["slm.height"] = [](RunConfig& c, const std::string& v) { c.slm.slm_height = number_of(v); };
        s["slm.pitch"] = [](RunConfig& c, const std::string& v) { c.slm.pixel_pitch = number_of(v); };
        s["slm.guard_pixels"] = [](RunConfig& c, const std::string& v) { c.slm.guard_pixels = count_of(v); };
        s["slm.planes"] = [](RunConfig& c, const std::string& v) { c.slm.planes = count_of(v); };
        s["geometry.mirror_distances"] = [](RunConfig& c, const std::string& v) {
            c.geometry.mirror_distances = list_of(v);
        };
        s["geometry.angle_min"] = [](RunConfig& c, const std::string& v) { c.geometry.angle_min = number_of(v); };
        s["geometry.angle_max"] = [](RunConfig& c, const std::string& v) { c.geometry.angle_max = number_of(v); };
        s["geometry.angle_count"] = [](RunConfig& c, const std::string& v) { c.geometry.angle_count = count_of(v); };
        s["geometry.waist_min"] = [](RunConfig& c, const std::string& v) { c.geometry.waist_min = number_of(v); };
        s["geometry.waist_max"] = [](RunConfig& c, const std::string& v) { c.geometry.waist_max = number_of(v); };
        s["geometry.waist_count"] = [](RunConfig& c, const std::string& v) { c.geometry.waist_count = count_of(v); };
        s["perturb.gradient"] = [](RunConfig& c, const std::string& v) { c.perturb.gradient = number_of(v); };
        s["perturb.correlation_length"] = [](RunConfig& c, const std::string& v) {
            c.perturb.correlation_length = number_of(v);
        };
        s["perturb.seed"] = [](RunConfig& c, const std::string& v) { c.perturb.seed = count_of(v); };
        s["perturb.pattern_nx"] = [](RunConfig& c, const std::string& v) { c.perturb.pattern_nx = count_of(v); };
        s["perturb.alphas"] = [](RunConfig& c, const std::string& v) { c.perturb.alphas = list_of(v); };
        s["perturb.theta"] = [](RunConfig& c, const std::string& v) { c.perturb.theta = number_of(v); };
        s["perturb.phi"] = [](RunConfig& c, const std::string& v) { c.perturb.phi = number_of(v); };
        s["knife.mean_counts"] = [](RunConfig& c, const std::string& v) { c.knife.window.mean_counts = number_of(v); };
        s["knife.sd_counts"] = [](RunConfig& c, const std::string& v) { c.knife.window.sd_counts = number_of(v); };
        s["knife.counts_per_2pi"] = [](RunConfig& c, const std::string& v) {
            c.knife.window.counts_per_2pi = number_of(v);
        };
        s["knife.seed"] = [](RunConfig& c, const std::string& v) { c.knife.window.seed = count_of(v); };
        s["knife.realizations"] = [](RunConfig& c, const std::string& v) {
            c.knife.window.realizations = count_of(v);
        };
        s["knife.beam"] = [](RunConfig& c, const std::string& v) { c.knife.beam = count_of(v); };
        s["knife.span"] = [](RunConfig& c, const std::string& v) { c.knife.span = number_of(v); };
        s["run.out_dir"] = [](RunConfig& c, const std::string& v) { c.out_dir = v; };
        return s;
    }();
    return table;
}

} // namespace

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty value");
    double acc = 1.0;
    char op = '*';
    std::size_t pos = 0;
    for (;;) {
        const std::size_t next = t.find_first_of("*/", pos);
        std::string tok = trim(t.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        double sign = 1.0;
        if (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) {
            if (tok[0] == '-') sign = -1.0;
            tok = trim(tok.substr(1));
        }
        double v = 0.0;
        if (tok == "pi") {
            v = std::numbers::pi;
        } else {
            if (tok.empty() || tok[0] == '-' || tok[0] == '+') throw std::invalid_argument("malformed number '" + text + "'");
            char* end = nullptr;
            v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size()) throw std::invalid_argument("malformed number '" + text + "'");
        }
        v *= sign;
        if (op == '*') acc *= v;
        else {
            if (v == 0.0) throw std::invalid_argument("division by zero in '" + text + "'");
            acc /= v;
        }
        if (next == std::string::npos) break;
        op = t[next];
        pos = next + 1;
    }
    if (!std::isfinite(acc)) throw std::invalid_argument("value is not finite");
    return acc;
}

std::vector<double> SweepConfig::thetas() const { return samples(theta_min, theta_max, theta_step, true); }
std::vector<double> SweepConfig::phis() const { return samples(phi_min, phi_max, phi_step, false); }

void SweepConfig::validate() const {
    if (!(theta_step > 0.0) || !(phi_step > 0.0)) throw ConfigError("sweep steps must be positive", 0, "sweep.theta_step");
    if (theta_max < theta_min) throw ConfigError("sweep.theta_max is below sweep.theta_min", 0, "sweep.theta_max");
    if (!(phi_max > phi_min)) throw ConfigError("sweep.phi_max must exceed sweep.phi_min", 0, "sweep.phi_max");
    if (!divides(theta_min, theta_max, theta_step))
        throw ConfigError("sweep.theta_step does not divide the theta range", 0, "sweep.theta_step");
    if (!divides(phi_min, phi_max, phi_step))
        throw ConfigError("sweep.phi_step does not divide the phi range", 0, "sweep.phi_step");
    if (workers < 1) throw ConfigError("sweep.workers must be at least 1", 0, "sweep.workers");
    if (perturb_alpha < 0.0) throw ConfigError("sweep.perturb_alpha must be non-negative", 0, "sweep.perturb_alpha");
    if (correcting_mask && perturb_alpha > 0.0)
        throw ConfigError("sweep.correcting_mask and sweep.perturb_alpha are exclusive", 0, "sweep.perturb_alpha");
}

void RunConfig::validate() const {
    sweep.validate();
    auto wrap = [](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(e.what(), 0, key);
        }
    };
    wrap("input", [&] { problem.input.validate(); });
    wrap("output", [&] { problem.output.validate(); });
    wrap("optimizer", [&] { optimizer.validate(); });
    wrap("slm", [&] { slm.validate(); });
    if (problem.cascade.planes < 1) throw ConfigError("cascade.planes must be at least 1", 0, "cascade.planes");
    if (!(problem.cascade.plane_spacing > 0.0))
        throw ConfigError("cascade.plane_spacing must be positive", 0, "cascade.plane_spacing");
    if (problem.input.count != problem.output.count)
        throw ConfigError("input and output arrays differ in beam count", 0, "output.m");
    if (geometry.mirror_distances.empty())
        throw ConfigError("geometry.mirror_distances is empty", 0, "geometry.mirror_distances");
    if (geometry.angle_count < 1 || geometry.waist_count < 1)
        throw ConfigError("geometry scan counts must be at least 1", 0, "geometry.angle_count");
    if (!(perturb.gradient > 0.0)) throw ConfigError("perturb.gradient must be positive", 0, "perturb.gradient");
    if (perturb.alphas.empty()) throw ConfigError("perturb.alphas is empty", 0, "perturb.alphas");
    if (perturb.pattern_nx < problem.grid.nx())
        throw ConfigError("perturb.pattern_nx is narrower than the grid", 0, "perturb.pattern_nx");
    if (knife.beam < 1 || knife.beam > problem.input.count)
        throw ConfigError("knife.beam is outside the input array", 0, "knife.beam");
    if (!(knife.span > 0.0)) throw ConfigError("knife.span must be positive", 0, "knife.span");
}

RunConfig parse_config(std::istream& in) {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.find('.') == std::string::npos || !setters().contains(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no, key);
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'", line_no, key);
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing value for '" + key + "'", line_no, key);
        entries.push_back({line_no, key, value});
    }

    RunConfig cfg;
    const double default_input_tilt = cfg.problem.input.tilt_gradient * cfg.problem.grid.pitch();
    auto apply = [&](const Entry& e) {
        try {
            setters().at(e.key)(cfg, e.value);
        } catch (const std::exception& ex) {
            throw ConfigError("line " + std::to_string(e.line) + ": bad value for '" + e.key + "': " + ex.what(),
                              e.line, e.key);
        }
    };
    // The output array defaults to the input array demagnified by 4, so it is
    // derived after the input keys and then overridden key by key.
    cfg.problem.input.tilt_gradient = default_input_tilt;
    for (const auto& e : entries) {
        if (e.key.starts_with("output.")) continue;
        apply(e);
    }
    cfg.problem.output = cfg.problem.input.demagnified(4.0);
    for (const auto& e : entries)
        if (e.key.starts_with("output.")) apply(e);
    cfg.problem.input.tilt_gradient /= cfg.problem.grid.pitch();
    cfg.problem.output.tilt_gradient /= cfg.problem.grid.pitch();

    cfg.problem.input.wavelength = cfg.problem.cascade.wavelength;
    cfg.problem.output.wavelength = cfg.problem.cascade.wavelength;
    cfg.slm.wavelength = cfg.problem.cascade.wavelength;

    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        int line = 0;
        for (const auto& en : entries)
            if (!e.key().empty() && en.key.starts_with(e.key())) line = en.line;
        throw ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + e.what() : std::string(e.what()), line,
                          e.key());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string canonical_text(const RunConfig& c) {
    std::ostringstream o;
    auto put = [&](const std::string& k, const std::string& v) { o << k << " = " << v << '\n'; };
    auto num = [&](const std::string& k, double v) { put(k, fmt(v)); };
    auto list = [&](const std::string& k, const std::vector<double>& vs) {
        std::string s;
        for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + fmt(vs[i]);
        put(k, s);
    };
    const auto& g = c.problem.grid;
    num("grid.nx", static_cast<double>(g.nx()));
    num("grid.ny", static_cast<double>(g.ny()));
    num("grid.pitch", g.pitch());
    num("cascade.planes", static_cast<double>(c.problem.cascade.planes));
    num("cascade.plane_spacing", c.problem.cascade.plane_spacing);
    num("cascade.wavelength", c.problem.cascade.wavelength);
    for (const auto& [name, b] : {std::pair{"input", &c.problem.input}, std::pair{"output", &c.problem.output}}) {
        const std::string s = name;
        num(s + ".m", static_cast<double>(b->count));
        num(s + ".waist_um", b->waist * 1e6);
        num(s + ".waist_offset_cm", b->waist_offset * 1e2);
        num(s + ".spacing_um", b->spacing * 1e6);
        num(s + ".center_x_um", b->axis_origin.x * 1e6);
        num(s + ".first_center_y_um", b->axis_origin.y * 1e6);
        num(s + ".tilt_rad_per_px", b->tilt_gradient * g.pitch());
        num(s + ".tilt_beam_index", static_cast<double>(b->tilt_beam));
    }
    num("optimizer.iterations", static_cast<double>(c.optimizer.iterations));
    put("optimizer.plane_order", c.optimizer.plane_order == PlaneOrder::ascending ? "ascending" : "descending");
    put("optimizer.stop_fidelity", c.optimizer.stop_fidelity ? fmt(*c.optimizer.stop_fidelity) : "none");
    put("optimizer.phase_reference",
        c.optimizer.phase_reference == PhaseReference::overlap ? "overlap" : "plain_integral");
    put("optimizer.update_mode", c.optimizer.update_mode == UpdateMode::replace ? "replace" : "increment");
    num("design.theta", c.design_theta);
    num("design.phi", c.design_phi);
    num("sweep.theta_min", c.sweep.theta_min);
    num("sweep.theta_max", c.sweep.theta_max);
    num("sweep.theta_step", c.sweep.theta_step);
    num("sweep.phi_min", c.sweep.phi_min);
    num("sweep.phi_max", c.sweep.phi_max);
    num("sweep.phi_step", c.sweep.phi_step);
    put("sweep.correcting_mask", c.sweep.correcting_mask ? "true" : "false");
    num("sweep.perturb_alpha", c.sweep.perturb_alpha);
    num("slm.width", c.slm.slm_width);
    num("slm.height", c.slm.slm_height);
    num("slm.pitch", c.slm.pixel_pitch);
    num("slm.guard_pixels", static_cast<double>(c.slm.guard_pixels));
    num("slm.planes", static_cast<double>(c.slm.planes));
    list("geometry.mirror_distances", c.geometry.mirror_distances);
    num("geometry.angle_min", c.geometry.angle_min);
    num("geometry.angle_max", c.geometry.angle_max);
    num("geometry.angle_count", static_cast<double>(c.geometry.angle_count));
    num("geometry.waist_min", c.geometry.waist_min);
    num("geometry.waist_max", c.geometry.waist_max);
    num("geometry.waist_count", static_cast<double>(c.geometry.waist_count));
    num("perturb.gradient", c.perturb.gradient);
    num("perturb.correlation_length", c.perturb.correlation_length);
    num("perturb.seed", static_cast<double>(c.perturb.seed));
    num("perturb.pattern_nx", static_cast<double>(c.perturb.pattern_nx));
    list("perturb.alphas", c.perturb.alphas);
    num("perturb.theta", c.perturb.theta);
    num("perturb.phi", c.perturb.phi);
    num("knife.mean_counts", c.knife.window.mean_counts);
    num("knife.sd_counts", c.knife.window.sd_counts);
    num("knife.counts_per_2pi", c.knife.window.counts_per_2pi);
    num("knife.seed", static_cast<double>(c.knife.window.seed));
    num("knife.realizations", static_cast<double>(c.knife.window.realizations));
    num("knife.beam", static_cast<double>(c.knife.beam));
    num("knife.span", c.knife.span);
    return o.str();
}

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical_text(config)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mplc
