// mplc: command-line front end for designs, fidelity maps and the
// supporting studies. Exit codes: 0 ok, 2 config error, 3 compute failure,
// 4 map with more than 10% failed cells.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mplc/config.hpp"
#include "mplc/errors.hpp"
#include "mplc/runs.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_compute = 3;
constexpr int exit_partial = 4;

struct Common {
    std::string config_path;
    std::string out;
    std::size_t workers = 0;
    std::optional<std::string> theta;
    std::optional<std::string> phi;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Config file (section.key = value lines)");
    cmd->add_option("--out", c.out, "Output directory (default: run.out_dir)");
    cmd->add_option("--workers", c.workers, "Worker threads (default: sweep.workers)")->check(CLI::PositiveNumber);
}

mplc::RunConfig load(const Common& c) {
    mplc::RunConfig cfg;
    if (!c.config_path.empty()) cfg = mplc::load_config(c.config_path);
    if (!c.out.empty()) cfg.out_dir = c.out;
    return cfg;
}

double angle_arg(const std::string& text, const char* key) {
    try {
        return mplc::parse_number(text);
    } catch (const std::exception& e) {
        throw mplc::ConfigError(std::string("bad value for ") + key + ": " + e.what(), 0, key);
    }
}

std::size_t workers_of(const Common& c, const mplc::RunConfig& cfg) {
    return c.workers > 0 ? c.workers : cfg.sweep.workers;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-plane light converter design and analysis"};
    app.require_subcommand(1);

    Common design_opts, map_opts, geometry_opts, perturb_opts, knife_opts;
    auto* design_cmd = app.add_subcommand("design", "Optimise one U(theta, phi)");
    add_common(design_cmd, design_opts);
    design_cmd->add_option("--theta", design_opts.theta, "theta (radians; 'pi' allowed, e.g. 3*pi/20)");
    design_cmd->add_option("--phi", design_opts.phi, "phi (radians)");

    auto* map_cmd = app.add_subcommand("map", "Fidelity map over the sweep grid");
    add_common(map_cmd, map_opts);

    auto* geometry_cmd = app.add_subcommand("geometry", "Reflection-count tables for the SLM geometry");
    add_common(geometry_cmd, geometry_opts);

    auto* perturb_cmd = app.add_subcommand("perturb", "Fidelity under a synthetic SLM phase perturbation");
    add_common(perturb_cmd, perturb_opts);
    perturb_cmd->add_option("--seed", perturb_opts.seed, "Seed of the synthetic pattern");

    auto* knife_cmd = app.add_subcommand("knife", "Diffractive knife-edge scans at every plane");
    add_common(knife_cmd, knife_opts);
    knife_cmd->add_option("--seed", knife_opts.seed, "Seed of the random window");

    std::string render_in, render_out;
    auto* render_cmd = app.add_subcommand("render", "Render a map CSV as a PPM heatmap");
    render_cmd->add_option("map", render_in, "map.csv written by 'map'")->required();
    render_cmd->add_option("--out", render_out, "Output .ppm (default: next to the CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*design_cmd) {
            auto cfg = load(design_opts);
            const double theta = design_opts.theta ? angle_arg(*design_opts.theta, "--theta") : cfg.design_theta;
            const double phi = design_opts.phi ? angle_arg(*design_opts.phi, "--phi") : cfg.design_phi;
            const auto rep = mplc::run_design(cfg, theta, phi, cfg.out_dir);
            std::printf("theta %.6f phi %.6f fidelity %.6f (%zu iterations, %.1f s)\n", theta, phi,
                        rep.result.final_fidelity, rep.result.history.size(), rep.result.wall_time);
            return exit_ok;
        }
        if (*map_cmd) {
            auto cfg = load(map_opts);
            const auto map = mplc::run_map(cfg, workers_of(map_opts, cfg), cfg.out_dir);
            const std::size_t cells = map.fidelity.size();
            std::printf("%s map: %zu cells, %zu failed, mean fidelity %.6f\n", mplc::to_string(map.mode), cells,
                        map.failed(), map.mean());
            return 10 * map.failed() > cells ? exit_partial : exit_ok;
        }
        if (*geometry_cmd) {
            auto cfg = load(geometry_opts);
            const auto rep = mplc::run_geometry(cfg, cfg.out_dir);
            for (const auto& r : rep.max_planes)
                std::printf("L %.4f m: %d reflections\n", r.mirror_distance, r.max_reflections);
            return exit_ok;
        }
        if (*perturb_cmd) {
            auto cfg = load(perturb_opts);
            if (perturb_opts.seed) cfg.perturb.seed = *perturb_opts.seed;
            const auto rep = mplc::run_perturb(cfg, workers_of(perturb_opts, cfg), cfg.out_dir);
            std::printf("pattern gradient %.4f rad/px\n", rep.gradient);
            for (const auto& r : rep.rows) std::printf("alpha %.3f fidelity %.6f\n", r.alpha, r.fidelity);
            return exit_ok;
        }
        if (*knife_cmd) {
            auto cfg = load(knife_opts);
            if (knife_opts.seed) cfg.knife.window.seed = *knife_opts.seed;
            const auto rows = mplc::run_knife(cfg, workers_of(knife_opts, cfg), cfg.out_dir);
            for (const auto& r : rows)
                std::printf("plane %zu: center %.2f um (true %.2f), waist %.2f um (true %.2f)\n", r.plane,
                            r.estimate.center * 1e6, r.truth.center * 1e6, r.estimate.waist * 1e6,
                            r.truth.waist * 1e6);
            return exit_ok;
        }
        if (*render_cmd) {
            std::filesystem::path out = render_out;
            if (out.empty()) out = std::filesystem::path(render_in).replace_extension(".ppm");
            mplc::render_map_file(render_in, out);
            return exit_ok;
        }
    } catch (const mplc::ConfigError& e) {
        std::fprintf(stderr, "mplc: config error: %s\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "mplc: %s\n", e.what());
        return exit_compute;
    }
    return exit_ok;
}
