// Acceptance checks for the reference converter. Prints one PASS/FAIL line
// per criterion; `--only N` runs a single one. Maps are cached under
// --cache (resumed when the config hash matches).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mplc/alignment.hpp"
#include "mplc/beam_array.hpp"
#include "mplc/config.hpp"
#include "mplc/fidelity_map.hpp"
#include "mplc/geometry.hpp"
#include "mplc/perturbation.hpp"
#include "mplc/propagation.hpp"
#include "mplc/runs.hpp"
#include "mplc/unitary.hpp"
#include "mplc/wfm.hpp"

using namespace mplc;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

fs::path cache_dir = "acceptance_cache";

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::size_t map_workers() {
    return std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
}

double relative_rms(const ComplexField& a, const ComplexField& b) {
    return rms_difference(a, b) / (norm(b) / std::sqrt(b.grid().size() * b.grid().cell_area()));
}

double second_moment_size(const ComplexField& f) {
    const auto m = marginal_intensity_x(f);
    double s0 = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = f.grid().x(i);
        s0 += m[i];
        s1 += m[i] * x;
        s2 += m[i] * x * x;
    }
    return 2.0 * std::sqrt(s2 / s0 - (s1 / s0) * (s1 / s0));
}

FidelityMap desk_map(bool corrected) {
    RunConfig cfg;
    cfg.sweep.correcting_mask = corrected;
    return run_map(cfg, map_workers(), cache_dir / (corrected ? "corrected" : "design"));
}

Outcome overlap() {
    const auto t0 = std::chrono::steady_clock::now();
    auto spec = BeamArraySpec::reference_input();
    spec.tilt_beam = 0;
    const auto beams = make_beam_array(spec, SamplingGrid::centered(256, 256, 20e-6)).beams;
    const double o = std::abs(inner_product(beams[0], beams[1]));
    const double t = seconds_since(t0);
    return {std::abs(o - 7.5e-5) <= 1e-6 && t < 1.0, fmt("|<1|2>| = %.4e (target 7.5e-5 +- 1e-6), %.3f s", o, t)};
}

Outcome reference_design() {
    const auto u = u2(3 * pi / 20, pi / 2);
    OptimizerConfig cfg;
    cfg.iterations = 100;
    const auto r = design(DesignProblem::reference(), u.matrix, cfg);
    return {r.final_fidelity > 0.88 && r.wall_time < 90.0,
            fmt("F = %.5f (> 0.88), %.1f s single-threaded (< 90 s)", r.final_fidelity, r.wall_time)};
}

Outcome design_map() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = desk_map(false);
    const double mean = m.mean();
    return {m.fidelity.size() == 84 && m.failed() == 0 && mean >= 0.84 && mean <= 0.96,
            fmt("%zu cells, %zu failed, mean %.4f (target [0.84, 0.96]), min %.4f, %.0f s this run", m.fidelity.size(),
                m.failed(), mean, *std::min_element(m.fidelity.begin(), m.fidelity.end()), seconds_since(t0))};
}

Outcome corrected_map() {
    const auto d = desk_map(false);
    const auto c = desk_map(true);
    const double diff = std::abs(c.mean() - d.mean());
    return {c.failed() == 0 && diff <= 0.03,
            fmt("corrected mean %.4f, design mean %.4f, |diff| %.4f (<= 0.03)", c.mean(), d.mean(), diff)};
}

Outcome fidelity_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> th(0.0, pi / 2), ph(-pi, pi);
    double worst_closed = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = th(rng);
        const double f = gate_fidelity_matrix(TransferMatrix::Identity(2, 2), u2(t, 0.0).matrix);
        worst_closed = std::max(worst_closed, std::abs(f - std::cos(t) * std::cos(t)));
    }
    const auto basis = make_beam_array(BeamArraySpec::reference_input().demagnified(4.0),
                                       SamplingGrid::centered(256, 256, 20e-6))
                           .beams;
    double worst_field = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto ut = u2(th(rng), ph(rng)).matrix;
        const auto ud = u2(th(rng), ph(rng)).matrix;
        const double f = gate_fidelity_fields(target_states(basis, ut), target_states(basis, ud));
        worst_field = std::max(worst_field, std::abs(f - gate_fidelity_matrix(ut, ud)));
    }
    return {worst_closed <= 1e-12 && worst_field <= 1e-3,
            fmt("max |F - cos^2| = %.1e (<= 1e-12), max field/matrix gap = %.1e (<= 1e-3)", worst_closed, worst_field)};
}

Outcome propagator_physics() {
    const auto grid = SamplingGrid::centered(256, 256, 20e-6);
    const double lambda = 637e-9, w0 = 161.5e-6;
    const auto f = gaussian_beam(grid, {0, 0}, w0, 0.0, 0.0, lambda).field;
    double worst_size = 0.0, worst_norm = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double z = 0.05 * k;
        const auto g = propagate(f, z, lambda);
        worst_size = std::max(worst_size, std::abs(second_moment_size(g) / gaussian_size(w0, lambda, z) - 1.0));
        worst_norm = std::max(worst_norm, std::abs(norm(g) - 1.0));
    }
    const auto beam = make_beam_array(BeamArraySpec::reference_input(), grid).beams[1];
    const Propagator hop(grid, 0.1, lambda);
    const double round_trip = relative_rms(hop.backward(hop.forward(beam)), beam);
    return {worst_size <= 0.01 && worst_norm <= 1e-9 && round_trip <= 1e-9,
            fmt("max w(z) error %.2f%% (<= 1%%), max norm drift %.1e, round trip rms %.1e (<= 1e-9)",
                100 * worst_size, worst_norm, round_trip)};
}

Outcome geometry_planner() {
    const GeometryScanConfig scan;
    const auto rows = max_planes_vs_L(MPLCGeometry{}, scan.mirror_distances,
                                      linspace(scan.angle_min, scan.angle_max, scan.angle_count),
                                      linspace(scan.waist_min, scan.waist_max, scan.waist_count));
    bool non_increasing = true;
    int realistic = 0;
    std::string table;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].max_reflections > rows[i - 1].max_reflections) non_increasing = false;
        // Mirror distances from 2.5 cm up; below that the mount and the beam
        // insertion optics do not fit.
        if (rows[i].mirror_distance >= 0.025 - 1e-12) realistic = std::max(realistic, rows[i].max_reflections);
        table += fmt("%s%g:%d", i ? " " : "", rows[i].mirror_distance * 100, rows[i].max_reflections);
    }
    return {std::abs(realistic - 10) <= 1 && non_increasing,
            fmt("max over L in [2.5, 10] cm = %d (10 +- 1), non-increasing %s; L[cm]:max {%s}", realistic,
                non_increasing ? "yes" : "no", table.c_str())};
}

Outcome perturbation() {
    const RunConfig cfg;
    const auto problem = DesignProblem::reference();
    const auto u = u2(pi / 4, pi / 2);
    OptimizerConfig oc;
    oc.iterations = 100;
    const auto r = design(problem, u.matrix, oc);
    const auto spec = make_perturbation(cfg, 0.0);
    const double gradient = mean_phase_gradient(spec.pattern, plane_regions(problem.grid, spec.region_offsets));
    const std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0, 1.25};
    const auto rows = fidelity_vs_alpha(r.stack, problem.inputs(), problem.targets(u.matrix),
                                        problem.cascade.wavelength, spec, alphas, map_workers());
    bool monotone = true;
    std::string curve;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].fidelity > rows[i - 1].fidelity + 0.02) monotone = false;
        curve += fmt("%s%.2f:%.3f", i ? " " : "", rows[i].alpha, rows[i].fidelity);
    }
    const double drop = 1.0 - rows[4].fidelity / rows[0].fidelity;
    return {std::abs(gradient - 0.058) < 1e-9 && drop >= 0.15 && monotone,
            fmt("gradient %.4f rad/px, drop at alpha=1 %.1f%% (>= 15%%), non-increasing %s; {%s}", gradient,
                100 * drop, monotone ? "yes" : "no", curve.c_str())};
}

Outcome knife_and_refine() {
    const RunConfig cfg;
    const auto rows = run_knife(cfg, map_workers(), cache_dir / "knife");
    const double pitch = cfg.problem.grid.pitch();
    double worst_centre = 0.0, worst_waist = 0.0;
    for (const auto& k : rows) {
        worst_centre = std::max(worst_centre, std::abs(k.estimate.center - k.truth.center) / pitch);
        worst_waist = std::max(worst_waist, std::abs(k.estimate.waist / k.truth.waist - 1.0));
    }

    const auto problem = DesignProblem::reference();
    OptimizerConfig oc;
    oc.iterations = 100;
    const auto r = design(problem, u2(cfg.design_theta, cfg.design_phi).matrix, oc);
    const auto inputs = problem.inputs();
    const auto ref = stage_reference_profiles(r.stack, inputs, problem.cascade.wavelength);
    const long injected[5][2] = {{2, -3}, {-4, 1}, {5, 0}, {0, -5}, {-1, 4}};
    auto shown = r.stack;
    for (std::size_t p = 0; p < 5; ++p)
        shown.masks[p] = shifted(r.stack.masks[p], injected[p][0], injected[p][1]);
    const auto off = refine_mask_centers(shown, inputs, ref, problem.cascade.wavelength, 6);
    long worst_shift = 0;
    for (std::size_t p = 0; p < 5; ++p)
        worst_shift = std::max({worst_shift, std::abs(off[p].dx + injected[p][0]), std::abs(off[p].dy + injected[p][1])});

    return {rows.size() == 5 && worst_centre <= 1.0 && worst_waist <= 0.05 && worst_shift <= 1,
            fmt("knife: max centre error %.2f px (<= 1), max waist error %.2f%% (<= 5%%); refine: max residual %ld px "
                "(<= 1)",
                worst_centre, 100 * worst_waist, worst_shift)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    // Reduced grid and sweep; the property does not depend on size.
    std::istringstream text("grid.nx = 128\ngrid.ny = 128\noptimizer.iterations = 8\n"
                            "sweep.theta_step = pi/4\nsweep.phi_step = pi/2\n");
    const RunConfig cfg = parse_config(text);
    std::vector<std::string> csv, ppm;
    for (std::size_t workers : {1u, 4u, 3u}) {
        const fs::path out = cache_dir / ("determinism_w" + std::to_string(workers));
        fs::remove_all(out);
        run_map(cfg, workers, out);
        csv.push_back(slurp(out / "map.csv"));
        ppm.push_back(slurp(out / "map.ppm"));
    }
    const bool same = csv[0] == csv[1] && csv[0] == csv[2] && ppm[0] == ppm[1] && ppm[0] == ppm[2];
    return {same && !csv[0].empty(), fmt("workers 1, 4, 3: CSV %s, PPM %s (%zu + %zu bytes)",
                                         csv[0] == csv[1] && csv[0] == csv[2] ? "identical" : "differ",
                                         ppm[0] == ppm[1] && ppm[0] == ppm[2] ? "identical" : "differ", csv[0].size(),
                                         ppm[0].size())};
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else if (a == "--cache" && i + 1 < argc)
            cache_dir = argv[++i];
        else {
            std::fprintf(stderr, "usage: %s [--only N] [--cache DIR]\n", argv[0]);
            return 2;
        }
    }
    fs::create_directories(cache_dir);

    const std::vector<Criterion> criteria{
        {1, "overlap reproduction", overlap},
        {2, "reference design fidelity", reference_design},
        {3, "desk-scale design map", design_map},
        {4, "correcting-mask pipeline", corrected_map},
        {5, "closed-form fidelity oracle", fidelity_oracle},
        {6, "propagator physics", propagator_physics},
        {7, "geometry planner", geometry_planner},
        {8, "perturbation property", perturbation},
        {9, "knife-edge and mask-centre recovery", knife_and_refine},
        {10, "determinism", determinism},
    };

    int failures = 0, ran = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
