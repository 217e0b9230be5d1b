#include "mplc/runs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "mplc/errors.hpp"
#include "mplc/heatmap.hpp"
#include "mplc/mask_io.hpp"
#include "mplc/parallel.hpp"
#include "mplc/unitary.hpp"

namespace mplc {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw FormatError("cannot write '" + path.string() + "'");
    return f;
}

// Write to a temporary name and rename, so an interrupted run never leaves
// a truncated file where a resume would read it.
void write_atomic(const fs::path& path, const std::string& bytes) {
    const fs::path tmp = path.string() + ".tmp";
    {
        auto f = open_out(tmp, true);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw FormatError("cannot write '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

} // namespace

DesignReport run_design(const RunConfig& config, double theta, double phi, const fs::path& out) {
    fs::create_directories(out);
    DesignReport rep;
    rep.theta = theta;
    rep.phi = phi;
    const auto u = u2(theta, phi);
    rep.result = design(config.problem, u.matrix, config.optimizer);
    const Cascade cascade(config.problem.grid, config.problem.cascade.plane_spacing, config.problem.cascade.wavelength);
    rep.transfer = extract_transfer_matrix(cascade.forward(config.problem.inputs(), rep.result.stack),
                                           config.problem.output_basis());

    save_stack(out / "design.mplm", rep.result.stack);
    {
        auto f = open_out(out / "design_transfer.txt");
        write_transfer_matrix(f, rep.transfer);
    }
    std::ostringstream r;
    r << "config " << config_hash(config) << '\n'
      << "theta " << fmt(theta) << '\n'
      << "phi " << fmt(phi) << '\n'
      << "fidelity " << fmt(rep.result.final_fidelity) << '\n'
      << "iterations " << rep.result.history.size() << '\n'
      << "unitarity_defect " << fmt(unitarity_defect(rep.transfer)) << '\n'
      << "history";
    for (double h : rep.result.history) r << ' ' << fmt(h);
    r << '\n';
    write_atomic(out / "design_report.txt", r.str());
    return rep;
}

FidelityMap run_map(const RunConfig& config, std::size_t workers, const fs::path& out) {
    fs::create_directories(out);
    const fs::path csv = out / "map.csv";
    std::optional<FidelityMap> previous;
    if (fs::exists(csv)) {
        std::ifstream in(csv);
        previous = read_map_csv(in);
        if (previous->config_hash != config_hash(config))
            throw ConfigError("'" + csv.string() + "' was written with config " + previous->config_hash +
                                  ", this config is " + config_hash(config) + "; use a fresh output directory",
                              0, "run.out_dir");
    }
    const FidelityMap map = compute_map(config, workers, previous ? &*previous : nullptr);
    std::ostringstream o;
    write_map_csv(o, map, config.sweep.record_timing);
    write_atomic(csv, o.str());
    write_atomic(out / "map.ppm", render_heatmap(map));
    return map;
}

GeometryReport run_geometry(const RunConfig& config, const fs::path& out) {
    const auto& gs = config.geometry;
    if (gs.mirror_distances.empty()) throw ConfigError("geometry.mirror_distances is empty", 0, "geometry.mirror_distances");
    fs::create_directories(out);
    const auto angles = linspace(gs.angle_min, gs.angle_max, gs.angle_count);
    const auto waists = linspace(gs.waist_min, gs.waist_max, gs.waist_count);
    GeometryReport rep;
    rep.cells = reflection_table(config.slm, gs.mirror_distances, angles, waists);
    rep.max_planes = max_planes_vs_L(config.slm, gs.mirror_distances, angles, waists);

    std::ostringstream t;
    t << "# config " << config_hash(config) << '\n' << "L_m,tau_rad,waist_m,reflections\n";
    for (const auto& c : rep.cells)
        t << fmt(c.mirror_distance) << ',' << fmt(c.insertion_angle) << ',' << fmt(c.waist) << ',' << c.reflections
          << '\n';
    write_atomic(out / "reflections.csv", t.str());

    std::ostringstream m;
    m << "# config " << config_hash(config) << '\n' << "L_m,max_reflections,tau_rad,waist_m\n";
    for (const auto& r : rep.max_planes)
        m << fmt(r.mirror_distance) << ',' << r.max_reflections << ',' << fmt(r.best_angle) << ',' << fmt(r.best_waist)
          << '\n';
    write_atomic(out / "max_planes.csv", m.str());
    return rep;
}

PerturbReport run_perturb(const RunConfig& config, std::size_t workers, const fs::path& out) {
    fs::create_directories(out);
    const auto& problem = config.problem;
    const auto u = u2(config.perturb.theta, config.perturb.phi);
    const auto designed = design(problem, u.matrix, config.optimizer);
    const PerturbationSpec spec = make_perturbation(config, 0.0);

    PerturbReport rep;
    rep.gradient = mean_phase_gradient(spec.pattern, plane_regions(problem.grid, spec.region_offsets));
    rep.rows = fidelity_vs_alpha(designed.stack, problem.inputs(), problem.targets(u.matrix),
                                 problem.cascade.wavelength, spec, config.perturb.alphas, workers);

    PhaseMaskStack single{{spec.pattern}, problem.cascade.plane_spacing};
    save_stack(out / "perturbation.mplm", single);
    std::ostringstream side;
    side << "config " << config_hash(config) << '\n'
         << "seed " << config.perturb.seed << '\n'
         << "target_gradient " << fmt(config.perturb.gradient) << '\n'
         << "measured_gradient " << fmt(rep.gradient) << '\n'
         << "correlation_length " << fmt(config.perturb.correlation_length) << '\n'
         << "region_offsets";
    for (auto o : spec.region_offsets) side << ' ' << o;
    side << '\n';
    write_atomic(out / "perturbation.mplm.txt", side.str());

    std::ostringstream a;
    a << "# config " << config_hash(config) << '\n' << "alpha,fidelity\n";
    for (const auto& r : rep.rows) a << fmt(r.alpha) << ',' << fmt(r.fidelity) << '\n';
    write_atomic(out / "alpha.csv", a.str());
    return rep;
}

std::vector<KnifeRow> run_knife(const RunConfig& config, std::size_t workers, const fs::path& out) {
    fs::create_directories(out);
    const auto& problem = config.problem;
    const auto& spec = problem.input;
    const std::size_t m = config.knife.beam;
    const auto input = problem.inputs().at(m - 1);
    const PhaseMaskStack flat =
        PhaseMaskStack::zeros(problem.grid, problem.cascade.planes, problem.cascade.plane_spacing);
    const double lambda = problem.cascade.wavelength;
    const double slope = spec.tilt_beam == m ? spec.tilt_gradient * lambda / (2.0 * std::numbers::pi) : 0.0;

    const std::size_t planes = problem.cascade.planes;
    std::vector<KnifeRow> rows(planes);
    std::vector<KnifeScan> scans(planes);
    parallel_for(planes, workers, [&](std::size_t k) {
        const double z = static_cast<double>(k) * problem.cascade.plane_spacing;
        KnifeRow& row = rows[k];
        row.plane = k + 1;
        row.truth.center = spec.center(m).y + slope * z;
        row.truth.waist = gaussian_size(spec.waist, lambda, z - spec.waist_offset);
        const double half = config.knife.span * row.truth.waist;
        const auto pos = edge_positions(problem.grid, ScanAxis::y, row.truth.center - half, row.truth.center + half);
        scans[k] = knife_edge_scan(input, flat, lambda, k + 1, pos, config.knife.window, ScanAxis::y);
        row.estimate = estimate_beam_params(scans[k]);
    });

    std::ostringstream s;
    s << "# config " << config_hash(config) << '\n' << "plane,position,power,power_upper\n";
    for (const auto& sc : scans)
        for (std::size_t i = 0; i < sc.positions.size(); ++i)
            s << sc.plane_index << ',' << fmt(sc.positions[i]) << ',' << fmt(sc.powers[i]) << ','
              << fmt(sc.powers_upper[i]) << '\n';
    write_atomic(out / "knife_scan.csv", s.str());

    std::ostringstream e;
    e << "# config " << config_hash(config) << '\n' << "plane,center,waist,true_center,true_waist\n";
    for (const auto& r : rows)
        e << r.plane << ',' << fmt(r.estimate.center) << ',' << fmt(r.estimate.waist) << ',' << fmt(r.truth.center)
          << ',' << fmt(r.truth.waist) << '\n';
    write_atomic(out / "knife_estimates.csv", e.str());
    return rows;
}

void render_map_file(const fs::path& csv, const fs::path& ppm) {
    std::ifstream in(csv);
    if (!in) throw FormatError("cannot read '" + csv.string() + "'");
    const FidelityMap map = read_map_csv(in);
    write_atomic(ppm, render_heatmap(map));
}

} // namespace mplc
