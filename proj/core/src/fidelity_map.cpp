#include "mplc/fidelity_map.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "mplc/errors.hpp"
#include "mplc/parallel.hpp"
#include "mplc/unitary.hpp"

namespace mplc {

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool reusable(const FidelityMap* resume, const FidelityMap& map) {
    return resume && resume->config_hash == map.config_hash && resume->mode == map.mode &&
           resume->thetas == map.thetas && resume->phis == map.phis;
}

} // namespace

const char* to_string(MapMode mode) {
    switch (mode) {
    case MapMode::design: return "design";
    case MapMode::corrected: return "corrected";
    case MapMode::perturbed: return "perturbed";
    }
    return "design";
}

MapMode map_mode_from_string(const std::string& s) {
    if (s == "design") return MapMode::design;
    if (s == "corrected") return MapMode::corrected;
    if (s == "perturbed") return MapMode::perturbed;
    throw FormatError("unknown map mode '" + s + "'");
}

std::size_t FidelityMap::failed() const {
    std::size_t n = 0;
    for (double f : fidelity)
        if (!std::isfinite(f)) ++n;
    return n;
}

double FidelityMap::mean() const {
    double acc = 0.0;
    std::size_t n = 0;
    for (double f : fidelity)
        if (std::isfinite(f)) {
            acc += f;
            ++n;
        }
    return n ? acc / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

MapMode map_mode(const SweepConfig& sweep) {
    if (sweep.correcting_mask) return MapMode::corrected;
    if (sweep.perturb_alpha > 0.0) return MapMode::perturbed;
    return MapMode::design;
}

PerturbationSpec make_perturbation(const RunConfig& config, double alpha) {
    const auto& g = config.problem.grid;
    const SamplingGrid strip(config.perturb.pattern_nx, g.ny(), g.pitch(), g.origin());
    PerturbationSpec spec{PhaseMask(strip), alpha, config.perturb.seed,
                          spread_offsets(strip.nx(), g.nx(), config.problem.cascade.planes)};
    spec.pattern = synth_perturbation(strip, config.perturb.gradient, config.perturb.correlation_length,
                                      config.perturb.seed, plane_regions(g, spec.region_offsets));
    return spec;
}

FidelityMap compute_map(const RunConfig& config, std::size_t workers, const FidelityMap* resume) {
    FidelityMap map;
    map.thetas = config.sweep.thetas();
    map.phis = config.sweep.phis();
    map.config_hash = config_hash(config);
    map.mode = map_mode(config.sweep);
    const std::size_t nt = map.thetas.size(), np = map.phis.size();
    map.fidelity.assign(nt * np, std::numeric_limits<double>::quiet_NaN());
    map.seconds.assign(nt * np, 0.0);

    std::vector<char> done(nt * np, 0);
    if (reusable(resume, map))
        for (std::size_t c = 0; c < nt * np; ++c)
            if (std::isfinite(resume->fidelity[c])) {
                map.fidelity[c] = resume->fidelity[c];
                map.seconds[c] = resume->seconds[c];
                done[c] = 1;
            }

    const DesignProblem& problem = config.problem;
    OptimizerConfig opt = config.optimizer;
    opt.record_history = false;

    if (map.mode != MapMode::corrected) {
        std::optional<PerturbationSpec> perturbation;
        if (map.mode == MapMode::perturbed) perturbation = make_perturbation(config, config.sweep.perturb_alpha);
        std::vector<std::size_t> todo;
        for (std::size_t c = 0; c < nt * np; ++c)
            if (!done[c]) todo.push_back(c);
        parallel_for(todo.size(), workers, [&](std::size_t k) {
            const std::size_t c = todo[k];
            const auto t0 = clock_type::now();
            try {
                const auto u = u2(map.thetas[c / np], map.phis[c % np]);
                const auto r = design(problem, u.matrix, opt);
                double f = r.final_fidelity;
                if (perturbation)
                    f = fidelity_vs_alpha(r.stack, problem.inputs(), problem.targets(u.matrix),
                                          problem.cascade.wavelength, *perturbation, {perturbation->alpha}, 1)
                            .front()
                            .fidelity;
                map.fidelity[c] = f;
            } catch (const std::exception&) {
                map.fidelity[c] = std::numeric_limits<double>::quiet_NaN();
            }
            map.seconds[c] = since(t0);
        });
        return map;
    }

    // Corrected: one design per theta row that still has missing cells.
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < np; ++j)
            if (!done[i * np + j]) {
                rows.push_back(i);
                break;
            }
    const auto inputs = problem.inputs();
    const auto basis = problem.output_basis();
    parallel_for(rows.size(), workers, [&](std::size_t k) {
        const std::size_t i = rows[k];
        const auto t0 = clock_type::now();
        std::vector<ComplexField> outputs;
        double design_seconds = 0.0;
        try {
            const auto r = design(problem, u2(map.thetas[i], std::numbers::pi / 2).matrix, opt);
            const Cascade cascade(problem.grid, problem.cascade.plane_spacing, problem.cascade.wavelength);
            outputs = cascade.forward(inputs, r.stack);
            design_seconds = since(t0) / static_cast<double>(np);
        } catch (const std::exception&) {
            for (std::size_t j = 0; j < np; ++j)
                if (!done[i * np + j]) map.seconds[i * np + j] = since(t0) / static_cast<double>(np);
            return;
        }
        for (std::size_t j = 0; j < np; ++j) {
            const std::size_t c = i * np + j;
            if (done[c]) continue;
            const auto t1 = clock_type::now();
            try {
                const auto u = u2(map.thetas[i], map.phis[j]);
                const PhaseMask mask = correcting_phase_mask(map.phis[j], problem.grid, problem.output);
                std::vector<ComplexField> corrected;
                for (const auto& f : outputs) corrected.push_back(apply_mask(f, mask));
                map.fidelity[c] = gate_fidelity_fields(target_states(basis, u.matrix), corrected);
            } catch (const std::exception&) {
                map.fidelity[c] = std::numeric_limits<double>::quiet_NaN();
            }
            map.seconds[c] = design_seconds + since(t1);
        }
    });
    return map;
}

void write_map_csv(std::ostream& out, const FidelityMap& map, bool with_timing) {
    out << "# config " << map.config_hash << " mode " << to_string(map.mode) << '\n';
    out << "theta,phi,fidelity,seconds\n";
    for (std::size_t i = 0; i < map.thetas.size(); ++i)
        for (std::size_t j = 0; j < map.phis.size(); ++j) {
            const std::size_t c = i * map.phis.size() + j;
            out << fmt(map.thetas[i]) << ',' << fmt(map.phis[j]) << ',' << fmt(map.fidelity[c]) << ','
                << (with_timing ? fmt(map.seconds[c]) : std::string("0")) << '\n';
        }
}

FidelityMap read_map_csv(std::istream& in) {
    FidelityMap map;
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("# config "))
        throw FormatError("map csv: missing '# config' line");
    {
        std::istringstream ss(line.substr(2));
        std::string word, mode;
        ss >> word >> map.config_hash >> word >> mode;
        if (word != "mode" || map.config_hash.empty()) throw FormatError("map csv: malformed '# config' line");
        map.mode = map_mode_from_string(mode);
    }
    if (!std::getline(in, line) || line != "theta,phi,fidelity,seconds")
        throw FormatError("map csv: missing header row");
    std::vector<std::array<double, 4>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 4> r{};
        const char* p = line.c_str();
        for (int k = 0; k < 4; ++k) {
            char* end = nullptr;
            r[static_cast<std::size_t>(k)] = std::strtod(p, &end);
            if (end == p || (k < 3 && *end != ',') || (k == 3 && *end != '\0'))
                throw FormatError("map csv: malformed row '" + line + "'");
            p = end + 1;
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw FormatError("map csv: no cells");
    for (const auto& r : rows) {
        if (map.thetas.empty() || map.thetas.back() != r[0]) map.thetas.push_back(r[0]);
        if (map.thetas.size() == 1) map.phis.push_back(r[1]);
    }
    if (rows.size() != map.thetas.size() * map.phis.size()) throw FormatError("map csv: rows do not form a grid");
    for (std::size_t c = 0; c < rows.size(); ++c) {
        if (rows[c][0] != map.thetas[c / map.phis.size()] || rows[c][1] != map.phis[c % map.phis.size()])
            throw FormatError("map csv: rows are not theta-major");
        map.fidelity.push_back(rows[c][2]);
        map.seconds.push_back(rows[c][3]);
    }
    return map;
}

} // namespace mplc
