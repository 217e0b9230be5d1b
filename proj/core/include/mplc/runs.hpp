#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "mplc/alignment.hpp"
#include "mplc/config.hpp"
#include "mplc/fidelity_map.hpp"
#include "mplc/geometry.hpp"
#include "mplc/perturbation.hpp"
#include "mplc/wfm.hpp"

// Runners behind the command-line tool. Each writes its files into `out`
// (created if needed) and returns what it computed.

namespace mplc {

struct DesignReport {
    double theta = 0.0;
    double phi = 0.0;
    OptimizationResult result;
    TransferMatrix transfer; ///< raw overlaps of the outputs with the output basis
};

/// design.mplm, design_transfer.txt, design_report.txt.
DesignReport run_design(const RunConfig& config, double theta, double phi, const std::filesystem::path& out);

/// map.csv and map.ppm. An existing map.csv in `out` with the same config
/// hash is resumed; a different hash throws ConfigError.
FidelityMap run_map(const RunConfig& config, std::size_t workers, const std::filesystem::path& out);

struct GeometryReport {
    std::vector<ReflectionCell> cells;
    std::vector<MaxPlanesRow> max_planes;
};

/// reflections.csv and max_planes.csv.
GeometryReport run_geometry(const RunConfig& config, const std::filesystem::path& out);

struct PerturbReport {
    double gradient = 0.0; ///< measured mean gradient of the synthetic pattern
    std::vector<AlphaRow> rows;
};

/// perturbation.mplm (single-plane pattern), perturbation.mplm.txt (seed and
/// statistics), alpha.csv.
PerturbReport run_perturb(const RunConfig& config, std::size_t workers, const std::filesystem::path& out);

struct KnifeRow {
    std::size_t plane = 0;
    BeamEstimate estimate;
    BeamEstimate truth; ///< centre and size of the simulated beam at the plane
};

/// Knife-edge scans along y of one input beam at every plane with flat masks:
/// knife_scan.csv and knife_estimates.csv.
std::vector<KnifeRow> run_knife(const RunConfig& config, std::size_t workers, const std::filesystem::path& out);

/// Reads a map CSV and writes its heatmap.
void render_map_file(const std::filesystem::path& csv, const std::filesystem::path& ppm);

} // namespace mplc
