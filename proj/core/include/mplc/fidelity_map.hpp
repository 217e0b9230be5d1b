#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mplc/config.hpp"
#include "mplc/perturbation.hpp"

namespace mplc {

enum class MapMode { design, corrected, perturbed };

const char* to_string(MapMode mode);
MapMode map_mode_from_string(const std::string& s);

/// Gate fidelity over a (theta, phi) grid. Cell (i, j) is theta i, phi j,
/// stored theta-major. NaN marks a failed cell.
struct FidelityMap {
    std::vector<double> thetas;
    std::vector<double> phis;
    std::vector<double> fidelity;
    std::vector<double> seconds;
    std::string config_hash;
    MapMode mode = MapMode::design;

    double& at(std::size_t i, std::size_t j) { return fidelity[i * phis.size() + j]; }
    double at(std::size_t i, std::size_t j) const { return fidelity[i * phis.size() + j]; }
    std::size_t failed() const;
    double mean() const; ///< over finite cells; NaN if none
};

/// Mode selected by the sweep block.
MapMode map_mode(const SweepConfig& sweep);

/// The synthetic SLM perturbation described by the perturb block.
PerturbationSpec make_perturbation(const RunConfig& config, double alpha);

/// Computes every cell. Design mode optimises each cell; corrected mode
/// optimises U(theta, pi/2) once per theta and reaches the other phi values
/// with the correcting mask after the last plane; perturbed mode optimises
/// each cell and evaluates it under sweep.perturb_alpha. Cells already finite
/// in `resume` (same grid and hash) are copied instead of recomputed.
FidelityMap compute_map(const RunConfig& config, std::size_t workers, const FidelityMap* resume = nullptr);

/// `# config <hash> mode <mode>` line, then `theta,phi,fidelity,seconds`
/// rows at 17 significant digits. Seconds are written as 0 unless
/// `with_timing`.
void write_map_csv(std::ostream& out, const FidelityMap& map, bool with_timing);
FidelityMap read_map_csv(std::istream& in);

} // namespace mplc
