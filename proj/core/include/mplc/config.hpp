#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "mplc/alignment.hpp"
#include "mplc/geometry.hpp"
#include "mplc/wfm.hpp"

namespace mplc {

/// theta samples run from theta_min to theta_max inclusive; phi samples from
/// phi_min up to but excluding phi_max.
struct SweepConfig {
    double theta_min = 0.0;
    double theta_max = 1.5707963267948966;
    double theta_step = 0.2617993877991494;
    double phi_min = -3.141592653589793;
    double phi_max = 3.141592653589793;
    double phi_step = 0.5235987755982988;
    bool correcting_mask = false;
    double perturb_alpha = 0.0; ///< > 0 evaluates every designed cell under the perturbation
    std::size_t workers = 1;
    bool record_timing = false; ///< write wall times into the CSV (breaks byte reproducibility)

    std::vector<double> thetas() const;
    std::vector<double> phis() const;
    void validate() const;
};

struct GeometryScanConfig {
    std::vector<double> mirror_distances{0.01, 0.02, 0.025, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    double angle_min = 0.001;
    double angle_max = 0.17453292519943295;
    std::size_t angle_count = 300;
    double waist_min = 100e-6;
    double waist_max = 900e-6;
    std::size_t waist_count = 81;
};

struct PerturbConfig {
    double gradient = 0.058;
    double correlation_length = 40.0; ///< samples
    std::uint64_t seed = 7;
    std::size_t pattern_nx = 792;
    std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0, 1.25};
    double theta = 0.7853981633974483;
    double phi = 1.5707963267948966;
};

struct KnifeConfig {
    RandomWindowSpec window;
    std::size_t beam = 1;  ///< input beam scanned, 1-based
    double span = 2.5;     ///< scan half-range in beam sizes at the plane
};

struct RunConfig {
    DesignProblem problem = DesignProblem::reference();
    OptimizerConfig optimizer;
    double design_theta = 0.47123889803846897;
    double design_phi = 1.5707963267948966;
    SweepConfig sweep;
    MPLCGeometry slm;
    GeometryScanConfig geometry;
    PerturbConfig perturb;
    KnifeConfig knife;
    std::string out_dir = "out";

    void validate() const;
};

/// Parses `section.key = value` lines; `#` starts a comment. Numbers accept
/// products and quotients with `pi`, e.g. `3*pi/20` or `-pi`. Lists are
/// comma separated. Throws ConfigError carrying the line and key.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Every setting that influences results, one `key = value` per line with
/// 17 significant digits. Worker count, timing and output directory are
/// left out.
std::string canonical_text(const RunConfig& config);

/// 16 hex digits of FNV-1a 64 over canonical_text.
std::string config_hash(const RunConfig& config);

/// Value parser used for numeric keys; exposed for tests.
double parse_number(const std::string& text);

} // namespace mplc
