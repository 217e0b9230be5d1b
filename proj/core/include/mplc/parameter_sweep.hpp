#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mplc/wfm.hpp"

namespace mplc {

/// One geometry sample: plane spacing, input waist and input beam spacing.
/// Output arrays follow the base problem's demagnification.
struct GeometryPoint {
    double plane_spacing = 0.10;
    double waist = 161.5e-6;
    double beam_spacing = 704e-6;
};

struct SweepRow {
    GeometryPoint point;
    double fidelity = 0.0; ///< NaN when the point failed
    std::string failure;   ///< reason, empty on success
    double seconds = 0.0;
};

/// Full Cartesian product of the three axes, spacing-major.
std::vector<GeometryPoint> geometry_grid(const std::vector<double>& plane_spacings, const std::vector<double>& waists,
                                         const std::vector<double>& beam_spacings);

/// Problem obtained by substituting one geometry sample into `base`. The input
/// array stays centred on the axis; the output array keeps the base ratio of
/// output to input waist and spacing.
DesignProblem with_geometry(const DesignProblem& base, const GeometryPoint& point);

/// Runs wavefront_match for each point; rows come back in input order.
/// A point that throws is recorded with NaN fidelity and the message.
std::vector<SweepRow> parameter_sweep(const DesignProblem& base, const TransferMatrix& target,
                                      const std::vector<GeometryPoint>& points, const OptimizerConfig& config,
                                      std::size_t workers = 1);

} // namespace mplc
