#include "mplc/parameter_sweep.hpp"

#include <chrono>
#include <limits>

#include "mplc/errors.hpp"
#include "mplc/parallel.hpp"

namespace mplc {

std::vector<GeometryPoint> geometry_grid(const std::vector<double>& plane_spacings, const std::vector<double>& waists,
                                         const std::vector<double>& beam_spacings) {
    std::vector<GeometryPoint> out;
    for (double dz : plane_spacings)
        for (double w : waists)
            for (double s : beam_spacings) out.push_back({dz, w, s});
    return out;
}

DesignProblem with_geometry(const DesignProblem& base, const GeometryPoint& point) {
    DesignProblem p = base;
    const double waist_ratio = base.output.waist / base.input.waist;
    const double spacing_ratio = base.output.spacing / base.input.spacing;
    const double in_mid = base.input.axis_origin.y + 0.5 * static_cast<double>(base.input.count - 1) * base.input.spacing;
    const double out_mid =
        base.output.axis_origin.y + 0.5 * static_cast<double>(base.output.count - 1) * base.output.spacing;

    p.cascade.plane_spacing = point.plane_spacing;
    p.input.waist = point.waist;
    p.input.spacing = point.beam_spacing;
    p.input.axis_origin.y = in_mid - 0.5 * static_cast<double>(p.input.count - 1) * p.input.spacing;
    p.output.waist = point.waist * waist_ratio;
    p.output.spacing = point.beam_spacing * spacing_ratio;
    p.output.axis_origin.y = out_mid - 0.5 * static_cast<double>(p.output.count - 1) * p.output.spacing;
    return p;
}

std::vector<SweepRow> parameter_sweep(const DesignProblem& base, const TransferMatrix& target,
                                      const std::vector<GeometryPoint>& points, const OptimizerConfig& config,
                                      std::size_t workers) {
    if (points.empty()) throw ParameterRange("parameter_sweep: empty parameter grid");
    std::vector<SweepRow> rows(points.size());
    parallel_for(points.size(), workers, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.point = points[i];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            row.fidelity = design(with_geometry(base, points[i]), target, config).final_fidelity;
        } catch (const std::exception& e) {
            row.fidelity = std::numeric_limits<double>::quiet_NaN();
            row.failure = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    return rows;
}

} // namespace mplc
