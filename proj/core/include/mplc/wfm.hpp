#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mplc/beam_array.hpp"
#include "mplc/propagation.hpp"
#include "mplc/transfer_matrix.hpp"

namespace mplc {

enum class PhaseReference {
    overlap,       ///< gamma_m = arg <B_m | e^{i Phi} F_m>
    plain_integral ///< gamma_m = area-mean of arg(e^{i Phi} F_m conj(B_m))
};

enum class UpdateMode {
    replace,  ///< mask recomputed from fields with the old mask excluded
    increment ///< old mask plus the phase correction of the masked field, wrapped
};

enum class PlaneOrder {
    ascending, ///< 1 -> P
    descending ///< P -> 1
};

struct OptimizerConfig {
    std::size_t iterations = 100;
    PlaneOrder plane_order = PlaneOrder::ascending;
    std::optional<double> stop_fidelity;
    bool record_history = true;
    PhaseReference phase_reference = PhaseReference::overlap;
    UpdateMode update_mode = UpdateMode::replace;

    void validate() const;
};

struct OptimizationResult {
    PhaseMaskStack stack;
    double final_fidelity = 0.0;
    std::vector<double> history; ///< fidelity after each completed iteration
    double wall_time = 0.0;      ///< seconds
};

/// Plane count, spacing and wavelength of the simulated cascade.
struct CascadeGeometry {
    std::size_t planes = 5;
    double plane_spacing = 0.10;
    double wavelength = 637e-9;
};

/// Phase of a mask plane that best maps the forward fields onto the backward
/// fields:  Phi(x) = -arg( sum_m F_m(x) conj(B_m(x)) e^{-i gamma_m} ).
/// `forward` are the fields just before the plane (its mask not applied),
/// `backward` the targets propagated back to just after it. `current`, when
/// given, is the mask presently at the plane; it enters only the per-mode
/// reference phases gamma_m (and the increment update). Samples where the sum
/// vanishes get phase 0.
PhaseMask plane_update(const std::vector<ComplexField>& forward, const std::vector<ComplexField>& backward,
                       const PhaseMask* current = nullptr, PhaseReference reference = PhaseReference::overlap,
                       UpdateMode mode = UpdateMode::replace);

/// Overlap-weighted phase difference arg <a|b>; zero when b = c * a, c > 0.
double phase_mismatch(const ComplexField& a, const ComplexField& b);
/// Unweighted area-mean of arg(conj(a) b), arg(0) = 0.
double phase_mismatch_plain(const ComplexField& a, const ComplexField& b);

/// Wavefront-matching inverse design. `initial` defaults to zero masks.
OptimizationResult wavefront_match(const std::vector<ComplexField>& inputs, const std::vector<ComplexField>& targets,
                                   const CascadeGeometry& geometry, const OptimizerConfig& config,
                                   const PhaseMaskStack* initial = nullptr);

/// Everything needed to pose a design: window, arrays and cascade.
struct DesignProblem {
    SamplingGrid grid = SamplingGrid::centered(256, 256, 20e-6);
    BeamArraySpec input = BeamArraySpec::reference_input();
    BeamArraySpec output = BeamArraySpec::reference_input().demagnified(4.0);
    CascadeGeometry cascade;

    /// 256 x 256 at 20 um, P = 5, 10 cm spacing, 637 nm, reference arrays.
    static DesignProblem reference();

    std::vector<ComplexField> inputs() const;
    std::vector<ComplexField> output_basis() const;
    std::vector<ComplexField> targets(const TransferMatrix& u) const;
};

OptimizationResult design(const DesignProblem& problem, const TransferMatrix& target, const OptimizerConfig& config);

} // namespace mplc
