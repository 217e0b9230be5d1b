#pragma once

#include <vector>

#include "mplc/beam_array.hpp"
#include "mplc/propagation.hpp"
#include "mplc/transfer_matrix.hpp"

namespace mplc {

/// Two-mode beamsplitter family
///   U(theta, phi) = [[cos t, i e^{-i phi} sin t], [i e^{i phi} sin t, cos t]]
/// with theta in [0, pi/2] and phi in [-pi, pi).
struct UnitaryTarget {
    double theta = 0.0;
    double phi = 0.0;
    TransferMatrix matrix;
};

/// Throws ParameterRange outside the stated domain (a 1e-12 slack is allowed
/// on the closed ends so grid values like k * pi/12 are accepted).
UnitaryTarget u2(double theta, double phi);

/// (1/M) sum_m |<m| U_t^dagger U_d |m>|^2.
double gate_fidelity_matrix(const TransferMatrix& target, const TransferMatrix& design);

/// (1/M) sum_m |<psi_t_m | psi_d_m>|^2 over sampled fields.
double gate_fidelity_fields(const std::vector<ComplexField>& targets, const std::vector<ComplexField>& outputs);

/// Piecewise-constant mask: +(phi - pi/2)/2 where y > boundary_y (upper beam,
/// higher index) and -(phi - pi/2)/2 elsewhere.
PhaseMask correcting_phase_mask(double phi, const SamplingGrid& grid, double boundary_y);
/// Boundary at the midline between the two output beam centres.
PhaseMask correcting_phase_mask(double phi, const SamplingGrid& grid, const BeamArraySpec& output_spec);

/// Entry (k, m) = <basis_k | output_m>. Reported raw, not re-unitarised.
TransferMatrix extract_transfer_matrix(const std::vector<ComplexField>& outputs,
                                       const std::vector<ComplexField>& output_basis);

/// Nearest unitary in Frobenius norm (polar factor). Separate post-process;
/// extract_transfer_matrix never calls it.
TransferMatrix nearest_unitary(const TransferMatrix& u);

} // namespace mplc
