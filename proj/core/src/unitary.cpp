#include "mplc/unitary.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "mplc/errors.hpp"

namespace mplc {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double domain_slack = 1e-12;
} // namespace

void write_transfer_matrix(std::ostream& out, const TransferMatrix& u) {
    std::ostringstream line;
    line << std::setprecision(17);
    for (Eigen::Index r = 0; r < u.rows(); ++r)
        for (Eigen::Index c = 0; c < u.cols(); ++c) line << u(r, c).real() << ' ' << u(r, c).imag() << '\n';
    out << line.str();
}

TransferMatrix read_transfer_matrix(std::istream& in, Eigen::Index dimension) {
    TransferMatrix u(dimension, dimension);
    for (Eigen::Index r = 0; r < dimension; ++r)
        for (Eigen::Index c = 0; c < dimension; ++c) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im)) throw FormatError("read_transfer_matrix: truncated input");
            u(r, c) = {re, im};
        }
    return u;
}

double unitarity_defect(const TransferMatrix& u) {
    const TransferMatrix d = u * u.adjoint() - TransferMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

UnitaryTarget u2(double theta, double phi) {
    if (!(theta >= -domain_slack && theta <= pi / 2 + domain_slack))
        throw ParameterRange("u2: theta " + std::to_string(theta) + " outside [0, pi/2]");
    if (!(phi >= -pi - domain_slack && phi < pi))
        throw ParameterRange("u2: phi " + std::to_string(phi) + " outside [-pi, pi)");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx i{0.0, 1.0};
    UnitaryTarget t{theta, phi, TransferMatrix(2, 2)};
    t.matrix(0, 0) = c;
    t.matrix(0, 1) = i * std::polar(1.0, -phi) * s;
    t.matrix(1, 0) = i * std::polar(1.0, phi) * s;
    t.matrix(1, 1) = c;
    return t;
}

double gate_fidelity_matrix(const TransferMatrix& target, const TransferMatrix& design) {
    if (target.rows() != target.cols() || design.rows() != design.cols() || target.rows() != design.rows())
        throw DimensionMismatch("gate_fidelity_matrix: need equal square matrices");
    const auto m = target.rows();
    if (m == 0) throw DimensionMismatch("gate_fidelity_matrix: empty matrices");
    const TransferMatrix prod = target.adjoint() * design;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) acc += std::norm(prod(k, k));
    return acc / static_cast<double>(m);
}

double gate_fidelity_fields(const std::vector<ComplexField>& targets, const std::vector<ComplexField>& outputs) {
    if (targets.size() != outputs.size() || targets.empty())
        throw DimensionMismatch("gate_fidelity_fields: need equal, non-empty lists");
    double acc = 0.0;
    for (std::size_t m = 0; m < targets.size(); ++m) acc += std::norm(inner_product(targets[m], outputs[m]));
    return acc / static_cast<double>(targets.size());
}

PhaseMask correcting_phase_mask(double phi, const SamplingGrid& grid, double boundary_y) {
    const double delta = 0.5 * (phi - pi / 2);
    PhaseMask m(grid);
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
        const double v = grid.y(iy) > boundary_y ? delta : -delta;
        for (std::size_t ix = 0; ix < grid.nx(); ++ix) m(ix, iy) = v;
    }
    return m;
}

PhaseMask correcting_phase_mask(double phi, const SamplingGrid& grid, const BeamArraySpec& output_spec) {
    if (output_spec.count != 2) throw DimensionMismatch("correcting_phase_mask: needs a two-beam array");
    const double mid = 0.5 * (output_spec.center(1).y + output_spec.center(2).y);
    return correcting_phase_mask(phi, grid, mid);
}

TransferMatrix extract_transfer_matrix(const std::vector<ComplexField>& outputs,
                                       const std::vector<ComplexField>& output_basis) {
    return overlap_matrix(output_basis, outputs);
}

TransferMatrix nearest_unitary(const TransferMatrix& u) {
    Eigen::JacobiSVD<TransferMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

} // namespace mplc
