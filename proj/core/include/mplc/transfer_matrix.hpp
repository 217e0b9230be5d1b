#pragma once

#include <iosfwd>

#include <Eigen/Dense>

namespace mplc {

/// M x M complex matrix; column m holds the output coefficients of input |m>.
/// Not required to be unitary (extracted matrices can be lossy).
using TransferMatrix = Eigen::MatrixXcd;

/// One "re im" line per entry, row-major, 17 significant digits.
void write_transfer_matrix(std::ostream& out, const TransferMatrix& u);
TransferMatrix read_transfer_matrix(std::istream& in, Eigen::Index dimension);

/// Largest |(U U^dagger - I)_ij|.
double unitarity_defect(const TransferMatrix& u);

} // namespace mplc
