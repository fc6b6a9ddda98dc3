#pragma once

// Brute-force ground truth: the chain Hamiltonian as a dense 2^{N+1} matrix
// over Pauli products,
//
//   H = sum_j (alpha_j + gamma_j) X_j X_{j+1} + (alpha_j - gamma_j) Y_j Y_{j+1}
//       - sum_j beta_j Z_j,
//
// site 0 being the leftmost Kronecker factor. Y_j Y_{j+1} = -(J (x) J) with
// the real J = i sigma^y = [[0, 1], [-1, 0]], so the matrix stays real.

#include <vector>

#include "xychain/chain.hpp"
#include "xychain/linalg.hpp"
#include "xychain/report.hpp"

namespace xychain {

inline constexpr int kSpinOracleMaxN = 8;  // dim 512

struct DenseSpinHamiltonian {
  int N = 0;
  Matrix matrix;

  std::size_t dim() const noexcept { return matrix.rows(); }
};

/// Throws SizeCapExceeded for N > kSpinOracleMaxN.
DenseSpinHamiltonian build_spin_hamiltonian(const ChainSpec& chain);

/// All 2^{N+1} eigenvalues, ascending. Throws ConvergenceFailure.
std::vector<double> oracle_spectrum(const DenseSpinHamiltonian& h);

/// Compares the oracle spectrum with many_body_spectrum(lambda_numeric) of the
/// free-fermion form; tolerance is relative to max |E| of the oracle. Returns a
/// skipped report beyond the size cap.
CheckReport jw_certify(const ChainSpec& chain, double tolerance = 1e-8);

}  // namespace xychain
