#pragma once

// Quadratic-fermion form of the chain,
//
//   H = [[A, B], [-B, -A]],  A = tridiag(alpha, beta, alpha),  B = tridiag(-gamma, 0, gamma),
//
// its numerical diagonalization by an orthogonal transition matrix
// T = [[Psi, Phi], [Phi, Psi]], and the many-body spectrum built on top.

#include <cstdint>
#include <vector>

#include "xychain/chain.hpp"
#include "xychain/linalg.hpp"
#include "xychain/report.hpp"

namespace xychain {

struct FreeFermionSystem {
  int N = 0;
  Matrix A;  // (N+1) x (N+1), symmetric
  Matrix B;  // (N+1) x (N+1), antisymmetric
  Matrix H;  // (2N+2) x (2N+2)
};

FreeFermionSystem assemble(const ChainSpec& chain);

struct SpectralData {
  /// Lambda_j >= 0, ascending.
  std::vector<double> lambda_numeric;
  Matrix Psi;  // column j is psi_j
  Matrix Phi;  // column j is phi_j
  Matrix T;
  /// Full spectrum of H, ascending.
  std::vector<double> h_eigenvalues;
  /// Number of Lambda_j treated as zero (each is a doubly degenerate 0 of H).
  int zero_modes = 0;
  int sweeps = 0;
  double final_offdiag = 0.0;
};

struct DecomposeOptions {
  EigenOptions eigen{};
  /// |eigenvalue| <= zero_tolerance * ||H||_F counts as a zero mode.
  double zero_tolerance = 1e-10;
};

/// Diagonalizes H with Jacobi rotations and repackages the positive half into
/// (Psi, Phi). Zero modes are split as psi = (u + v)/2, phi = (v - u)/2 with
/// u, v orthonormal bases of null(A - B) and null(A + B) rotated onto each
/// other, which minimizes ||phi||. Each column pair is signed so that the
/// largest |entry| of psi_j (of phi_j if psi_j = 0) is positive, the lowest
/// index winning ties. Throws ConvergenceFailure.
SpectralData eigendecompose(const FreeFermionSystem& sys, const DecomposeOptions& options = {});

/// Relative gap between two sorted nonnegative spectra:
/// max_j |a_j - b_j| / max(|a_j|, |b_j|, floor * max_k |a_k|).
/// Sizes must agree.
double relative_spectrum_gap(std::vector<double> a, std::vector<double> b, double floor = 1e-6);

/// Singular values of A + B (one-sided Jacobi, i.e. an implicit Jacobi
/// diagonalization of (A + B)^T (A + B)) against lambda_numeric.
CheckReport singular_value_check(const FreeFermionSystem& sys, const SpectralData& spectral,
                                 double tolerance = 1e-8);
std::vector<double> singular_values(const FreeFermionSystem& sys);

/// max |e_i + e_{n-1-i}| / max |e| over the sorted spectrum of H.
CheckReport spectrum_parity_check(const SpectralData& spectral, double tolerance = 1e-10);
/// ||T^T T - I||_max.
CheckReport orthogonality_check(const SpectralData& spectral, double tolerance = 1e-8);
/// max_j ||H t_j -+ Lambda_j t_j|| / ||H||_F over both halves of T.
CheckReport eigenpair_check(const FreeFermionSystem& sys, const SpectralData& spectral,
                            double tolerance = 1e-8);

inline constexpr int kManyBodyMaxSites = 24;

struct ManyBodyLevel {
  std::uint32_t mask = 0;  // bit j set <=> mode j occupied
  double energy = 0.0;
};

struct ManyBodySpectrum {
  std::vector<ManyBodyLevel> levels;  // ascending energy, ties by mask
};

/// E_S = 2 sum_{j in S} Lambda_j - sum_j Lambda_j over all subsets S.
/// Throws SizeCapExceeded beyond kManyBodyMaxSites modes.
ManyBodySpectrum many_body_spectrum(const std::vector<double>& lambda);

/// For each analytic value, the index of its nearest numeric value. Indices
/// are distinct; `collision` records that some analytic value had to fall
/// back to a farther partner because its nearest one was taken.
struct SpectrumMatch {
  std::vector<int> numeric_index;
  bool collision = false;
  double worst_gap = 0.0;  // relative, same floor as relative_spectrum_gap
};

SpectrumMatch match_spectra(const std::vector<double>& analytic,
                            const std::vector<double>& numeric);

struct EigenvectorCrosscheck {
  /// max over nondegenerate nonzero modes of 1 - |cos| between numeric
  /// psi -+ phi and the analytic P, Q columns.
  CheckReport cosine;
  /// max sin of the principal angle between analytic and numeric subspaces
  /// for degenerate clusters and zero modes.
  CheckReport subspace;
};

/// `cluster_tolerance` groups analytic Lambda whose gaps fall below
/// cluster_tolerance * max Lambda.
EigenvectorCrosscheck eigenvector_crosscheck(const SpectralData& spectral, const PQTable& pq,
                                             double cosine_tolerance = 1e-8,
                                             double angle_tolerance = 1e-6,
                                             double cluster_tolerance = 1e-6);

}  // namespace xychain
