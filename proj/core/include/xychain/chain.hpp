#pragma once

// From contiguity coefficients to the physical XY chain
//
//   H = sum_j (alpha_j + gamma_j) s^x_j s^x_{j+1} + (alpha_j - gamma_j) s^y_j s^y_{j+1}
//       - sum_j beta_j s^z_j
//
// together with its closed-form single-particle spectrum and the normalized
// polynomial eigenvector components P_k(j), Q_k(j).

#include <cstdint>
#include <optional>
#include <vector>

#include "xychain/linalg.hpp"
#include "xychain/qracah.hpp"
#include "xychain/report.hpp"

namespace xychain {

/// Square-root arguments down to -kRadicandTolerance are clamped to zero.
inline constexpr double kRadicandTolerance = 1e-12;

struct ChainSpec {
  int N = 0;                  // N + 1 sites
  std::vector<double> alpha;  // N values
  std::vector<double> beta;   // N + 1 values
  std::vector<double> gamma;  // N values
  std::optional<ContiguityFamily> family;
  std::optional<QRacahParams> params;

  /// Explicit couplings with no q-Racah origin; validated.
  static ChainSpec from_couplings(std::vector<double> alpha, std::vector<double> beta,
                                  std::vector<double> gamma);

  int sites() const noexcept { return N + 1; }
  /// Throws DomainError on wrong lengths or non-finite entries.
  void validate() const;
  /// True when every |gamma_j| <= tol * max(1, max |coupling|).
  bool is_xx(double tol = 1e-12) const;
  /// Largest |alpha|, |beta|, |gamma|.
  double coupling_scale() const;
};

/// Couplings from the contiguity tables:
///   beta_j          = sgn(Phi^{0,-}_j)  sqrt(Phi^{0,+}_j Phi^{0,-}_j)
///   alpha_j+gamma_j = sgn(Phi^{+1,+}_j) sqrt(Phi^{-1,-}_{j+1} Phi^{+1,+}_j)
///   alpha_j-gamma_j = sgn(Phi^{+1,-}_j) sqrt(Phi^{-1,+}_{j+1} Phi^{+1,-}_j)
/// The signs are what the normalized contiguity relations produce; with them
/// the chain's spectrum is the closed form for both families.
/// Throws InvalidParameterRegime naming the offending radicand.
ChainSpec build_chain(ContiguityFamily family, const QRacahParams& params);
ChainSpec build_chain(const ContiguityCoefficients& coeffs);

struct AnalyticSpectrum {
  /// Lambda_j, j = 0..N, from the family's closed-form eigenvalue formula.
  std::vector<double> lambda;
  /// sqrt(lambda^+_j lambda^-_j) from the contiguity eigenvalue functions.
  std::vector<double> lambda_from_contiguity;
  /// max_j |closed - contiguity| / max(|closed_j|, 1e-300).
  double cross_route_gap = 0.0;
};

/// Both routes are evaluated and must agree to `cross_route_tolerance`;
/// otherwise InvalidParameterRegime. Negative radicands beyond
/// kRadicandTolerance also raise InvalidParameterRegime.
AnalyticSpectrum analytic_spectrum(ContiguityFamily family, const QRacahParams& params,
                                   double cross_route_tolerance = 1e-12);

/// Closed-form Lambda_j radicand (before the square root).
double closed_form_radicand(ContiguityFamily family, const QRacahParams& params, int j);

/// P(k, j) = P_k(j) = (psi_j - phi_j)_k and Q(k, j) = Q_k(j) = (psi_j + phi_j)_k,
/// up to the column normalization.
struct PQTable {
  Matrix P;
  Matrix Q;
  std::vector<double> lambda;  // Lambda_j the columns belong to
};

/// Normalized q-Racah values
///   P_i(x) = sqrt(lambda^+_x Phi^{0,-}_0 prod_k ...) R_i(x; rho)
///   Q_i(x) = sgn(lambda^-_x) sqrt(lambda^-_x Phi^{0,+}_0 prod_k ...) R_i(xbar; rhobar)
/// The sgn factor only matters when lambda^+_x and lambda^-_x are both negative.
PQTable build_pq_table(ContiguityFamily family, const QRacahParams& params);

/// Worst relative residual of both coupled recurrences over all k and j:
/// |row residual| / (coupling scale * max(|P(.,j)|_inf, |Q(.,j)|_inf)).
double pq_recurrence_residual(const ChainSpec& chain, const PQTable& table);

// ---------------------------------------------------------------------------
// Parameter scans

enum class AxisScale {
  Linear,     // uniform in [lo, hi]
  SignedLog,  // random sign, |value| = 10^u with u uniform in [lo, hi]
};

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  AxisScale scale = AxisScale::Linear;

  bool empty() const noexcept { return !(lo <= hi); }
};

struct ParamBox {
  Axis a;
  Axis b;
  Axis c;
  Axis q;  // always linear; must sit inside (0, 1)
};

struct ScanOptions {
  std::uint64_t seed = 0;
  /// Stop once this many valid draws were collected (0 = no limit).
  std::size_t max_results = 0;
  double contiguity_tolerance = 1e-9;
  double denominator_floor = 1e-8;
};

/// Why a draw was rejected; empty when it is valid.
std::optional<std::string> validity_failure(ContiguityFamily family, const QRacahParams& params,
                                            const ScanOptions& options = {});

/// Draws `samples` candidates from the box (deterministic in options.seed)
/// and keeps those whose denominators stay above the floor, whose radicands
/// are all nonnegative, and which pass verify_contiguity. Throws
/// NoValidParameters if none survive.
std::vector<QRacahParams> parameter_scan(ContiguityFamily family, const ParamBox& box, int N,
                                         int samples, const ScanOptions& options = {});

}  // namespace xychain
