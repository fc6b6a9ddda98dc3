#pragma once

// q-Racah polynomials R_i(x; a, b, c, N, q) and the two pairs of B2-contiguity
// relations with unchanged N that turn them into exactly solvable XY chains.
//
//   lambda^+_x R_i(x; rho)     = sum_s Phi^{s,+}_i R_{i+s}(xbar; rhobar)
//   lambda^-_x R_i(xbar; rhobar) = sum_s Phi^{s,-}_i R_{i+s}(x; rho)
//
// with s in {+1, 0, -1}.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xychain {

struct QRacahParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  int N = 1;
  double q = 0.5;

  /// Throws DomainError unless 0 < q < 1, N >= 0, all values finite and the
  /// series denominators (aq; q)_k, (bcq; q)_k stay nonzero for k <= N.
  void validate() const;

  friend bool operator==(const QRacahParams&, const QRacahParams&) = default;
};

enum class ContiguityFamily {
  /// (qRI/III) with (qRIII/I): xbar = x + 1, rhobar = (a/q, bq, c/q^2, N).
  QR_I_III,
  /// (qRII/IV) with (qRIV/II): xbar = x, rhobar = (a/q, bq, c, N).
  QR_II_IV,
};

/// "qr13" / "qr24".
std::string_view to_string(ContiguityFamily family);
std::optional<ContiguityFamily> parse_family(std::string_view name);

struct ShiftedParams {
  int x_shift = 0;
  QRacahParams params_bar;
};

/// Throws InvalidShiftedParams if rhobar violates the QRacahParams invariants.
ShiftedParams shift_params(ContiguityFamily family, const QRacahParams& params);

/// R_i(x; rho) as a terminating 4phi3. Requires 0 <= i <= N and x >= 0 (x may
/// leave the grid, e.g. xbar = N + 1). Propagates DenominatorVanishes.
double qracah_eval(int i, int x, const QRacahParams& params);

/// lambda_{x,rho} = -(1 - q^{-x})(1 - c q^{x-N}); R_i is a degree-i polynomial in it.
double grid_variable(int x, const QRacahParams& params);

/// The k = N+1 term of R_{N+1}(x; rho) with its vanishing (q^{-N}; q)_{N+1}
/// factor removed. Multiplied by a top coefficient Phi^{+1,+-}_N with its own
/// zero removed, this is the finite limit of Phi^{+1,+-}_N R_{N+1}.
double qracah_top_limit(int x, const QRacahParams& params);

/// Which closed form supplies Phi^{0,-}_i for the QR_II_IV family. The printed
/// form reuses the "+" coefficients; the rederived one is
/// lambda^-_0 - Phi^{+1,-}_i - Phi^{-1,-}_i. QR_I_III has a single closed form
/// and ignores this setting.
enum class ZeroMinusForm { AsPrinted, Rederived };

std::string_view to_string(ZeroMinusForm form);

struct ContiguityCoefficients {
  ContiguityFamily family = ContiguityFamily::QR_I_III;
  QRacahParams params;
  ShiftedParams shifted;
  ZeroMinusForm zero_minus_form = ZeroMinusForm::AsPrinted;

  // Indexed by i = 0..N.
  std::vector<double> phi_plus1_plus;
  std::vector<double> phi_0_plus;
  std::vector<double> phi_minus1_plus;
  std::vector<double> phi_plus1_minus;
  std::vector<double> phi_0_minus;
  std::vector<double> phi_minus1_minus;

  /// Phi^{+1,+}_N and Phi^{+1,-}_N with their vanishing factor divided out.
  double top_plus_reduced = 0.0;
  double top_minus_reduced = 0.0;

  int N() const noexcept { return params.N; }
  double lambda_plus(int x) const;
  double lambda_minus(int x) const;

  /// (Phi0-_i Phi+1+_i Phi-1+_{i+1} Phi0-_{i+1}) / (Phi0+_i Phi+1-_i Phi-1-_{i+1} Phi0+_{i+1})
  double constraint_ratio(int i) const;
  /// max_{0 <= i < N} |constraint_ratio(i) - 1|.
  double constraint_residual() const;
};

/// Fills every coefficient table. Throws InvalidParameterRegime if any
/// coefficient is NaN or infinite.
ContiguityCoefficients contiguity_coefficients(ContiguityFamily family,
                                               const QRacahParams& params,
                                               ZeroMinusForm form = ZeroMinusForm::Rederived);

/// Smallest |factor| among every denominator in the coefficient formulas and
/// in the 4phi3 series of rho and rhobar; parameter scans reject draws where
/// it is tiny.
double min_denominator_factor(ContiguityFamily family, const QRacahParams& params);

struct ContiguityReport {
  ContiguityFamily family = ContiguityFamily::QR_I_III;
  double tolerance = 1e-9;
  /// max over (i, x) of |lhs - rhs| / max(|lhs|, |rhs terms|).
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  std::pair<int, int> worst_plus{0, 0};
  std::pair<int, int> worst_minus{0, 0};
  /// Form of Phi^{0,-} behind residual_minus (the better of the two for QR_II_IV).
  ZeroMinusForm selected_form = ZeroMinusForm::AsPrinted;
  /// Residual of the "-" relation for the rejected QR_II_IV form; empty for QR_I_III.
  std::optional<double> residual_minus_alternative;
  bool pass = false;

  std::string summary() const;
};

/// Evaluates both contiguity relations on the full (i, x) grid by direct
/// q-Racah evaluation.
ContiguityReport verify_contiguity(ContiguityFamily family, const QRacahParams& params,
                                   double tolerance = 1e-9);

}  // namespace xychain
