#include "xychain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "xychain/error.hpp"

namespace xychain {

namespace {

double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

std::string describe(const char* what, int j, double radicand) {
  std::ostringstream s;
  s.precision(17);
  s << "negative radicand " << what << " at j=" << j << ": " << radicand;
  return s.str();
}

// sqrt with the clamping rule; throws on genuine negativity.
double checked_sqrt(double radicand, const char* what, int j) {
  if (std::isnan(radicand))
    throw InvalidParameterRegime(describe(what, j, radicand) + " (not a number)");
  if (radicand < -kRadicandTolerance) throw InvalidParameterRegime(describe(what, j, radicand));
  return std::sqrt(std::max(radicand, 0.0));
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ChainSpec ChainSpec::from_couplings(std::vector<double> alpha, std::vector<double> beta,
                                    std::vector<double> gamma) {
  ChainSpec spec;
  spec.N = static_cast<int>(beta.size()) - 1;
  spec.alpha = std::move(alpha);
  spec.beta = std::move(beta);
  spec.gamma = std::move(gamma);
  spec.validate();
  return spec;
}

void ChainSpec::validate() const {
  if (N < 0) throw DomainError("chain: at least one site is required");
  const auto n = static_cast<std::size_t>(N);
  if (alpha.size() != n || gamma.size() != n || beta.size() != n + 1) {
    std::ostringstream s;
    s << "chain: expected lengths alpha=" << n << " beta=" << n + 1 << " gamma=" << n
      << ", got " << alpha.size() << ", " << beta.size() << ", " << gamma.size();
    throw DomainError(s.str());
  }
  if (!all_finite(alpha) || !all_finite(beta) || !all_finite(gamma))
    throw DomainError("chain: couplings must be finite");
}

double ChainSpec::coupling_scale() const {
  double m = 0.0;
  for (const auto* v : {&alpha, &beta, &gamma})
    for (double x : *v) m = std::max(m, std::abs(x));
  return m;
}

bool ChainSpec::is_xx(double tol) const {
  const double bound = tol * std::max(1.0, coupling_scale());
  return std::all_of(gamma.begin(), gamma.end(),
                     [&](double g) { return std::abs(g) <= bound; });
}

ChainSpec build_chain(const ContiguityCoefficients& f) {
  const int n = f.N();
  ChainSpec spec;
  spec.N = n;
  spec.family = f.family;
  spec.params = f.params;
  spec.beta.resize(n + 1);
  spec.alpha.resize(n);
  spec.gamma.resize(n);
  for (int j = 0; j <= n; ++j)
    spec.beta[j] = sgn(f.phi_0_minus[j]) *
                   checked_sqrt(f.phi_0_plus[j] * f.phi_0_minus[j], "Phi0+ Phi0- (beta)", j);
  for (int j = 0; j < n; ++j) {
    const double s_plus =
        sgn(f.phi_plus1_plus[j]) * checked_sqrt(f.phi_minus1_minus[j + 1] * f.phi_plus1_plus[j],
                                                "Phi-1-_{j+1} Phi+1+_j (alpha+gamma)", j);
    const double s_minus =
        sgn(f.phi_plus1_minus[j]) * checked_sqrt(f.phi_minus1_plus[j + 1] * f.phi_plus1_minus[j],
                                                 "Phi-1+_{j+1} Phi+1-_j (alpha-gamma)", j);
    spec.alpha[j] = 0.5 * (s_plus + s_minus);
    spec.gamma[j] = 0.5 * (s_plus - s_minus);
  }
  spec.validate();
  return spec;
}

ChainSpec build_chain(ContiguityFamily family, const QRacahParams& params) {
  return build_chain(contiguity_coefficients(family, params));
}

double closed_form_radicand(ContiguityFamily family, const QRacahParams& p, int j) {
  const auto qp = [&](int n) { return std::pow(p.q, n); };
  const int n = p.N;
  if (family == ContiguityFamily::QR_I_III) {
    return (1.0 - p.c * qp(j)) * (1.0 - qp(n - j)) * (1.0 - qp(-j - 1)) *
           (1.0 - p.c * qp(j - n - 1)) / ((1.0 - p.b * p.c) * (1.0 - p.a));
  }
  return (1.0 - p.a * qp(j)) * (p.c - p.a * qp(n - j)) * (1.0 - p.b * p.c * qp(j + 1)) *
         (1.0 - p.b * qp(n - j + 1)) /
         (p.a * p.b * p.q * (1.0 - p.a) * (1.0 - p.b * p.c * p.q));
}

AnalyticSpectrum analytic_spectrum(ContiguityFamily family, const QRacahParams& params,
                                   double cross_route_tolerance) {
  const ContiguityCoefficients f = contiguity_coefficients(family, params);
  const int n = params.N;
  AnalyticSpectrum out;
  out.lambda.resize(n + 1);
  out.lambda_from_contiguity.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    out.lambda[j] = checked_sqrt(closed_form_radicand(family, params, j), "Lambda_j^2", j);
    out.lambda_from_contiguity[j] =
        checked_sqrt(f.lambda_plus(j) * f.lambda_minus(j), "lambda+ lambda-", j);
    const double scale = std::max(out.lambda[j], out.lambda_from_contiguity[j]);
    const double gap =
        scale > 0.0 ? std::abs(out.lambda[j] - out.lambda_from_contiguity[j]) / scale : 0.0;
    out.cross_route_gap = std::max(out.cross_route_gap, gap);
  }
  if (!(out.cross_route_gap <= cross_route_tolerance)) {
    std::ostringstream s;
    s << "closed-form Lambda and sqrt(lambda+ lambda-) disagree: relative gap "
      << out.cross_route_gap;
    throw InvalidParameterRegime(s.str());
  }
  return out;
}

PQTable build_pq_table(ContiguityFamily family, const QRacahParams& params) {
  const ContiguityCoefficients f = contiguity_coefficients(family, params);
  const ShiftedParams& sh = f.shifted;
  const int n = params.N;
  PQTable t;
  t.P = Matrix(n + 1, n + 1);
  t.Q = Matrix(n + 1, n + 1);
  t.lambda.resize(n + 1);
  for (int x = 0; x <= n; ++x) {
    const double lp = f.lambda_plus(x);
    const double lm = f.lambda_minus(x);
    t.lambda[x] = checked_sqrt(lp * lm, "lambda+ lambda-", x);
    double p_rad = lp * f.phi_0_minus[0];
    double q_rad = lm * f.phi_0_plus[0];
    for (int i = 0; i <= n; ++i) {
      if (i > 0) {
        const int k = i - 1;
        p_rad *= f.phi_0_plus[k] * f.phi_plus1_minus[k] /
                 (f.phi_0_minus[k] * f.phi_minus1_plus[k + 1]);
        q_rad *= f.phi_0_minus[k] * f.phi_plus1_plus[k] /
                 (f.phi_0_plus[k] * f.phi_minus1_minus[k + 1]);
      }
      const double p_norm = checked_sqrt(p_rad, "P normalization", x);
      const double q_norm = sgn(lm) * checked_sqrt(q_rad, "Q normalization", x);
      t.P(i, x) = p_norm == 0.0 ? 0.0 : p_norm * qracah_eval(i, x, params);
      t.Q(i, x) = q_norm == 0.0 ? 0.0 : q_norm * qracah_eval(i, x + sh.x_shift, sh.params_bar);
      if (!std::isfinite(t.P(i, x)) || !std::isfinite(t.Q(i, x)))
        throw InvalidParameterRegime("P/Q table entry not finite at (i,x)=(" +
                                     std::to_string(i) + "," + std::to_string(x) + ")");
    }
  }
  return t;
}

double pq_recurrence_residual(const ChainSpec& chain, const PQTable& table) {
  const int n = chain.N;
  if (table.P.rows() != static_cast<std::size_t>(n + 1) ||
      table.Q.rows() != static_cast<std::size_t>(n + 1) ||
      table.lambda.size() != static_cast<std::size_t>(n + 1))
    throw DomainError("pq_recurrence_residual: table size does not match the chain");
  // alpha_k -+ gamma_k with alpha_{-1} = alpha_N = 0 and likewise for gamma.
  auto am = [&](int k) { return k < 0 || k >= n ? 0.0 : chain.alpha[k] - chain.gamma[k]; };
  auto ap = [&](int k) { return k < 0 || k >= n ? 0.0 : chain.alpha[k] + chain.gamma[k]; };
  auto at = [&](const Matrix& m, int k, int j) { return k < 0 || k > n ? 0.0 : m(k, j); };

  double worst = 0.0;
  for (int j = 0; j <= n; ++j) {
    double col = 0.0;
    for (int k = 0; k <= n; ++k)
      col = std::max({col, std::abs(table.P(k, j)), std::abs(table.Q(k, j))});
    const double scale = col * std::max(chain.coupling_scale(), table.lambda[j]);
    if (scale == 0.0) continue;
    const double lam = table.lambda[j];
    for (int k = 0; k <= n; ++k) {
      const double r1 = chain.beta[k] * table.P(k, j) + am(k) * at(table.P, k + 1, j) +
                        ap(k - 1) * at(table.P, k - 1, j) - lam * table.Q(k, j);
      const double r2 = chain.beta[k] * table.Q(k, j) + ap(k) * at(table.Q, k + 1, j) +
                        am(k - 1) * at(table.Q, k - 1, j) - lam * table.P(k, j);
      double r = std::max(std::abs(r1), std::abs(r2)) / scale;
      if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
      worst = std::max(worst, r);
    }
  }
  return worst;
}

std::optional<std::string> validity_failure(ContiguityFamily family, const QRacahParams& params,
                                            const ScanOptions& options) {
  try {
    params.validate();
    const double floor = min_denominator_factor(family, params);
    if (!(floor >= options.denominator_floor)) {
      std::ostringstream s;
      s << "denominator factor " << floor << " below " << options.denominator_floor;
      return s.str();
    }
    build_chain(family, params);
    analytic_spectrum(family, params);
    build_pq_table(family, params);
    const ContiguityReport report = verify_contiguity(family, params, options.contiguity_tolerance);
    if (!report.pass) return report.summary();
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

namespace {

// 53 random bits to [0, 1); fixed mapping so draws match across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double draw(const Axis& axis, std::mt19937_64& rng) {
  const double u = axis.lo + (axis.hi - axis.lo) * unit(rng);
  if (axis.scale == AxisScale::Linear) return u;
  const double sign = (rng() >> 63) != 0 ? -1.0 : 1.0;
  return sign * std::pow(10.0, u);
}

}  // namespace

std::vector<QRacahParams> parameter_scan(ContiguityFamily family, const ParamBox& box, int N,
                                         int samples, const ScanOptions& options) {
  if (samples < 1) throw DomainError("parameter_scan: samples must be at least 1");
  if (N < 1) throw DomainError("parameter_scan: N must be at least 1");
  for (const Axis* axis : {&box.a, &box.b, &box.c, &box.q}) {
    if (!std::isfinite(axis->lo) || !std::isfinite(axis->hi))
      throw DomainError("parameter_scan: box bounds must be finite");
    if (axis->empty())
      throw NoValidParameters("parameter_scan: empty box (lo > hi); widen the ranges");
  }
  if (box.q.scale != AxisScale::Linear)
    throw DomainError("parameter_scan: the q axis must be linear");

  std::mt19937_64 rng(options.seed);
  std::vector<QRacahParams> found;
  for (int s = 0; s < samples; ++s) {
    QRacahParams p;
    p.a = draw(box.a, rng);
    p.b = draw(box.b, rng);
    p.c = draw(box.c, rng);
    p.q = draw(box.q, rng);
    p.N = N;
    if (!validity_failure(family, p, options)) {
      found.push_back(p);
      if (options.max_results != 0 && found.size() >= options.max_results) break;
    }
  }
  if (found.empty()) {
    std::ostringstream s;
    s << "parameter_scan: no valid " << to_string(family) << " draws among " << samples
      << " samples at N=" << N << "; widen the ranges or raise the sample count";
    throw NoValidParameters(s.str());
  }
  return found;
}

}  // namespace xychain
