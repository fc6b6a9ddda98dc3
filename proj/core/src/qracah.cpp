#include "xychain/qracah.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "xychain/error.hpp"
#include "xychain/qseries.hpp"

namespace xychain {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool near_zero(double v, double scale = 1.0) { return std::abs(v) <= 16.0 * kEps * scale; }

struct Powers {
  double q;
  double operator()(int n) const { return std::pow(q, n); }
};

}  // namespace

void QRacahParams::validate() const {
  if (!(q > 0.0 && q < 1.0))
    throw DomainError("q-Racah: q must lie strictly inside (0, 1)");
  if (N < 1) throw DomainError("q-Racah: N must be at least 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw DomainError("q-Racah: a, b, c must be finite");
  const Powers qp{q};
  for (int l = 0; l < N; ++l) {
    if (near_zero(1.0 - a * qp(l + 1), std::abs(a * qp(l + 1))))
      throw DomainError("q-Racah: (aq; q)_k vanishes for some k <= N");
    if (near_zero(1.0 - b * c * qp(l + 1), std::abs(b * c * qp(l + 1))))
      throw DomainError("q-Racah: (bcq; q)_k vanishes for some k <= N");
  }
}

std::string_view to_string(ContiguityFamily family) {
  switch (family) {
    case ContiguityFamily::QR_I_III: return "qr13";
    case ContiguityFamily::QR_II_IV: return "qr24";
  }
  return "?";
}

std::optional<ContiguityFamily> parse_family(std::string_view name) {
  if (name == "qr13") return ContiguityFamily::QR_I_III;
  if (name == "qr24") return ContiguityFamily::QR_II_IV;
  return std::nullopt;
}

std::string_view to_string(ZeroMinusForm form) {
  return form == ZeroMinusForm::AsPrinted ? "as-printed" : "rederived";
}

ShiftedParams shift_params(ContiguityFamily family, const QRacahParams& params) {
  ShiftedParams out;
  out.params_bar = params;
  out.params_bar.a = params.a / params.q;
  out.params_bar.b = params.b * params.q;
  switch (family) {
    case ContiguityFamily::QR_I_III:
      out.x_shift = 1;
      out.params_bar.c = params.c / (params.q * params.q);
      break;
    case ContiguityFamily::QR_II_IV:
      out.x_shift = 0;
      break;
  }
  try {
    out.params_bar.validate();
  } catch (const DomainError& e) {
    throw InvalidShiftedParams(std::string("shifted parameters invalid: ") + e.what());
  }
  return out;
}

double qracah_eval(int i, int x, const QRacahParams& p) {
  if (i < 0 || i > p.N) throw DomainError("qracah_eval: degree outside 0..N");
  if (x < 0) throw DomainError("qracah_eval: x must be nonnegative");
  const Phi43Spec spec = Phi43Spec::make(
      i, {QMonomial{p.a * p.b, i + 1}, QMonomial{1.0, -x}, QMonomial{p.c, x - p.N}},
      {QMonomial{p.a, 1}, QMonomial{p.b * p.c, 1}, QMonomial{1.0, -p.N}}, p.q, p.q);
  return phi43_terminating(spec);
}

double grid_variable(int x, const QRacahParams& p) {
  return -(1.0 - std::pow(p.q, -x)) * (1.0 - p.c * std::pow(p.q, x - p.N));
}

double qracah_top_limit(int x, const QRacahParams& p) {
  const Powers qp{p.q};
  const int n = p.N;
  const int i = n + 1;
  double term = 1.0;
  for (int k = 0; k <= n; ++k) {
    const double num = (1.0 - qp(k - i)) * (1.0 - p.a * p.b * qp(i + 1 + k)) *
                       (1.0 - qp(k - x)) * (1.0 - p.c * qp(x - n + k));
    if (num == 0.0) return 0.0;
    double den = (1.0 - qp(k + 1)) * (1.0 - p.a * qp(k + 1)) * (1.0 - p.b * p.c * qp(k + 1));
    if (k < n) den *= 1.0 - qp(k - n);
    term *= num * p.q / den;
  }
  return term;
}

namespace {

// Closed forms for one family; every method evaluates a printed coefficient.
struct FamilyI {
  double a, b, c, q;
  int N;
  Powers qp{q};

  double ab(int n) const { return 1.0 - a * b * qp(n); }

  double plus1_plus(int i) const {
    return -qp(i) * (1.0 - qp(i - N)) * ab(i + 1) / (ab(2 * i + 1) * ab(2 * i + 2));
  }
  double minus1_plus(int i) const {
    return -qp(i - N - 1) * (1.0 - qp(i)) * ab(N + i + 1) / (ab(2 * i) * ab(2 * i + 1));
  }
  double zero_plus(int i) const { return -plus1_plus(i) - minus1_plus(i); }
  double lambda_plus(int x) const {
    return (1.0 - qp(-x - 1)) * (1.0 - c * qp(x - N - 1)) / ((1.0 - b * c) * (1.0 - a));
  }
  double lambda_minus(int x) const { return (1.0 - c * qp(x)) * (1.0 - qp(N - x)); }
  double plus1_minus(int i) const {
    return (1.0 - qp(N - i)) * (1.0 - a * qp(i)) * (1.0 - a * qp(i + 1)) * ab(i + 1) *
           (1.0 - b * c * qp(i)) * (1.0 - b * c * qp(i + 1)) /
           ((1.0 - a) * (1.0 - b * c) * ab(2 * i + 1) * ab(2 * i + 2));
  }
  double zero_minus(int i) const {
    const double pre = (1.0 - a * qp(i)) * (1.0 - b * qp(i + 1)) * (1.0 - b * c * qp(i)) *
                       (a * qp(i + 1) - c) / (q * (1.0 - a) * (1.0 - b * c) * ab(2 * i + 1));
    const double bracket = q * (1.0 - qp(N - i)) * ab(i + 1) / ab(2 * i + 2) +
                           (1.0 - qp(-i)) * ab(N + i + 1) / ab(2 * i);
    return pre * bracket;
  }
  double minus1_minus(int i) const {
    return (1.0 - qp(-i)) * (a * qp(i) - c) * (a * qp(i + 1) - c) * (1.0 - b * qp(i)) *
           (1.0 - b * qp(i + 1)) * ab(N + i + 1) /
           (q * (1.0 - a) * (1.0 - b * c) * ab(2 * i) * ab(2 * i + 1));
  }
  // Vanishing factor: (1 - q^{i-N}) in both top coefficients; (1 - q^{N-i}) -> -1.
  double top_plus_reduced() const {
    return -qp(N) * ab(N + 1) / (ab(2 * N + 1) * ab(2 * N + 2));
  }
  double top_minus_reduced() const {
    return -(1.0 - a * qp(N)) * (1.0 - a * qp(N + 1)) * ab(N + 1) * (1.0 - b * c * qp(N)) *
           (1.0 - b * c * qp(N + 1)) /
           ((1.0 - a) * (1.0 - b * c) * ab(2 * N + 1) * ab(2 * N + 2));
  }
  std::vector<double> denominators() const {
    std::vector<double> d{1.0 - a, 1.0 - b * c, q};
    for (int i = 0; i <= N; ++i)
      for (int n : {2 * i, 2 * i + 1, 2 * i + 2}) d.push_back(ab(n));
    return d;
  }
};

struct FamilyII {
  double a, b, c, q;
  int N;
  Powers qp{q};

  double ab(int n) const { return 1.0 - a * b * qp(n); }

  double plus1_plus(int i) const {
    return -(qp(N) - qp(i)) * ab(i + 1) * (1.0 - b * c * qp(i + 1)) * (1.0 - b * c * qp(i + 2)) /
           ((1.0 - b * c * q) * ab(2 * i + 1) * ab(2 * i + 2));
  }
  double minus1_plus(int i) const {
    return -b * q * (1.0 - qp(i)) * (c - a * qp(i - 1)) * (c - a * qp(i)) * ab(N + i + 1) /
           (a * (1.0 - b * c * q) * ab(2 * i) * ab(2 * i + 1));
  }
  double lambda_plus(int x) const {
    return (1.0 - a * qp(x)) * (c - a * qp(N - x)) / (a * (1.0 - a));
  }
  double zero_plus(int i) const { return lambda_plus(0) - plus1_plus(i) - minus1_plus(i); }
  double plus1_minus(int i) const {
    return (1.0 - a * qp(i)) * (1.0 - a * qp(i + 1)) * ab(i + 1) * (qp(i) - qp(N)) /
           ((1.0 - a) * ab(2 * i + 1) * ab(2 * i + 2));
  }
  double minus1_minus(int i) const {
    return -a * (1.0 - qp(i)) * (1.0 - b * qp(i)) * (1.0 - b * qp(i + 1)) * ab(N + i + 1) /
           (b * q * (1.0 - a) * ab(2 * i) * ab(2 * i + 1));
  }
  double lambda_minus(int x) const {
    return (1.0 - b * c * qp(x + 1)) * (1.0 - b * qp(N - x + 1)) / (b * q * (1.0 - b * c * q));
  }
  double zero_minus_printed(int i) const {
    return lambda_plus(0) - plus1_plus(i) - minus1_plus(i);
  }
  double zero_minus_rederived(int i) const {
    return lambda_minus(0) - plus1_minus(i) - minus1_minus(i);
  }
  // (q^N - q^i) = q^N (1 - q^{i-N}); (q^i - q^N) = -q^N (1 - q^{i-N}).
  double top_plus_reduced() const {
    return -qp(N) * ab(N + 1) * (1.0 - b * c * qp(N + 1)) * (1.0 - b * c * qp(N + 2)) /
           ((1.0 - b * c * q) * ab(2 * N + 1) * ab(2 * N + 2));
  }
  double top_minus_reduced() const {
    return -qp(N) * (1.0 - a * qp(N)) * (1.0 - a * qp(N + 1)) * ab(N + 1) /
           ((1.0 - a) * ab(2 * N + 1) * ab(2 * N + 2));
  }
  std::vector<double> denominators() const {
    std::vector<double> d{1.0 - a, 1.0 - b * c * q, a, b, q};
    for (int i = 0; i <= N; ++i)
      for (int n : {2 * i, 2 * i + 1, 2 * i + 2}) d.push_back(ab(n));
    return d;
  }
};

template <class Family>
void fill(const Family& f, ContiguityCoefficients& out, bool printed_zero_minus) {
  const int n = out.params.N;
  for (int i = 0; i <= n; ++i) {
    out.phi_plus1_plus[i] = f.plus1_plus(i);
    out.phi_0_plus[i] = f.zero_plus(i);
    out.phi_minus1_plus[i] = f.minus1_plus(i);
    out.phi_plus1_minus[i] = f.plus1_minus(i);
    out.phi_minus1_minus[i] = f.minus1_minus(i);
    if constexpr (std::is_same_v<Family, FamilyII>) {
      out.phi_0_minus[i] = printed_zero_minus ? f.zero_minus_printed(i) : f.zero_minus_rederived(i);
    } else {
      out.phi_0_minus[i] = f.zero_minus(i);
    }
  }
  out.top_plus_reduced = f.top_plus_reduced();
  out.top_minus_reduced = f.top_minus_reduced();
}

FamilyI family_i(const QRacahParams& p) { return FamilyI{p.a, p.b, p.c, p.q, p.N}; }
FamilyII family_ii(const QRacahParams& p) { return FamilyII{p.a, p.b, p.c, p.q, p.N}; }

}  // namespace

double ContiguityCoefficients::lambda_plus(int x) const {
  return family == ContiguityFamily::QR_I_III ? family_i(params).lambda_plus(x)
                                              : family_ii(params).lambda_plus(x);
}

double ContiguityCoefficients::lambda_minus(int x) const {
  return family == ContiguityFamily::QR_I_III ? family_i(params).lambda_minus(x)
                                              : family_ii(params).lambda_minus(x);
}

double ContiguityCoefficients::constraint_ratio(int i) const {
  const double num =
      phi_0_minus[i] * phi_plus1_plus[i] * phi_minus1_plus[i + 1] * phi_0_minus[i + 1];
  const double den =
      phi_0_plus[i] * phi_plus1_minus[i] * phi_minus1_minus[i + 1] * phi_0_plus[i + 1];
  return num / den;
}

double ContiguityCoefficients::constraint_residual() const {
  double worst = 0.0;
  for (int i = 0; i < N(); ++i) {
    const double r = std::abs(constraint_ratio(i) - 1.0);
    if (std::isnan(r)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, r);
  }
  return worst;
}

ContiguityCoefficients contiguity_coefficients(ContiguityFamily family,
                                               const QRacahParams& params,
                                               ZeroMinusForm form) {
  params.validate();
  ContiguityCoefficients out;
  out.family = family;
  out.params = params;
  out.shifted = shift_params(family, params);
  const auto size = static_cast<std::size_t>(params.N + 1);
  for (auto* v : {&out.phi_plus1_plus, &out.phi_0_plus, &out.phi_minus1_plus,
                  &out.phi_plus1_minus, &out.phi_0_minus, &out.phi_minus1_minus})
    v->assign(size, 0.0);

  if (family == ContiguityFamily::QR_I_III) {
    out.zero_minus_form = ZeroMinusForm::AsPrinted;
    fill(family_i(params), out, true);
  } else {
    out.zero_minus_form = form;
    fill(family_ii(params), out, form == ZeroMinusForm::AsPrinted);
  }

  auto check = [&](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!std::isfinite(v[i])) {
        std::ostringstream msg;
        msg << "coefficient " << name << "_" << i << " is not finite (vanishing denominator)";
        throw InvalidParameterRegime(msg.str());
      }
  };
  check(out.phi_plus1_plus, "Phi^{+1,+}");
  check(out.phi_0_plus, "Phi^{0,+}");
  check(out.phi_minus1_plus, "Phi^{-1,+}");
  check(out.phi_plus1_minus, "Phi^{+1,-}");
  check(out.phi_0_minus, "Phi^{0,-}");
  check(out.phi_minus1_minus, "Phi^{-1,-}");
  for (int x = 0; x <= params.N; ++x)
    if (!std::isfinite(out.lambda_plus(x)) || !std::isfinite(out.lambda_minus(x)))
      throw InvalidParameterRegime("lambda^{+-} is not finite at x=" + std::to_string(x));
  return out;
}

double min_denominator_factor(ContiguityFamily family, const QRacahParams& p) {
  std::vector<double> d = family == ContiguityFamily::QR_I_III ? family_i(p).denominators()
                                                               : family_ii(p).denominators();
  auto series = [&](const QRacahParams& r) {
    for (int l = 0; l < r.N; ++l) {
      d.push_back(1.0 - r.a * std::pow(r.q, l + 1));
      d.push_back(1.0 - r.b * r.c * std::pow(r.q, l + 1));
    }
  };
  series(p);
  QRacahParams bar = p;
  bar.a = p.a / p.q;
  bar.b = p.b * p.q;
  if (family == ContiguityFamily::QR_I_III) bar.c = p.c / (p.q * p.q);
  series(bar);
  double m = std::numeric_limits<double>::infinity();
  for (double v : d) m = std::min(m, std::abs(v));
  return m;
}

namespace {

struct RelationResidual {
  double worst = 0.0;
  std::pair<int, int> at{0, 0};
};

// Values R_i(x) for i = 0..N on x = shift .. N + shift.
std::vector<std::vector<double>> table(const QRacahParams& p, int shift) {
  std::vector<std::vector<double>> r(p.N + 1, std::vector<double>(p.N + 1));
  for (int i = 0; i <= p.N; ++i)
    for (int x = 0; x <= p.N; ++x) r[i][x] = qracah_eval(i, x + shift, p);
  return r;
}

// lambda_x L[i][x] = top_i U[i+1][x] + zero_i U[i][x] + bottom_i U[i-1][x]
RelationResidual relation_residual(const std::vector<std::vector<double>>& lhs_table,
                                   const std::vector<std::vector<double>>& rhs_table,
                                   const std::vector<double>& lambda,
                                   const std::vector<double>& top,
                                   const std::vector<double>& zero,
                                   const std::vector<double>& bottom,
                                   double top_reduced, const std::vector<double>& top_limit) {
  const int n = static_cast<int>(lambda.size()) - 1;
  RelationResidual out;
  for (int i = 0; i <= n; ++i) {
    for (int x = 0; x <= n; ++x) {
      const double lhs = lambda[x] * lhs_table[i][x];
      const double t_up = i < n ? top[i] * rhs_table[i + 1][x] : top_reduced * top_limit[x];
      const double t_mid = zero[i] * rhs_table[i][x];
      const double t_down = i > 0 ? bottom[i] * rhs_table[i - 1][x] : 0.0;
      const double scale =
          std::max({std::abs(lhs), std::abs(t_up), std::abs(t_mid), std::abs(t_down)});
      const double diff = std::abs(lhs - (t_up + t_mid + t_down));
      double r = scale > 0.0 ? diff / scale : 0.0;
      if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
      if (r > out.worst) out = {r, {i, x}};
    }
  }
  return out;
}

}  // namespace

ContiguityReport verify_contiguity(ContiguityFamily family, const QRacahParams& params,
                                   double tolerance) {
  const ContiguityCoefficients coeffs = contiguity_coefficients(family, params);
  const ShiftedParams& sh = coeffs.shifted;
  const int n = params.N;

  const auto r_rho = table(params, 0);
  const auto r_bar = table(sh.params_bar, sh.x_shift);
  std::vector<double> lp(n + 1), lm(n + 1), top_bar(n + 1), top_rho(n + 1);
  for (int x = 0; x <= n; ++x) {
    lp[x] = coeffs.lambda_plus(x);
    lm[x] = coeffs.lambda_minus(x);
    top_bar[x] = qracah_top_limit(x + sh.x_shift, sh.params_bar);
    top_rho[x] = qracah_top_limit(x, params);
  }

  ContiguityReport report;
  report.family = family;
  report.tolerance = tolerance;

  const RelationResidual plus =
      relation_residual(r_rho, r_bar, lp, coeffs.phi_plus1_plus, coeffs.phi_0_plus,
                        coeffs.phi_minus1_plus, coeffs.top_plus_reduced, top_bar);
  report.residual_plus = plus.worst;
  report.worst_plus = plus.at;

  auto minus_for = [&](const ContiguityCoefficients& c) {
    return relation_residual(r_bar, r_rho, lm, c.phi_plus1_minus, c.phi_0_minus,
                             c.phi_minus1_minus, c.top_minus_reduced, top_rho);
  };
  RelationResidual minus = minus_for(coeffs);
  report.selected_form = coeffs.zero_minus_form;
  if (family == ContiguityFamily::QR_II_IV) {
    const RelationResidual printed =
        minus_for(contiguity_coefficients(family, params, ZeroMinusForm::AsPrinted));
    if (printed.worst < minus.worst) {
      report.residual_minus_alternative = minus.worst;
      minus = printed;
      report.selected_form = ZeroMinusForm::AsPrinted;
    } else {
      report.residual_minus_alternative = printed.worst;
    }
  }
  report.residual_minus = minus.worst;
  report.worst_minus = minus.at;
  report.pass = report.residual_plus <= tolerance && report.residual_minus <= tolerance;
  return report;
}

std::string ContiguityReport::summary() const {
  std::ostringstream s;
  s << to_string(family) << " contiguity: plus residual " << residual_plus << " at (i,x)=("
    << worst_plus.first << "," << worst_plus.second << "), minus residual " << residual_minus
    << " at (" << worst_minus.first << "," << worst_minus.second << ") using "
    << to_string(selected_form) << " Phi^{0,-}";
  if (residual_minus_alternative)
    s << " (other form: " << *residual_minus_alternative << ")";
  s << (pass ? " PASS" : " FAIL");
  return s.str();
}

}  // namespace xychain
