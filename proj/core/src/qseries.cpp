#include "xychain/qseries.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "xychain/error.hpp"

namespace xychain {

namespace {

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0))
    throw DomainError("q must lie strictly inside (0, 1), got " + std::to_string(q));
}

// Factors within a few ulps of zero are treated as vanishing.
constexpr double kZeroFactor = 16.0 * std::numeric_limits<double>::epsilon();

bool vanishes(double factor, double q_term) {
  return std::abs(factor) <= kZeroFactor * std::max(1.0, std::abs(q_term));
}

}  // namespace

double q_pochhammer(const QPochhammerArgs& args) {
  require_q(args.q);
  if (args.k < 0) throw DomainError("q_pochhammer: k must be nonnegative");
  double product = 1.0;
  double power = 1.0;
  for (int l = 0; l < args.k; ++l) {
    product *= 1.0 - args.base * power;
    power *= args.q;
  }
  return product;
}

double q_pochhammer(double base, double q, int k) { return q_pochhammer({base, q, k}); }

double q_pochhammer_multi(std::span<const double> bases, double q, int k) {
  double product = 1.0;
  for (double b : bases) product *= q_pochhammer(b, q, k);
  return product;
}

double QMonomial::value(double q) const { return coef * std::pow(q, power); }

double QMonomial::one_minus(double q, int shift) const {
  return 1.0 - coef * std::pow(q, power + shift);
}

Phi43Spec Phi43Spec::make(int degree, std::array<QMonomial, 3> upper,
                          std::array<QMonomial, 3> lower, double q, double z) {
  Phi43Spec spec;
  spec.degree = degree;
  spec.numerator = {QMonomial{1.0, -degree}, upper[0], upper[1], upper[2]};
  spec.denominator = lower;
  spec.q = q;
  spec.z = z;
  return spec;
}

SeriesValue phi43_terminating_with_magnitude(const Phi43Spec& spec) {
  require_q(spec.q);
  const int n = spec.degree;
  if (n < 0) throw DomainError("phi43_terminating: degree must be nonnegative");
  const QMonomial& first = spec.numerator[0];
  if (std::abs(first.value(spec.q) - std::pow(spec.q, -n)) >
      1e-12 * std::pow(spec.q, -n))
    throw DomainError("phi43_terminating: first numerator parameter must be q^{-degree}");

  const double q = spec.q;
  double term = 1.0;
  SeriesValue out{1.0, 1.0};
  for (int k = 0; k < n; ++k) {
    double den = 1.0 - std::pow(q, k + 1);
    for (const QMonomial& b : spec.denominator) {
      const double f = b.one_minus(q, k);
      if (vanishes(f, b.value(q) * std::pow(q, k))) {
        throw DenominatorVanishes(k + 1, "phi43_terminating: denominator factor vanishes at term k=" +
                                             std::to_string(k + 1));
      }
      den *= f;
    }
    // The q^{-degree} parameter always goes through exact powers of q.
    double num = 1.0 - std::pow(q, k - n);
    bool terminated = false;
    for (int p = 1; p < 4; ++p) {
      const QMonomial& a = spec.numerator[p];
      double f = a.one_minus(q, k);
      if (vanishes(f, a.value(q) * std::pow(q, k))) terminated = true;
      num *= f;
    }
    if (terminated) break;
    term *= num * spec.z / den;
    out.value += term;
    out.magnitude += std::abs(term);
  }
  return out;
}

double phi43_terminating(const Phi43Spec& spec) {
  return phi43_terminating_with_magnitude(spec).value;
}

}  // namespace xychain
