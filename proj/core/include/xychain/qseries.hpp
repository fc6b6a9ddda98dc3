#pragma once

// q-Pochhammer symbols and terminating 4phi3 basic hypergeometric series.
// Every routine requires 0 < q < 1 and rejects anything else.

#include <array>
#include <span>

namespace xychain {

struct QPochhammerArgs {
  double base = 0.0;
  double q = 0.5;
  int k = 0;
};

/// (base; q)_k = prod_{l=0}^{k-1} (1 - base q^l); 1 for k = 0.
double q_pochhammer(const QPochhammerArgs& args);
double q_pochhammer(double base, double q, int k);

/// (b_1, ..., b_p; q)_k, the product of the individual symbols.
double q_pochhammer_multi(std::span<const double> bases, double q, int k);

/// A real series parameter written as coef * q^power. Parameters such as
/// q^{-x} or c q^{x-N} carry their integer exponent so that the factor
/// 1 - coef q^{power+k} is exactly zero when it should be.
struct QMonomial {
  double coef = 0.0;
  int power = 0;

  constexpr QMonomial() = default;
  constexpr QMonomial(double value) : coef(value) {}  // NOLINT: plain reals convert
  constexpr QMonomial(double c, int p) : coef(c), power(p) {}

  double value(double q) const;
  /// 1 - coef q^{power + shift}
  double one_minus(double q, int shift) const;
};

/// Terminating 4phi3( q^{-i}, a1, a2, a3 ; b1, b2, b3 | q; z ).
struct Phi43Spec {
  int degree = 0;
  std::array<QMonomial, 4> numerator{};  // numerator[0] is q^{-degree}
  std::array<QMonomial, 3> denominator{};
  double q = 0.5;
  double z = 1.0;

  static Phi43Spec make(int degree, std::array<QMonomial, 3> upper,
                        std::array<QMonomial, 3> lower, double q, double z);
};

/// Finite sum over k = 0..degree, accumulated through the term ratio
/// t_{k+1}/t_k. Throws DenominatorVanishes (carrying the term index) when a
/// denominator factor is zero, DomainError on invalid q, degree or a first
/// numerator parameter that is not q^{-degree}.
double phi43_terminating(const Phi43Spec& spec);

/// Same sum; also returns sum_k |t_k|, the scale the rounding error is
/// proportional to.
struct SeriesValue {
  double value = 0.0;
  double magnitude = 0.0;
};
SeriesValue phi43_terminating_with_magnitude(const Phi43Spec& spec);

}  // namespace xychain
