#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "xychain/error.hpp"
#include "xychain/qracah.hpp"

namespace xychain {
namespace {

using testing::Float50;

struct Frozen {
  double a, b, c;
  int N;
  double q;
  int i, x;
  double value;
};

// 50-digit term-by-term sums, rounded to 20 digits.
constexpr Frozen kFrozen[] = {
    {0.01729435642146124, 1.3799512899386335, 20.63007854459864, 4, 0.5, 1, 1, 0.17142158407906512103},
    {0.01729435642146124, 1.3799512899386335, 20.63007854459864, 4, 0.5, 2, 3, 0.65508884117730449514},
    {0.01729435642146124, 1.3799512899386335, 20.63007854459864, 4, 0.5, 4, 4, 174.99804807628149255},
    {0.01729435642146124, 1.3799512899386335, 20.63007854459864, 4, 0.5, 4, 0, 1.0},
    {0.01729435642146124, 1.3799512899386335, 20.63007854459864, 4, 0.5, 3, 2, 8.7061803660990025963},
    {18.217854711155194, 149.16096163665418, -0.17590868876128643, 4, 0.5, 1, 1, 0.04915907324963361643},
    {18.217854711155194, 149.16096163665418, -0.17590868876128643, 4, 0.5, 2, 3, 7.2198301078222843482},
    {18.217854711155194, 149.16096163665418, -0.17590868876128643, 4, 0.5, 4, 4, 9024.8138934269164336},
    {18.217854711155194, 149.16096163665418, -0.17590868876128643, 4, 0.5, 3, 2, 1.7253504614628157365},
    {0.3, -0.45, 2.5, 3, 0.7, 1, 1, 1.6929423619557138276},
    {0.3, -0.45, 2.5, 3, 0.7, 2, 3, 4.6282517994345725866},
    {0.3, -0.45, 2.5, 3, 0.7, 3, 3, 10.30091303396023625},
    {0.3, -0.45, 2.5, 3, 0.7, 3, 2, 8.6792724736162840908},
};

TEST(QRacah, FrozenHighPrecisionValues) {
  for (const Frozen& f : kFrozen) {
    const QRacahParams p{f.a, f.b, f.c, f.N, f.q};
    EXPECT_NEAR(qracah_eval(f.i, f.x, p), f.value, 1e-12 * std::abs(f.value))
        << "i=" << f.i << " x=" << f.x;
  }
}

TEST(QRacah, DegreeZeroAndOriginAreOne) {
  const QRacahParams p{0.3, -0.45, 2.5, 5, 0.7};
  for (int x = 0; x <= 5; ++x) EXPECT_EQ(qracah_eval(0, x, p), 1.0);
  for (int i = 0; i <= 5; ++i) EXPECT_EQ(qracah_eval(i, 0, p), 1.0);
}

TEST(QRacah, GridVariable) {
  const QRacahParams p{0.3, -0.45, 2.5, 5, 0.7};
  EXPECT_EQ(grid_variable(0, p), 0.0);
  EXPECT_NEAR(grid_variable(2, p), -(1 - std::pow(0.7, -2)) * (1 - 2.5 * std::pow(0.7, -3)), 1e-14);
}

// R_i(x) is a polynomial of degree i in the grid variable: interpolating
// through x = 0..i predicts every other grid point.
TEST(QRacah, PolynomialOfDegreeIInGridVariable) {
  testing::Gen g(21);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const QRacahParams p{g.uniform(-0.9, 0.9), g.uniform(-0.9, 0.9), g.uniform(-0.9, 0.9),
                         g.integer(2, 6), g.uniform(0.3, 0.8)};
    try {
      p.validate();
    } catch (const DomainError&) {
      continue;
    }
    for (int i = 0; i <= p.N; ++i) {
      std::vector<double> nodes, values;
      for (int x = 0; x <= i; ++x) {
        nodes.push_back(grid_variable(x, p));
        values.push_back(static_cast<double>(testing::qracah<Float50>(i, x, p)));
      }
      for (int x = i + 1; x <= p.N; ++x) {
        const double lam = grid_variable(x, p);
        double interp = 0.0;
        for (int m = 0; m <= i; ++m) {
          double basis = 1.0;
          for (int l = 0; l <= i; ++l)
            if (l != m) basis *= (lam - nodes[l]) / (nodes[m] - nodes[l]);
          interp += values[m] * basis;
        }
        const double direct = qracah_eval(i, x, p);
        EXPECT_NEAR(direct, interp, 1e-7 * std::max(1.0, std::abs(direct)))
            << "t=" << t << " i=" << i << " x=" << x;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(QRacah, MatchesHighPrecisionOnScannedDraws) {
  for (auto family : {ContiguityFamily::QR_I_III, ContiguityFamily::QR_II_IV}) {
    for (const QRacahParams& p : testing::valid_draws(family, 6, 0.5, 10)) {
      for (int i = 0; i <= p.N; ++i)
        for (int x = 0; x <= p.N; ++x) {
          const double want = static_cast<double>(testing::qracah<Float50>(i, x, p));
          const SeriesValue got = phi43_terminating_with_magnitude(Phi43Spec::make(
              i, {QMonomial{p.a * p.b, i + 1}, QMonomial{1.0, -x}, QMonomial{p.c, x - p.N}},
              {QMonomial{p.a, 1}, QMonomial{p.b * p.c, 1}, QMonomial{1.0, -p.N}}, p.q, p.q));
          EXPECT_NEAR(qracah_eval(i, x, p), want, 1e-13 * got.magnitude);
        }
    }
  }
}

TEST(QRacah, ValidateRejects) {
  EXPECT_THROW((QRacahParams{0.3, 0.4, 0.5, 3, 1.0}.validate()), DomainError);
  EXPECT_THROW((QRacahParams{0.3, 0.4, 0.5, 0, 0.5}.validate()), DomainError);
  EXPECT_THROW((QRacahParams{NAN, 0.4, 0.5, 3, 0.5}.validate()), DomainError);
  // a q^2 = 1 makes (aq; q)_2 vanish
  EXPECT_THROW((QRacahParams{4.0, 0.4, 0.5, 3, 0.5}.validate()), DomainError);
  EXPECT_THROW((QRacahParams{0.3, 2.0, 1.0, 3, 0.5}.validate()), DomainError);
  EXPECT_NO_THROW((QRacahParams{0.3, 0.4, 0.5, 3, 0.5}.validate()));
}

TEST(QRacah, FamilyNames) {
  EXPECT_EQ(to_string(ContiguityFamily::QR_I_III), "qr13");
  EXPECT_EQ(to_string(ContiguityFamily::QR_II_IV), "qr24");
  EXPECT_EQ(parse_family("qr13"), ContiguityFamily::QR_I_III);
  EXPECT_EQ(parse_family("qr24"), ContiguityFamily::QR_II_IV);
  EXPECT_FALSE(parse_family("explicit").has_value());
}

TEST(ShiftParams, Families) {
  const QRacahParams p{0.3, 0.4, 0.5, 3, 0.5};
  const ShiftedParams s1 = shift_params(ContiguityFamily::QR_I_III, p);
  EXPECT_EQ(s1.x_shift, 1);
  EXPECT_DOUBLE_EQ(s1.params_bar.a, 0.6);
  EXPECT_DOUBLE_EQ(s1.params_bar.b, 0.2);
  EXPECT_DOUBLE_EQ(s1.params_bar.c, 2.0);
  EXPECT_EQ(s1.params_bar.N, 3);
  const ShiftedParams s2 = shift_params(ContiguityFamily::QR_II_IV, p);
  EXPECT_EQ(s2.x_shift, 0);
  EXPECT_DOUBLE_EQ(s2.params_bar.c, 0.5);
}

TEST(ShiftParams, InvalidShift) {
  // a = 1 is fine for rho but abar q = 1 kills (abar q; q)_1.
  const QRacahParams p{1.0, 0.4, 0.5, 3, 0.5};
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW(shift_params(ContiguityFamily::QR_I_III, p), InvalidShiftedParams);
  EXPECT_THROW(contiguity_coefficients(ContiguityFamily::QR_II_IV, p), InvalidShiftedParams);
}

TEST(Contiguity, CoefficientTablesHaveFullLength) {
  const QRacahParams p = testing::valid_draws(ContiguityFamily::QR_I_III, 4, 0.5, 1).at(0);
  const auto c = contiguity_coefficients(ContiguityFamily::QR_I_III, p);
  for (const auto* v : {&c.phi_plus1_plus, &c.phi_0_plus, &c.phi_minus1_plus, &c.phi_plus1_minus,
                        &c.phi_0_minus, &c.phi_minus1_minus})
    EXPECT_EQ(v->size(), 5u);
  // Boundary zeros: Phi^{-1,+-}_0 and Phi^{+1,+-}_N vanish.
  EXPECT_EQ(c.phi_minus1_plus[0], 0.0);
  EXPECT_EQ(c.phi_minus1_minus[0], 0.0);
  EXPECT_EQ(c.phi_plus1_plus[4], 0.0);
  EXPECT_EQ(c.phi_plus1_minus[4], 0.0);
}

// Relations checked against 50-digit R values, so any residual is the
// coefficients' fault, not the double-precision series.
TEST(Contiguity, RelationsHoldAgainstHighPrecisionPolynomials) {
  for (auto family : {ContiguityFamily::QR_I_III, ContiguityFamily::QR_II_IV}) {
    for (int N : {2, 3, 5}) {
      for (const QRacahParams& p : testing::valid_draws(family, N, 0.5, 5)) {
        const auto c = contiguity_coefficients(family, p);
        const ShiftedParams& sh = c.shifted;
        for (int i = 0; i <= N; ++i) {
          for (int x = 0; x <= N; ++x) {
            auto r = [&](int deg, bool bar) {
              return bar ? testing::qracah<Float50>(deg, x + sh.x_shift, sh.params_bar)
                         : testing::qracah<Float50>(deg, x, p);
            };
            auto side = [&](bool plus) {
              const bool bar = plus;  // "+" expands in rhobar, "-" in rho
              const Float50 lam = plus ? c.lambda_plus(x) : c.lambda_minus(x);
              const Float50 lhs = lam * r(i, !bar);
              const auto& up = plus ? c.phi_plus1_plus : c.phi_plus1_minus;
              const auto& mid = plus ? c.phi_0_plus : c.phi_0_minus;
              const auto& down = plus ? c.phi_minus1_plus : c.phi_minus1_minus;
              const QRacahParams& target = bar ? sh.params_bar : p;
              const int xt = bar ? x + sh.x_shift : x;
              Float50 t_up = i < N ? Float50(up[i]) * r(i + 1, bar)
                                   : Float50(plus ? c.top_plus_reduced : c.top_minus_reduced) *
                                         qracah_top_limit(xt, target);
              Float50 t_mid = Float50(mid[i]) * r(i, bar);
              Float50 t_down = i > 0 ? Float50(down[i]) * r(i - 1, bar) : Float50(0);
              using boost::multiprecision::abs;
              Float50 scale = abs(lhs);
              for (const Float50& t : {t_up, t_mid, t_down}) scale = std::max(scale, Float50(abs(t)));
              const Float50 diff = abs(lhs - t_up - t_mid - t_down);
              return scale > 0 ? static_cast<double>(diff / scale) : 0.0;
            };
            EXPECT_LT(side(true), 1e-12) << to_string(family) << " N=" << N << " i=" << i << " x=" << x;
            EXPECT_LT(side(false), 1e-12) << to_string(family) << " N=" << N << " i=" << i << " x=" << x;
          }
        }
      }
    }
  }
}

TEST(Contiguity, VerifyPassesOnScannedDraws) {
  for (auto family : {ContiguityFamily::QR_I_III, ContiguityFamily::QR_II_IV}) {
    for (const QRacahParams& p : testing::valid_draws(family, 5, 0.7, 10)) {
      const ContiguityReport r = verify_contiguity(family, p);
      EXPECT_TRUE(r.pass) << r.summary();
    }
  }
}

TEST(Contiguity, PrintedQr24ZeroMinusFormFails) {
  for (const QRacahParams& p : testing::valid_draws(ContiguityFamily::QR_II_IV, 4, 0.5, 10)) {
    const ContiguityReport r = verify_contiguity(ContiguityFamily::QR_II_IV, p);
    EXPECT_EQ(r.selected_form, ZeroMinusForm::Rederived);
    ASSERT_TRUE(r.residual_minus_alternative.has_value());
    EXPECT_GT(*r.residual_minus_alternative, 1e-3);
  }
}

TEST(Contiguity, Qr13TopLimitTermOnlyAtCorner) {
  const QRacahParams p = testing::valid_draws(ContiguityFamily::QR_I_III, 4, 0.5, 1).at(0);
  const ShiftedParams sh = shift_params(ContiguityFamily::QR_I_III, p);
  for (int x = 0; x < 4; ++x) EXPECT_EQ(qracah_top_limit(x + 1, sh.params_bar), 0.0);
  EXPECT_NE(qracah_top_limit(5, sh.params_bar), 0.0);
  for (int x = 0; x <= 4; ++x) EXPECT_EQ(qracah_top_limit(x, p), 0.0);
}

TEST(Contiguity, ConstraintRatioIsOne) {
  for (auto family : {ContiguityFamily::QR_I_III, ContiguityFamily::QR_II_IV}) {
    for (const QRacahParams& p : testing::valid_draws(family, 6, 0.3, 10)) {
      const auto c = contiguity_coefficients(family, p);
      EXPECT_LT(c.constraint_residual(), 1e-10);
    }
  }
}

TEST(Contiguity, DenominatorFloorIsPositiveOnValidDraws) {
  for (const QRacahParams& p : testing::valid_draws(ContiguityFamily::QR_II_IV, 3, 0.5, 5))
    EXPECT_GE(min_denominator_factor(ContiguityFamily::QR_II_IV, p), 1e-8);
}

}  // namespace
}  // namespace xychain
