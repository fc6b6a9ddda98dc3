#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "xychain/error.hpp"
#include "xychain/freefermion.hpp"

namespace xychain {
namespace {

constexpr ContiguityFamily kFamilies[] = {ContiguityFamily::QR_I_III, ContiguityFamily::QR_II_IV};

TEST(Assemble, BlockStructure) {
  const ChainSpec c = ChainSpec::from_couplings({1.0, 2.0}, {0.5, -0.5, 0.25}, {0.3, -0.1});
  const FreeFermionSystem s = assemble(c);
  EXPECT_EQ(s.A, (Matrix{{0.5, 1.0, 0.0}, {1.0, -0.5, 2.0}, {0.0, 2.0, 0.25}}));
  EXPECT_EQ(s.B, (Matrix{{0.0, 0.3, 0.0}, {-0.3, 0.0, -0.1}, {0.0, 0.1, 0.0}}));
  EXPECT_EQ(s.H.block(0, 0, 3, 3), s.A);
  EXPECT_EQ(s.H.block(0, 3, 3, 3), s.B);
  EXPECT_EQ(s.H.block(3, 0, 3, 3), -1.0 * s.B);
  EXPECT_EQ(s.H.block(3, 3, 3, 3), -1.0 * s.A);
}

TEST(Eigendecompose, SingleSite) {
  const SpectralData sd = eigendecompose(assemble(ChainSpec::from_couplings({}, {-2.0}, {})));
  ASSERT_EQ(sd.lambda_numeric.size(), 1u);
  EXPECT_DOUBLE_EQ(sd.lambda_numeric[0], 2.0);
  EXPECT_TRUE(orthogonality_check(sd).pass);
}

TEST(Eigendecompose, AllZeroCouplings) {
  const SpectralData sd =
      eigendecompose(assemble(ChainSpec::from_couplings({0, 0}, {0, 0, 0}, {0, 0})));
  EXPECT_EQ(sd.zero_modes, 3);
  EXPECT_TRUE(orthogonality_check(sd).pass);
  for (double l : sd.lambda_numeric) EXPECT_EQ(l, 0.0);
}

TEST(Eigendecompose, MatchesEigenOnRandomChains) {
  testing::Gen g(31);
  for (int t = 0; t < 60; ++t) {
    const int N = g.integer(0, 12);
    const FreeFermionSystem sys = assemble(testing::random_chain(g, N));
    const SpectralData sd = eigendecompose(sys);
    Eigen::MatrixXd h(sys.H.rows(), sys.H.cols());
    for (std::size_t i = 0; i < sys.H.rows(); ++i)
      for (std::size_t j = 0; j < sys.H.cols(); ++j) h(i, j) = sys.H(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(h);
    for (std::size_t k = 0; k < sd.h_eigenvalues.size(); ++k)
      EXPECT_NEAR(sd.h_eigenvalues[k], ref.eigenvalues()(static_cast<Eigen::Index>(k)), 1e-12);
    EXPECT_TRUE(spectrum_parity_check(sd).pass);
    EXPECT_TRUE(orthogonality_check(sd).pass) << orthogonality_check(sd).residual;
    EXPECT_TRUE(eigenpair_check(sys, sd).pass) << eigenpair_check(sys, sd).residual;
    EXPECT_TRUE(singular_value_check(sys, sd).pass);
    EXPECT_TRUE(std::is_sorted(sd.lambda_numeric.begin(), sd.lambda_numeric.end()));
  }
}

TEST(Eigendecompose, SignConvention) {
  testing::Gen g(37);
  const SpectralData sd = eigendecompose(assemble(testing::random_chain(g, 6)));
  for (std::size_t j = 0; j < sd.Psi.cols(); ++j) {
    const std::vector<double> psi = sd.Psi.column(j);
    const auto big = std::max_element(psi.begin(), psi.end(),
                                      [](double x, double y) { return std::abs(x) < std::abs(y); });
    EXPECT_GT(*big, 0.0);
  }
}

TEST(Eigendecompose, XxChainMatchesAbsEigenvaluesOfA) {
  testing::Gen g(41);
  for (int t = 0; t < 30; ++t) {
    const ChainSpec c = testing::random_xx_chain(g, g.integer(1, 10));
    const FreeFermionSystem sys = assemble(c);
    std::vector<double> abs_a = jacobi_eigh(sys.A).values;
    for (double& v : abs_a) v = std::abs(v);
    std::sort(abs_a.begin(), abs_a.end());
    EXPECT_LE(relative_spectrum_gap(abs_a, eigendecompose(sys).lambda_numeric), 1e-8);
  }
}

TEST(Eigendecompose, ZeroModeSplitting) {
  // alpha = gamma on the only bond: A - B and A + B are both singular.
  const ChainSpec c = ChainSpec::from_couplings({1.0}, {0.0, 0.0}, {1.0});
  const FreeFermionSystem sys = assemble(c);
  const SpectralData sd = eigendecompose(sys);
  EXPECT_EQ(sd.zero_modes, 1);
  EXPECT_NEAR(sd.lambda_numeric[1], 2.0, 1e-14);
  EXPECT_TRUE(orthogonality_check(sd).pass);
  EXPECT_TRUE(eigenpair_check(sys, sd).pass);
}

TEST(SpectrumGap, Floor) {
  EXPECT_EQ(relative_spectrum_gap({0.0, 1.0}, {0.0, 1.0}), 0.0);
  // 1e-9 against the floor 1e-6 * 1 gives 1e-3
  EXPECT_NEAR(relative_spectrum_gap({0.0, 1.0}, {1e-9, 1.0}), 1e-3, 1e-15);
  EXPECT_THROW(relative_spectrum_gap({1.0}, {1.0, 2.0}), DomainError);
}

TEST(MatchSpectra, Collision) {
  const SpectrumMatch ok = match_spectra({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  EXPECT_FALSE(ok.collision);
  EXPECT_EQ(ok.numeric_index, (std::vector<int>{0, 1, 2}));
  const SpectrumMatch bad = match_spectra({1.0, 1.01, 3.0}, {1.0, 2.0, 3.0});
  EXPECT_TRUE(bad.collision);
  EXPECT_GT(bad.worst_gap, 0.1);
}

TEST(ManyBody, Trivial) {
  const ManyBodySpectrum one = many_body_spectrum({2.0});
  ASSERT_EQ(one.levels.size(), 2u);
  EXPECT_EQ(one.levels[0].mask, 0u);
  EXPECT_EQ(one.levels[0].energy, -2.0);
  EXPECT_EQ(one.levels[1].mask, 1u);
  EXPECT_EQ(one.levels[1].energy, 2.0);
  EXPECT_THROW(many_body_spectrum({}), DomainError);
}

TEST(ManyBody, TiesOrderedByMask) {
  const ManyBodySpectrum mb = many_body_spectrum({1.0, 1.0});
  ASSERT_EQ(mb.levels.size(), 4u);
  EXPECT_EQ(mb.levels[1].mask, 1u);
  EXPECT_EQ(mb.levels[2].mask, 2u);
}

TEST(ManyBody, ComplementSymmetryAndEnds) {
  testing::Gen g(43);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> lambda = g.uniform_vector(g.integer(1, 10), 0, 3);
    const ManyBodySpectrum mb = many_body_spectrum(lambda);
    const std::size_t n = mb.levels.size();
    ASSERT_EQ(n, std::size_t{1} << lambda.size());
    double total = 0.0;
    for (double l : lambda) total += l;
    EXPECT_NEAR(mb.levels.front().energy, -total, 1e-12);
    EXPECT_NEAR(mb.levels.back().energy, total, 1e-12);
    for (std::size_t k = 0; k < n; ++k)
      EXPECT_NEAR(mb.levels[k].energy, -mb.levels[n - 1 - k].energy, 1e-12);
  }
}

TEST(ManyBody, SizeCap) {
  EXPECT_THROW(many_body_spectrum(std::vector<double>(kManyBodyMaxSites + 1, 1.0)),
               SizeCapExceeded);
}

TEST(Crosscheck, AnalyticEigenvectorsAgree) {
  for (ContiguityFamily f : kFamilies) {
    for (int N : {2, 4, 7}) {
      for (const QRacahParams& p : testing::valid_draws(f, N, 0.5, 4)) {
        const SpectralData sd = eigendecompose(assemble(build_chain(f, p)));
        const EigenvectorCrosscheck ev = eigenvector_crosscheck(sd, build_pq_table(f, p));
        EXPECT_TRUE(ev.cosine.pass) << ev.cosine.residual << " " << ev.cosine.detail;
        EXPECT_TRUE(ev.subspace.pass) << ev.subspace.residual << " " << ev.subspace.detail;
        const AnalyticSpectrum an = analytic_spectrum(f, p);
        EXPECT_LE(relative_spectrum_gap(an.lambda, sd.lambda_numeric), 1e-8);
      }
    }
  }
}

TEST(Crosscheck, WrongTableFails) {
  const auto& d4 = testing::valid_draws(ContiguityFamily::QR_II_IV, 4, 0.5, 2);
  ASSERT_GE(d4.size(), 2u);
  const SpectralData sd = eigendecompose(assemble(build_chain(ContiguityFamily::QR_II_IV, d4[0])));
  const EigenvectorCrosscheck ev =
      eigenvector_crosscheck(sd, build_pq_table(ContiguityFamily::QR_II_IV, d4[1]));
  EXPECT_FALSE(ev.cosine.pass && ev.subspace.pass);
}

}  // namespace
}  // namespace xychain
