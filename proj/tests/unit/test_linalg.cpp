#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "xychain/error.hpp"
#include "xychain/linalg.hpp"

namespace xychain {
namespace {

Matrix random_symmetric(testing::Gen& g, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = g.uniform(-1, 1);
  return m;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

TEST(Matrix, BasicAlgebra) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix b{{0, 1}, {1, 0}};
  EXPECT_EQ(a * b, (Matrix{{2, 1}, {4, 3}}));
  EXPECT_EQ(a + b, (Matrix{{1, 3}, {4, 4}}));
  EXPECT_EQ(a - b, (Matrix{{1, 1}, {2, 4}}));
  EXPECT_EQ(a.transpose(), (Matrix{{1, 3}, {2, 4}}));
  EXPECT_EQ(2.0 * a, (Matrix{{2, 4}, {6, 8}}));
  const std::vector<double> v{1, 1};
  EXPECT_EQ(a * std::span<const double>(v), (std::vector<double>{3, 7}));
  EXPECT_DOUBLE_EQ(a.frobenius_norm(), std::sqrt(30.0));
  EXPECT_EQ(a.max_abs(), 4.0);
}

TEST(Matrix, Blocks) {
  Matrix m(4, 4);
  m.set_block(1, 2, Matrix{{5, 6}, {7, 8}});
  EXPECT_EQ(m.block(1, 2, 2, 2), (Matrix{{5, 6}, {7, 8}}));
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_THROW(m.block(3, 3, 2, 2), DomainError);
}

TEST(Matrix, Kron) {
  const Matrix x{{0, 1}, {1, 0}};
  const Matrix z{{1, 0}, {0, -1}};
  EXPECT_EQ(kron(z, x), (Matrix{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, -1, 0}}));
}

TEST(Norm2, AvoidsOverflow) {
  const std::vector<double> v{3e200, 4e200};
  EXPECT_DOUBLE_EQ(norm2(v), 5e200);
}

TEST(JacobiEigh, DiagonalInputIsSorted) {
  const Matrix d{{3, 0, 0}, {0, -1, 0}, {0, 0, 2}};
  const SymmetricEigen e = jacobi_eigh(d);
  EXPECT_EQ(e.values, (std::vector<double>{-1, 2, 3}));
  EXPECT_EQ(e.sweeps, 0);
}

TEST(JacobiEigh, RejectsNonSymmetric) {
  EXPECT_THROW(jacobi_eigh(Matrix{{1, 2}, {3, 4}}), DomainError);
  EXPECT_THROW(jacobi_eigh(Matrix(2, 3)), DomainError);
}

TEST(JacobiEigh, SweepCapRaises) {
  testing::Gen g(3);
  EigenOptions opts;
  opts.max_sweeps = 1;
  EXPECT_THROW(jacobi_eigh(random_symmetric(g, 12), opts), ConvergenceFailure);
}

TEST(JacobiEigh, MatchesEigenOnRandomMatrices) {
  testing::Gen g(17);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 24));
    const Matrix a = random_symmetric(g, n);
    const SymmetricEigen mine = jacobi_eigh(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(a));
    for (std::size_t k = 0; k < n; ++k)
      EXPECT_NEAR(mine.values[k], ref.eigenvalues()(static_cast<Eigen::Index>(k)), 1e-12);
    // A V = V diag(values), V orthogonal
    const Matrix av = a * mine.vectors;
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        resid = std::max(resid, std::abs(av(i, k) - mine.vectors(i, k) * mine.values[k]));
    // stopping rule: max |offdiag| <= 1e-12 ||A||_F
    EXPECT_LT(resid, 1e-12 * a.frobenius_norm() * std::sqrt(static_cast<double>(n)));
    const Matrix g2 = mine.vectors.transpose() * mine.vectors - Matrix::identity(n);
    EXPECT_LT(g2.max_abs(), 1e-13);
    EXPECT_LE(mine.final_offdiag, 1e-12 * a.frobenius_norm());
  }
}

TEST(JacobiSvd, MatchesEigenOnRandomMatrices) {
  testing::Gen g(23);
  for (int t = 0; t < 40; ++t) {
    const auto rows = static_cast<std::size_t>(g.integer(1, 12));
    const auto cols = static_cast<std::size_t>(g.integer(1, 12));
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = g.uniform(-2, 2);
    const ThinSvd mine = jacobi_svd(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(to_eigen(a));
    ASSERT_EQ(mine.S.size(), std::min(rows, cols));
    for (std::size_t k = 0; k < mine.S.size(); ++k)
      EXPECT_NEAR(mine.S[k], ref.singularValues()(static_cast<Eigen::Index>(k)), 1e-12);
    Matrix us = mine.U;
    for (std::size_t i = 0; i < us.rows(); ++i)
      for (std::size_t k = 0; k < us.cols(); ++k) us(i, k) *= mine.S[k];
    EXPECT_LT((us * mine.V.transpose() - a).max_abs(), 1e-12);
  }
}

TEST(Subspaces, PrincipalAngle) {
  // span(e1) vs span(cos t e1 + sin t e2)
  const double t = 0.3;
  const Matrix a{{1}, {0}, {0}};
  const Matrix b{{std::cos(t)}, {std::sin(t)}, {0}};
  EXPECT_NEAR(max_principal_angle_sin(a, b), std::sin(t), 1e-15);
  EXPECT_NEAR(max_principal_angle_sin(a, a), 0.0, 1e-15);
  const Matrix e3{{0}, {0}, {1}};
  EXPECT_NEAR(max_principal_angle_sin(e3, a), 1.0, 1e-15);
}

TEST(Subspaces, DominantBasisSpansColumns) {
  const Matrix cols{{1, 2, 3}, {0, 0, 0}, {1, 2, 3.0000000001}};
  const Matrix basis = dominant_basis(cols, 1);
  const Matrix ref{{1 / std::sqrt(2.0)}, {0}, {1 / std::sqrt(2.0)}};
  EXPECT_LT(max_principal_angle_sin(basis, ref), 1e-9);
  EXPECT_THROW(dominant_basis(cols, 4), DomainError);
}

}  // namespace
}  // namespace xychain
