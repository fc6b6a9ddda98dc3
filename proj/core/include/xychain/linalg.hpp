#pragma once

// Small dense real linear algebra: just enough for matrices of a few hundred
// rows. Row-major storage, value semantics.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace xychain {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_columns(std::span<const std::vector<double>> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  /// Block [r0, r0+nr) x [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& src);

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;

  friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
  friend Matrix operator+(const Matrix& lhs, const Matrix& rhs);
  friend Matrix operator-(const Matrix& lhs, const Matrix& rhs);
  friend Matrix operator*(double s, const Matrix& m);
  friend std::vector<double> operator*(const Matrix& m, std::span<const double> v);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix kron(const Matrix& lhs, const Matrix& rhs);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

struct EigenOptions {
  /// Terminate once max |offdiag| <= tolerance * ||A||_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Eigenvalues ascending; eigenvectors stored as the matching columns.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
  double final_offdiag = 0.0;
};

/// Cyclic Jacobi rotations on a real symmetric matrix. Throws
/// ConvergenceFailure if the off-diagonal tolerance is not reached within
/// max_sweeps, DomainError if the input is not square and symmetric.
SymmetricEigen jacobi_eigh(const Matrix& a, const EigenOptions& options = {});

/// Thin SVD a = U diag(S) V^T from one-sided (Hestenes) Jacobi, which
/// orthogonalizes the columns of a and so diagonalizes a^T a implicitly.
/// Singular values descending; U is rows x k, V is cols x k with k = min(rows, cols).
struct ThinSvd {
  Matrix U;
  std::vector<double> S;
  Matrix V;
};

struct SvdOptions {
  /// Columns p, q count as orthogonal once |w_p . w_q| <= tolerance * |w_p| |w_q|.
  double tolerance = 1e-15;
  int max_sweeps = 60;
};

ThinSvd jacobi_svd(const Matrix& a, const SvdOptions& options = {});

/// Orthonormal basis for the dominant rank-`rank` column space of `columns`.
Matrix dominant_basis(const Matrix& columns, std::size_t rank);

/// sin of the largest principal angle between span(basis) and span(reference),
/// both given with orthonormal columns. Bounded above by 1.
double max_principal_angle_sin(const Matrix& basis, const Matrix& reference);

}  // namespace xychain
