#include "xychain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xychain/error.hpp"

namespace xychain {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DomainError("Matrix: ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(std::span<const std::vector<double>> columns) {
  if (columns.empty()) return {};
  Matrix m(columns.front().size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
  if (values.size() != rows_) throw DomainError("Matrix::set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DomainError("Matrix::block: out of range");
  Matrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
  if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_)
    throw DomainError("Matrix::set_block: out of range");
  for (std::size_t r = 0; r < src.rows_; ++r)
    for (std::size_t c = 0; c < src.cols_; ++c) (*this)(r0 + r, c0 + c) = src(r, c);
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius_norm() const noexcept { return norm2(data_); }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols_ != rhs.rows_) throw DomainError("Matrix product: shape mismatch");
  Matrix out(lhs.rows_, rhs.cols_);
  for (std::size_t i = 0; i < lhs.rows_; ++i)
    for (std::size_t k = 0; k < lhs.cols_; ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

Matrix operator+(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows_ != rhs.rows_ || lhs.cols_ != rhs.cols_)
    throw DomainError("Matrix sum: shape mismatch");
  Matrix out = lhs;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

Matrix operator-(const Matrix& lhs, const Matrix& rhs) { return lhs + (-1.0) * rhs; }

Matrix operator*(double s, const Matrix& m) {
  Matrix out = m;
  for (double& v : out.data_) v *= s;
  return out;
}

std::vector<double> operator*(const Matrix& m, std::span<const double> v) {
  if (m.cols_ != v.size()) throw DomainError("Matrix-vector product: shape mismatch");
  std::vector<double> out(m.rows_, 0.0);
  for (std::size_t r = 0; r < m.rows_; ++r) out[r] = dot(m.row(r), v);
  return out;
}

Matrix kron(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      const double a = lhs(i, j);
      if (a == 0.0) continue;
      for (std::size_t k = 0; k < rhs.rows(); ++k)
        for (std::size_t l = 0; l < rhs.cols(); ++l)
          out(i * rhs.rows() + k, j * rhs.cols() + l) = a * rhs(k, l);
    }
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) {
  // Scaled to avoid overflow for the large couplings the q-Racah scans produce.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

namespace {

// tan of the rotation angle that annihilates the (p, q) entry.
double rotation_tangent(double theta) {
  if (std::abs(theta) > 1e150) return 0.5 / theta;
  const double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  return theta < 0.0 ? -t : t;
}

double max_offdiag(const Matrix& a) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) m = std::max(m, std::abs(a(p, q)));
  return m;
}

}  // namespace

SymmetricEigen jacobi_eigh(const Matrix& input, const EigenOptions& options) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw DomainError("jacobi_eigh: matrix is not square");
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q)
      if (input(p, q) != input(q, p)) throw DomainError("jacobi_eigh: matrix is not symmetric");

  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double norm = a.frobenius_norm();
  if (!std::isfinite(norm)) throw DomainError("jacobi_eigh: non-finite entries");
  const double target = options.tolerance * norm;
  const double skip = 1e-3 * target;

  SymmetricEigen result;
  double off = max_offdiag(a);
  while (off > target) {
    if (result.sweeps == options.max_sweeps) {
      throw ConvergenceFailure("jacobi_eigh: off-diagonal " + std::to_string(off) +
                               " above tolerance after " + std::to_string(options.max_sweeps) +
                               " sweeps");
    }
    ++result.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= skip) continue;
        const double t = rotation_tangent((a(q, q) - a(p, p)) / (2.0 * apq));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a(p, p) - t * apq;
        const double aqq = a(q, q) + t * apq;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = rp[k];
          const double aqk = rq[k];
          rp[k] = c * apk - s * aqk;
          rq[k] = s * apk + c * aqk;
        }
        a(p, p) = app;
        a(q, q) = aqq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    off = max_offdiag(a);
  }
  result.final_offdiag = off;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  result.values.resize(n);
  result.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) result.vectors(r, k) = v(r, order[k]);
  }
  return result;
}

namespace {

ThinSvd tall_svd(const Matrix& a, const SvdOptions& options) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::vector<double>> w(n), v(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = a.column(j);
    v[j][j] = 1.0;
  }

  auto rotate = [](std::vector<double>& x, std::vector<double>& y, double c, double s) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double xk = x[k];
      const double yk = y[k];
      x[k] = c * xk - s * yk;
      y[k] = s * xk + c * yk;
    }
  };

  int sweep = 0;
  for (;; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(w[p], w[p]);
        const double beta = dot(w[q], w[q]);
        const double gamma = dot(w[p], w[q]);
        if (gamma == 0.0 || std::abs(gamma) <= options.tolerance * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double t = rotation_tangent((beta - alpha) / (2.0 * gamma));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        rotate(w[p], w[q], c, s);
        rotate(v[p], v[q], c, s);
      }
    }
    if (!rotated) break;
    if (sweep + 1 == options.max_sweeps)
      throw ConvergenceFailure("jacobi_svd: no convergence after " +
                               std::to_string(options.max_sweeps) + " sweeps");
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(w[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  ThinSvd out{Matrix(m, n), std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.S[k] = sigma[j];
    for (std::size_t r = 0; r < m; ++r) out.U(r, k) = sigma[j] > 0.0 ? w[j][r] / sigma[j] : 0.0;
    for (std::size_t r = 0; r < n; ++r) out.V(r, k) = v[j][r];
  }
  return out;
}

}  // namespace

ThinSvd jacobi_svd(const Matrix& a, const SvdOptions& options) {
  if (a.rows() >= a.cols()) return tall_svd(a, options);
  ThinSvd t = tall_svd(a.transpose(), options);
  return {std::move(t.V), std::move(t.S), std::move(t.U)};
}

Matrix dominant_basis(const Matrix& columns, std::size_t rank) {
  if (rank > std::min(columns.rows(), columns.cols()))
    throw DomainError("dominant_basis: rank exceeds matrix dimensions");
  const ThinSvd svd = jacobi_svd(columns);
  return svd.U.block(0, 0, columns.rows(), rank);
}

double max_principal_angle_sin(const Matrix& basis, const Matrix& reference) {
  if (basis.cols() == 0) return 0.0;
  const Matrix residual = basis - reference * (reference.transpose() * basis);
  const ThinSvd svd = jacobi_svd(residual);
  return std::min(1.0, svd.S.front());
}

}  // namespace xychain
