#include "xychain/freefermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "xychain/error.hpp"

namespace xychain {

FreeFermionSystem assemble(const ChainSpec& chain) {
  chain.validate();
  const auto n = static_cast<std::size_t>(chain.N + 1);
  FreeFermionSystem sys;
  sys.N = chain.N;
  sys.A = Matrix(n, n);
  sys.B = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) sys.A(j, j) = chain.beta[j];
  for (std::size_t j = 0; j + 1 < n; ++j) {
    sys.A(j, j + 1) = sys.A(j + 1, j) = chain.alpha[j];
    sys.B(j, j + 1) = chain.gamma[j];
    sys.B(j + 1, j) = -chain.gamma[j];
  }
  sys.H = Matrix(2 * n, 2 * n);
  sys.H.set_block(0, 0, sys.A);
  sys.H.set_block(0, n, sys.B);
  sys.H.set_block(n, 0, -1.0 * sys.B);
  sys.H.set_block(n, n, -1.0 * sys.A);
  return sys;
}

namespace {

// Index of the largest |entry|, lowest index on ties; -1 for a zero vector.
int leading_index(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  if (best == 0.0) return -1;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (std::abs(v[k]) >= best * (1.0 - 1e-12)) return static_cast<int>(k);
  return -1;
}

void fix_sign(std::vector<double>& psi, std::vector<double>& phi) {
  int k = leading_index(psi);
  const std::vector<double>& ref = k >= 0 ? psi : phi;
  if (k < 0) k = leading_index(phi);
  if (k >= 0 && ref[k] < 0.0) {
    for (double& x : psi) x = -x;
    for (double& x : phi) x = -x;
  }
}

}  // namespace

SpectralData eigendecompose(const FreeFermionSystem& sys, const DecomposeOptions& options) {
  const std::size_t n = sys.A.rows();
  const SymmetricEigen eig = jacobi_eigh(sys.H, options.eigen);
  const double zero_tol = options.zero_tolerance * sys.H.frobenius_norm();

  SpectralData out;
  out.h_eigenvalues = eig.values;
  out.sweeps = eig.sweeps;
  out.final_offdiag = eig.final_offdiag;

  std::size_t z = 0;
  while (z < n && eig.values[n + z] <= zero_tol) ++z;
  out.zero_modes = static_cast<int>(z);

  std::vector<std::vector<double>> psi(n), phi(n);
  out.lambda_numeric.resize(n);

  if (z > 0) {
    // P = x - y spans null(A - B), Q = x + y spans null(A + B).
    Matrix p_cols(n, 2 * z), q_cols(n, 2 * z);
    for (std::size_t m = 0; m < 2 * z; ++m) {
      const std::size_t col = n - z + m;
      for (std::size_t r = 0; r < n; ++r) {
        p_cols(r, m) = eig.vectors(r, col) - eig.vectors(r + n, col);
        q_cols(r, m) = eig.vectors(r, col) + eig.vectors(r + n, col);
      }
    }
    const Matrix u = dominant_basis(p_cols, z);
    Matrix v = dominant_basis(q_cols, z);
    // Rotate v onto u (orthogonal Procrustes): maximizes tr(u^T v), i.e. minimizes ||v - u||.
    const ThinSvd align = jacobi_svd(v.transpose() * u);
    v = v * (align.U * align.V.transpose());
    for (std::size_t k = 0; k < z; ++k) {
      psi[k].resize(n);
      phi[k].resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        psi[k][r] = 0.5 * (u(r, k) + v(r, k));
        phi[k][r] = 0.5 * (v(r, k) - u(r, k));
      }
      out.lambda_numeric[k] = std::abs(eig.values[n + k]);
    }
  }
  for (std::size_t k = z; k < n; ++k) {
    const std::size_t col = n + k;
    psi[k].resize(n);
    phi[k].resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      psi[k][r] = eig.vectors(r, col);
      phi[k][r] = eig.vectors(r + n, col);
    }
    out.lambda_numeric[k] = eig.values[col];
  }

  out.Psi = Matrix(n, n);
  out.Phi = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    // Unit length of [psi; phi].
    const double len = std::hypot(norm2(psi[k]), norm2(phi[k]));
    for (std::size_t r = 0; r < n; ++r) {
      psi[k][r] /= len;
      phi[k][r] /= len;
    }
    fix_sign(psi[k], phi[k]);
    out.Psi.set_column(k, psi[k]);
    out.Phi.set_column(k, phi[k]);
  }
  out.T = Matrix(2 * n, 2 * n);
  out.T.set_block(0, 0, out.Psi);
  out.T.set_block(0, n, out.Phi);
  out.T.set_block(n, 0, out.Phi);
  out.T.set_block(n, n, out.Psi);
  return out;
}

double relative_spectrum_gap(std::vector<double> a, std::vector<double> b, double floor) {
  if (a.size() != b.size()) throw DomainError("relative_spectrum_gap: size mismatch");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double top = 0.0;
  for (double x : a) top = std::max(top, std::abs(x));
  for (double x : b) top = std::max(top, std::abs(x));
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double scale = std::max({std::abs(a[j]), std::abs(b[j]), floor * top});
    if (scale == 0.0) continue;
    double r = std::abs(a[j] - b[j]) / scale;
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    worst = std::max(worst, r);
  }
  return worst;
}

std::vector<double> singular_values(const FreeFermionSystem& sys) {
  std::vector<double> s = jacobi_svd(sys.A + sys.B).S;
  std::sort(s.begin(), s.end());
  return s;
}

CheckReport singular_value_check(const FreeFermionSystem& sys, const SpectralData& spectral,
                                 double tolerance) {
  const std::vector<double> s = singular_values(sys);
  return make_check("singular values of A+B vs numeric Lambda",
                    relative_spectrum_gap(s, spectral.lambda_numeric), tolerance);
}

CheckReport spectrum_parity_check(const SpectralData& spectral, double tolerance) {
  const auto& e = spectral.h_eigenvalues;
  double top = 0.0;
  for (double x : e) top = std::max(top, std::abs(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    worst = std::max(worst, std::abs(e[i] + e[e.size() - 1 - i]));
  return make_check("spectrum of H symmetric about 0", top > 0.0 ? worst / top : 0.0, tolerance);
}

CheckReport orthogonality_check(const SpectralData& spectral, double tolerance) {
  const Matrix g = spectral.T.transpose() * spectral.T - Matrix::identity(spectral.T.rows());
  return make_check("T^T T = I", g.max_abs(), tolerance);
}

CheckReport eigenpair_check(const FreeFermionSystem& sys, const SpectralData& spectral,
                            double tolerance) {
  const std::size_t n = sys.A.rows();
  const double norm = sys.H.frobenius_norm();
  double worst = 0.0;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const std::vector<double> t = spectral.T.column(k);
    const double lam = k < n ? spectral.lambda_numeric[k] : -spectral.lambda_numeric[k - n];
    std::vector<double> r = sys.H * std::span<const double>(t);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lam * t[i];
    worst = std::max(worst, norm2(r));
  }
  return make_check("H T = T diag(Lambda, -Lambda)", norm > 0.0 ? worst / norm : worst, tolerance);
}

ManyBodySpectrum many_body_spectrum(const std::vector<double>& lambda) {
  if (lambda.empty()) throw DomainError("many_body_spectrum: no modes");
  if (lambda.size() > static_cast<std::size_t>(kManyBodyMaxSites)) {
    std::ostringstream s;
    s << "many_body_spectrum: " << lambda.size() << " modes exceed the cap of "
      << kManyBodyMaxSites;
    throw SizeCapExceeded(s.str());
  }
  const std::size_t count = std::size_t{1} << lambda.size();
  const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  ManyBodySpectrum out;
  out.levels.resize(count);
  out.levels[0] = {0, -total};
  for (std::size_t mask = 1; mask < count; ++mask) {
    const std::size_t low = mask & (~mask + 1);
    const int bit = std::countr_zero(low);
    out.levels[mask] = {static_cast<std::uint32_t>(mask),
                        out.levels[mask ^ low].energy + 2.0 * lambda[bit]};
  }
  std::sort(out.levels.begin(), out.levels.end(), [](const auto& x, const auto& y) {
    return x.energy != y.energy ? x.energy < y.energy : x.mask < y.mask;
  });
  return out;
}

SpectrumMatch match_spectra(const std::vector<double>& analytic,
                            const std::vector<double>& numeric) {
  if (analytic.size() != numeric.size()) throw DomainError("match_spectra: size mismatch");
  const std::size_t n = analytic.size();
  double top = 0.0;
  for (double x : analytic) top = std::max(top, std::abs(x));
  for (double x : numeric) top = std::max(top, std::abs(x));

  SpectrumMatch out;
  out.numeric_index.assign(n, -1);
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t nearest = 0;
    std::size_t nearest_free = n;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = std::abs(numeric[k] - analytic[j]);
      if (d < std::abs(numeric[nearest] - analytic[j])) nearest = k;
      if (!used[k] && (nearest_free == n || d < std::abs(numeric[nearest_free] - analytic[j])))
        nearest_free = k;
    }
    if (used[nearest] &&
        std::abs(numeric[nearest] - analytic[j]) < std::abs(numeric[nearest_free] - analytic[j]))
      out.collision = true;
    used[nearest_free] = true;
    out.numeric_index[j] = static_cast<int>(nearest_free);
    const double scale =
        std::max({std::abs(analytic[j]), std::abs(numeric[nearest_free]), 1e-6 * top});
    if (scale > 0.0)
      out.worst_gap =
          std::max(out.worst_gap, std::abs(analytic[j] - numeric[nearest_free]) / scale);
  }
  return out;
}

namespace {

double abs_cosine(std::span<const double> x, std::span<const double> y) {
  const double nx = norm2(x);
  const double ny = norm2(y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return std::min(1.0, std::abs(dot(x, y)) / (nx * ny));
}

// Orthonormal basis of span(columns), dropping columns that are exactly zero.
Matrix span_basis(const std::vector<std::vector<double>>& columns) {
  std::vector<std::vector<double>> kept;
  for (const auto& c : columns)
    if (norm2(c) > 0.0) kept.push_back(c);
  if (kept.empty()) return {};
  const Matrix m = Matrix::from_columns(kept);
  return dominant_basis(m, kept.size());
}

}  // namespace

EigenvectorCrosscheck eigenvector_crosscheck(const SpectralData& spectral, const PQTable& pq,
                                             double cosine_tolerance, double angle_tolerance,
                                             double cluster_tolerance) {
  const std::size_t n = spectral.lambda_numeric.size();
  if (pq.lambda.size() != n) throw DomainError("eigenvector_crosscheck: size mismatch");
  const SpectrumMatch match = match_spectra(pq.lambda, spectral.lambda_numeric);

  double top = 0.0;
  for (double x : pq.lambda) top = std::max(top, x);
  const double gap_floor = cluster_tolerance * top;
  const double zero_floor = cluster_tolerance * top;

  // Analytic indices ordered by value; consecutive ones closer than gap_floor share a cluster.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pq.lambda[i] < pq.lambda[j]; });

  auto numeric_pq = [&](std::size_t k, bool p) {
    std::vector<double> v(n);
    for (std::size_t r = 0; r < n; ++r)
      v[r] = p ? spectral.Psi(r, k) - spectral.Phi(r, k) : spectral.Psi(r, k) + spectral.Phi(r, k);
    return v;
  };

  double worst_cos = 0.0, worst_sin = 0.0;
  int cos_count = 0, sub_count = 0;
  std::ostringstream detail_cos, detail_sub;
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s + 1;
    while (e < n && pq.lambda[order[e]] - pq.lambda[order[e - 1]] <= gap_floor) ++e;
    const bool zero = pq.lambda[order[s]] <= zero_floor;
    if (e - s == 1 && !zero) {
      const std::size_t j = order[s];
      const auto k = static_cast<std::size_t>(match.numeric_index[j]);
      for (bool p : {true, false}) {
        const double c = abs_cosine(numeric_pq(k, p), p ? pq.P.column(j) : pq.Q.column(j));
        if (1.0 - c > worst_cos) {
          worst_cos = 1.0 - c;
          detail_cos.str("");
          detail_cos << "worst at j=" << j << " (" << (p ? "P" : "Q") << ")";
        }
      }
      ++cos_count;
    } else {
      for (bool p : {true, false}) {
        std::vector<std::vector<double>> analytic_cols, numeric_cols;
        for (std::size_t m = s; m < e; ++m) {
          const std::size_t j = order[m];
          analytic_cols.push_back(p ? pq.P.column(j) : pq.Q.column(j));
          numeric_cols.push_back(numeric_pq(static_cast<std::size_t>(match.numeric_index[j]), p));
        }
        const Matrix a = span_basis(analytic_cols);
        const Matrix b = span_basis(numeric_cols);
        if (a.empty()) continue;
        const double sin = b.empty() ? 1.0 : max_principal_angle_sin(a, b);
        if (sin > worst_sin) {
          worst_sin = sin;
          detail_sub.str("");
          detail_sub << "worst cluster at Lambda=" << pq.lambda[order[s]] << " size " << e - s
                     << " (" << (p ? "P" : "Q") << ")";
        }
      }
      ++sub_count;
    }
    s = e;
  }

  EigenvectorCrosscheck out;
  out.cosine = cos_count > 0
                   ? make_check("eigenvector cosine (nondegenerate modes)", worst_cos,
                                cosine_tolerance, detail_cos.str())
                   : skipped_check("eigenvector cosine (nondegenerate modes)",
                                   "no nondegenerate nonzero modes");
  out.subspace = sub_count > 0
                     ? make_check("eigenvector subspace angle (degenerate/zero modes)", worst_sin,
                                  angle_tolerance, detail_sub.str())
                     : skipped_check("eigenvector subspace angle (degenerate/zero modes)",
                                     "no degenerate or zero modes");
  if (match.collision) {
    out.cosine.pass = false;
    out.cosine.detail += " spectrum matching collided";
  }
  return out;
}

}  // namespace xychain
