#include "xychain/spinoracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xychain/error.hpp"
#include "xychain/freefermion.hpp"

namespace xychain {

namespace {

const Matrix kIdentity2{{1.0, 0.0}, {0.0, 1.0}};
const Matrix kSigmaX{{0.0, 1.0}, {1.0, 0.0}};
const Matrix kSigmaZ{{1.0, 0.0}, {0.0, -1.0}};
const Matrix kJ{{0.0, 1.0}, {-1.0, 0.0}};  // i sigma^y

// I^{(left)} (x) op (x) I^{(right)} with op covering one or two sites.
Matrix embed(const Matrix& op, int left, int right) {
  Matrix m = Matrix::identity(std::size_t{1} << left);
  m = kron(m, op);
  return kron(m, Matrix::identity(std::size_t{1} << right));
}

}  // namespace

DenseSpinHamiltonian build_spin_hamiltonian(const ChainSpec& chain) {
  chain.validate();
  if (chain.N > kSpinOracleMaxN) {
    std::ostringstream s;
    s << "spin oracle: N=" << chain.N << " exceeds the size cap N<=" << kSpinOracleMaxN;
    throw SizeCapExceeded(s.str());
  }
  const int sites = chain.N + 1;
  const std::size_t dim = std::size_t{1} << sites;
  DenseSpinHamiltonian h;
  h.N = chain.N;
  h.matrix = Matrix(dim, dim);

  const Matrix xx = kron(kSigmaX, kSigmaX);
  const Matrix yy = -1.0 * kron(kJ, kJ);
  for (int j = 0; j + 1 < sites; ++j) {
    const double cx = chain.alpha[j] + chain.gamma[j];
    const double cy = chain.alpha[j] - chain.gamma[j];
    h.matrix = h.matrix + embed(cx * xx + cy * yy, j, sites - j - 2);
  }
  for (int j = 0; j < sites; ++j)
    h.matrix = h.matrix - embed(chain.beta[j] * kSigmaZ, j, sites - j - 1);
  return h;
}

std::vector<double> oracle_spectrum(const DenseSpinHamiltonian& h) {
  if (h.N > kSpinOracleMaxN) throw SizeCapExceeded("spin oracle: matrix exceeds the size cap");
  return jacobi_eigh(h.matrix).values;
}

CheckReport jw_certify(const ChainSpec& chain, double tolerance) {
  const char* name = "Jordan-Wigner: spin oracle vs free-fermion many-body spectrum";
  if (chain.N > kSpinOracleMaxN) {
    std::ostringstream s;
    s << "size cap: N=" << chain.N << " > " << kSpinOracleMaxN;
    return skipped_check(name, s.str());
  }
  const std::vector<double> oracle = oracle_spectrum(build_spin_hamiltonian(chain));
  const SpectralData spectral = eigendecompose(assemble(chain));
  const ManyBodySpectrum mb = many_body_spectrum(spectral.lambda_numeric);

  double scale = 0.0;
  for (double e : oracle) scale = std::max(scale, std::abs(e));
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const double d = std::abs(oracle[i] - mb.levels[i].energy);
    if (d > worst) {
      worst = d;
      at = i;
    }
  }
  std::ostringstream detail;
  detail.precision(17);
  detail << "worst pair #" << at << ": oracle " << oracle[at] << " vs free-fermion "
         << mb.levels[at].energy;
  return make_check(name, scale > 0.0 ? worst / scale : worst, tolerance, detail.str());
}

}  // namespace xychain
