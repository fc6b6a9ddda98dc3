#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "xychain/chain.hpp"
#include "xychain/qracah.hpp"

namespace xychain::app {

/// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double contiguity = 1e-9;
  double constraint = 1e-10;
  double cross_route = 1e-12;
  double spectrum = 1e-8;  // analytic vs numeric, singular values, Jordan-Wigner
  double parity = 1e-10;
  double orthogonality = 1e-8;
  double eigenpair = 1e-8;
  double recurrence = 1e-8;
  double cosine = 1e-8;
  double angle = 1e-6;
};

enum class Mode { QR13, QR24, Explicit };

struct Reference {
  ContiguityFamily family = ContiguityFamily::QR_I_III;
  QRacahParams params;
};

struct ScanConfig {
  std::vector<int> N;
  int samples = 1000;
  std::size_t max_results = 0;
  ParamBox box;
};

struct RunConfig {
  Mode mode = Mode::Explicit;
  int N = 0;
  std::optional<QRacahParams> params;  // q-Racah modes
  std::optional<ChainSpec> couplings;  // explicit mode
  /// Explicit mode: the q-Racah draw the couplings are supposed to realize;
  /// enables the analytic comparisons in `verify` and `spectrum`.
  std::optional<Reference> reference;
  std::optional<ScanConfig> scan;
  std::uint64_t seed = 0;
  Tolerances tol;

  /// Effective configuration, overrides applied; hashed into output headers.
  nlohmann::json canonical;

  std::optional<ContiguityFamily> family() const;
};

struct Overrides {
  std::optional<std::string> family;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// Reads JSON from `path`. Syntax errors report line and column; field errors
/// name the offending key. Relative coupling CSV paths resolve against the
/// config's directory.
RunConfig load_config(const std::string& path, const Overrides& overrides = {});
RunConfig parse_config(const std::string& text, const Overrides& overrides = {},
                       const std::string& base_dir = ".");

/// Reads the j, alpha, beta, gamma columns written by chain-coeffs.
ChainSpec read_couplings_csv(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const RunConfig& config);

}  // namespace xychain::app
