#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csv.hpp"
#include "xychain/error.hpp"
#include "xychain/freefermion.hpp"
#include "xychain/spinoracle.hpp"

#ifndef XYCHAIN_VERSION
#define XYCHAIN_VERSION "0.0.0"
#endif

namespace xychain::app {

using nlohmann::json;

std::string tool_version() { return XYCHAIN_VERSION; }

namespace {

void provenance(CsvWriter& csv, const RunConfig& cfg, const std::string& command) {
  std::ostringstream s;
  s << "xychain " << tool_version() << " " << command << " config_hash=fnv1a64:"
    << config_hash(cfg) << " seed=" << cfg.seed;
  csv.comment(s.str());
}

ChainSpec chain_of(const RunConfig& cfg) {
  if (cfg.couplings) return *cfg.couplings;
  if (!cfg.params) throw ConfigError("config field 'qracah': missing");
  return build_chain(*cfg.family(), *cfg.params);
}

// Family mode: the config's own draw; explicit mode: the optional reference.
std::optional<Reference> analytic_source(const RunConfig& cfg) {
  if (cfg.family()) {
    if (!cfg.params) throw ConfigError("config field 'qracah': missing");
    return Reference{*cfg.family(), *cfg.params};
  }
  return cfg.reference;
}

std::string verdict(const CheckReport& c) {
  if (c.skipped) return "SKIP";
  return c.pass ? "PASS" : "FAIL";
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const ChainSpec chain = chain_of(cfg);
  const SpectralData sd = eigendecompose(assemble(chain));
  const auto ref = analytic_source(cfg);

  CsvWriter csv(out);
  provenance(csv, cfg, "spectrum");
  csv.row({"j", "lambda_analytic", "lambda_numeric", "relative_gap"});
  const std::size_t n = sd.lambda_numeric.size();
  if (!ref) {
    for (std::size_t j = 0; j < n; ++j)
      csv.row({std::to_string(j), "", CsvWriter::num(sd.lambda_numeric[j]), ""});
    return kExitOk;
  }
  const AnalyticSpectrum an =
      analytic_spectrum(ref->family, ref->params, cfg.tol.cross_route);
  const SpectrumMatch match = match_spectra(an.lambda, sd.lambda_numeric);
  double top = 0.0;
  for (double v : an.lambda) top = std::max(top, v);
  for (std::size_t j = 0; j < n; ++j) {
    const double num = sd.lambda_numeric[static_cast<std::size_t>(match.numeric_index[j])];
    const double scale = std::max({an.lambda[j], num, 1e-6 * top});
    const double gap = scale > 0.0 ? std::abs(an.lambda[j] - num) / scale : 0.0;
    csv.row({std::to_string(j), CsvWriter::num(an.lambda[j]), CsvWriter::num(num),
             CsvWriter::num(gap)});
  }
  return kExitOk;
}

int cmd_chain_coeffs(const RunConfig& cfg, std::ostream& out) {
  ChainSpec chain = chain_of(cfg);
  CsvWriter csv(out);
  provenance(csv, cfg, "chain-coeffs");
  const bool xx = chain.is_xx(1e-12);
  if (xx) {
    csv.comment("XX reduction: gamma vanishes within 1e-12 of the coupling scale");
    std::fill(chain.gamma.begin(), chain.gamma.end(), 0.0);
  }
  csv.row({"j", "alpha", "beta", "gamma"});
  for (int j = 0; j <= chain.N; ++j) {
    const bool bond = j < chain.N;
    csv.row({std::to_string(j), bond ? CsvWriter::num(chain.alpha[j]) : "",
             CsvWriter::num(chain.beta[j]), bond ? CsvWriter::num(chain.gamma[j]) : ""});
  }
  return kExitOk;
}

int cmd_manybody(const RunConfig& cfg, std::ostream& out) {
  if (cfg.N + 1 > kManyBodyMaxSites)
    throw SizeCapExceeded("manybody: N=" + std::to_string(cfg.N) + " exceeds the cap N<=" +
                          std::to_string(kManyBodyMaxSites - 1));
  std::vector<double> lambda;
  if (const auto ref = analytic_source(cfg); ref && cfg.family()) {
    lambda = analytic_spectrum(ref->family, ref->params, cfg.tol.cross_route).lambda;
  } else {
    lambda = eigendecompose(assemble(chain_of(cfg))).lambda_numeric;
  }
  const ManyBodySpectrum mb = many_body_spectrum(lambda);

  CsvWriter csv(out);
  provenance(csv, cfg, "manybody");
  csv.comment(cfg.family() ? "Lambda: closed form" : "Lambda: numeric");
  csv.row({"mask", "subset", "energy"});
  for (const ManyBodyLevel& level : mb.levels) {
    std::string subset = "{";
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      if ((level.mask >> j) & 1U) {
        if (subset.size() > 1) subset += ",";
        subset += std::to_string(j);
      }
    }
    subset += "}";
    csv.row({std::to_string(level.mask), subset, CsvWriter::num(level.energy)});
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto family = cfg.family();
  if (!family) throw ConfigError("config field 'family': scan needs \"qr13\" or \"qr24\"");
  const ScanConfig& sc = *cfg.scan;

  CsvWriter csv(out);
  provenance(csv, cfg, "scan");
  csv.row({"N", "index", "a", "b", "c", "q", "contiguity_residual", "lambda_max"});
  std::size_t total = 0;
  for (int n : sc.N) {
    ScanOptions opts;
    opts.seed = cfg.seed;
    opts.max_results = sc.max_results;
    opts.contiguity_tolerance = cfg.tol.contiguity;
    std::vector<QRacahParams> found;
    try {
      found = parameter_scan(*family, sc.box, n, sc.samples, opts);
    } catch (const NoValidParameters& e) {
      log << "scan: " << e.what() << "\n";
      continue;
    }
    for (std::size_t k = 0; k < found.size(); ++k) {
      const QRacahParams& p = found[k];
      const ContiguityReport rep = verify_contiguity(*family, p, cfg.tol.contiguity);
      const AnalyticSpectrum an = analytic_spectrum(*family, p);
      csv.row({std::to_string(n), std::to_string(k), CsvWriter::num(p.a), CsvWriter::num(p.b),
               CsvWriter::num(p.c), CsvWriter::num(p.q),
               CsvWriter::num(std::max(rep.residual_plus, rep.residual_minus)),
               CsvWriter::num(*std::max_element(an.lambda.begin(), an.lambda.end()))});
    }
    total += found.size();
  }
  if (total == 0)
    throw NoValidParameters("scan: no valid parameters for any N; widen the ranges");
  return kExitOk;
}

std::vector<CheckReport> verify_checks(const RunConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  std::vector<CheckReport> checks;
  const ChainSpec chain = chain_of(cfg);
  const auto family = cfg.family();

  if (family) {
    const QRacahParams& p = *cfg.params;
    const ContiguityReport rep = verify_contiguity(*family, p, tol.contiguity);
    checks.push_back(make_check("contiguity relations",
                                std::max(rep.residual_plus, rep.residual_minus), tol.contiguity,
                                rep.summary()));
    const ContiguityCoefficients coeffs = contiguity_coefficients(*family, p);
    checks.push_back(make_check("constraint ratio", coeffs.constraint_residual(), tol.constraint));
    const AnalyticSpectrum an =
        analytic_spectrum(*family, p, std::numeric_limits<double>::infinity());
    checks.push_back(make_check("closed-form Lambda vs sqrt(lambda+ lambda-)",
                                an.cross_route_gap, tol.cross_route));
  }

  const FreeFermionSystem sys = assemble(chain);
  const SpectralData sd = eigendecompose(sys);
  if (const auto ref = analytic_source(cfg)) {
    if (ref->params.N != chain.N)
      throw ConfigError("config field 'reference': N does not match the couplings");
    const AnalyticSpectrum an =
        analytic_spectrum(ref->family, ref->params, std::numeric_limits<double>::infinity());
    const SpectrumMatch match = match_spectra(an.lambda, sd.lambda_numeric);
    CheckReport c = make_check("analytic vs numeric Lambda",
                               relative_spectrum_gap(an.lambda, sd.lambda_numeric), tol.spectrum,
                               family ? "" : "reference " + std::string(to_string(ref->family)));
    if (match.collision) {
      c.pass = false;
      c.detail += " matching collided";
    }
    checks.push_back(c);
    checks.push_back(make_check("analytic Lambda vs singular values of A+B",
                                relative_spectrum_gap(an.lambda, singular_values(sys)),
                                tol.spectrum));
  }
  checks.push_back(singular_value_check(sys, sd, tol.spectrum));
  checks.push_back(spectrum_parity_check(sd, tol.parity));
  checks.push_back(orthogonality_check(sd, tol.orthogonality));
  checks.push_back(eigenpair_check(sys, sd, tol.eigenpair));

  if (family) {
    const PQTable pq = build_pq_table(*family, *cfg.params);
    checks.push_back(
        make_check("P/Q recurrence", pq_recurrence_residual(chain, pq), tol.recurrence));
    const EigenvectorCrosscheck ev =
        eigenvector_crosscheck(sd, pq, tol.cosine, tol.angle);
    checks.push_back(ev.cosine);
    checks.push_back(ev.subspace);
  }
  checks.push_back(jw_certify(chain, tol.spectrum));
  return checks;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream* json_out) {
  const std::vector<CheckReport> checks = verify_checks(cfg);
  CsvWriter csv(out);
  provenance(csv, cfg, "verify");
  csv.row({"check", "residual", "tolerance", "verdict", "detail"});
  json records = json::array();
  for (const CheckReport& c : checks) {
    csv.row({c.name, c.skipped ? "" : CsvWriter::num(c.residual),
             c.skipped ? "" : CsvWriter::num(c.tolerance), verdict(c), c.detail});
    json r = {{"name", c.name}, {"verdict", verdict(c)}, {"detail", c.detail}};
    if (!c.skipped) {
      r["residual"] = c.residual;
      r["tolerance"] = c.tolerance;
    }
    records.push_back(r);
  }
  const bool ok = all_pass(checks);
  if (json_out != nullptr) {
    const json report = {{"tool", "xychain"},
                         {"version", tool_version()},
                         {"config_hash", "fnv1a64:" + config_hash(cfg)},
                         {"seed", cfg.seed},
                         {"checks", records},
                         {"pass", ok}};
    *json_out << report.dump(2) << "\n";
  }
  return ok ? kExitOk : kExitCheck;
}

int run(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err,
        std::ostream* json_out) {
  try {
    if (command == "spectrum") return cmd_spectrum(cfg, out);
    if (command == "chain-coeffs") return cmd_chain_coeffs(cfg, out);
    if (command == "manybody") return cmd_manybody(cfg, out);
    if (command == "scan") return cmd_scan(cfg, out, err);
    if (command == "verify") {
      const int code = cmd_verify(cfg, out, json_out);
      if (code != kExitOk) err << "verify: at least one check failed\n";
      return code;
    }
    err << "unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SizeCapExceeded& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConvergenceFailure& e) {
    err << "check failure: " << e.what() << "\n";
    return kExitCheck;
  } catch (const Error& e) {
    err << "regime error: " << e.what() << "\n";
    return kExitRegime;
  }
}

}  // namespace xychain::app
