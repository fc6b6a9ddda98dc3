#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "xychain/error.hpp"

namespace xychain::app {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) field_error(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) field_error(field, "must be finite");
  return d;
}

long long integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<long long>();
}

std::vector<double> number_array(const json& v, const std::string& field) {
  if (!v.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

QRacahParams qracah_block(const json& obj, const std::string& where, int N) {
  if (!obj.is_object()) field_error(where, "expected an object");
  QRacahParams p;
  p.a = number(require(obj, "a", where), where + ".a");
  p.b = number(require(obj, "b", where), where + ".b");
  p.c = number(require(obj, "c", where), where + ".c");
  p.q = number(require(obj, "q", where), where + ".q");
  p.N = N;
  if (!(p.q > 0.0 && p.q < 1.0)) field_error(where + ".q", "must lie strictly inside (0, 1)");
  return p;
}

Axis axis_block(const json& obj, const std::string& where, bool allow_log) {
  if (!obj.is_object()) field_error(where, "expected an object with lo, hi");
  reject_unknown(obj, where, {"lo", "hi", "scale"});
  Axis axis;
  axis.lo = number(require(obj, "lo", where), where + ".lo");
  axis.hi = number(require(obj, "hi", where), where + ".hi");
  if (const auto it = obj.find("scale"); it != obj.end()) {
    if (!it->is_string()) field_error(where + ".scale", "expected \"linear\" or \"signed_log\"");
    const std::string s = it->get<std::string>();
    if (s == "linear") {
      axis.scale = AxisScale::Linear;
    } else if (s == "signed_log" && allow_log) {
      axis.scale = AxisScale::SignedLog;
    } else {
      field_error(where + ".scale",
                  allow_log ? "expected \"linear\" or \"signed_log\"" : "must be \"linear\"");
    }
  }
  return axis;
}

ScanConfig scan_block(const json* obj, int default_N) {
  ScanConfig s;
  const Axis log_axis{-3.0, 4.0, AxisScale::SignedLog};
  s.box = {log_axis, log_axis, log_axis, Axis{0.3, 0.7, AxisScale::Linear}};
  if (default_N > 0) s.N = {default_N};
  if (obj == nullptr) {
    if (s.N.empty()) field_error("scan.N", "missing (no top-level N either)");
    return s;
  }
  if (!obj->is_object()) field_error("scan", "expected an object");
  reject_unknown(*obj, "scan", {"N", "samples", "max_results", "a", "b", "c", "q"});
  if (const auto it = obj->find("N"); it != obj->end()) {
    s.N.clear();
    if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i)
        s.N.push_back(static_cast<int>(integer((*it)[i], "scan.N[" + std::to_string(i) + "]")));
    } else {
      s.N.push_back(static_cast<int>(integer(*it, "scan.N")));
    }
  }
  if (s.N.empty()) field_error("scan.N", "missing (no top-level N either)");
  for (int n : s.N)
    if (n < 1) field_error("scan.N", "every N must be at least 1");
  if (const auto it = obj->find("samples"); it != obj->end()) {
    const long long v = integer(*it, "scan.samples");
    if (v < 1) field_error("scan.samples", "must be at least 1");
    s.samples = static_cast<int>(v);
  }
  if (const auto it = obj->find("max_results"); it != obj->end()) {
    const long long v = integer(*it, "scan.max_results");
    if (v < 0) field_error("scan.max_results", "must be nonnegative");
    s.max_results = static_cast<std::size_t>(v);
  }
  if (const auto it = obj->find("a"); it != obj->end()) s.box.a = axis_block(*it, "scan.a", true);
  if (const auto it = obj->find("b"); it != obj->end()) s.box.b = axis_block(*it, "scan.b", true);
  if (const auto it = obj->find("c"); it != obj->end()) s.box.c = axis_block(*it, "scan.c", true);
  if (const auto it = obj->find("q"); it != obj->end()) {
    s.box.q = axis_block(*it, "scan.q", false);
    if (!(s.box.q.lo > 0.0 && s.box.q.hi < 1.0))
      field_error("scan.q", "range must sit inside (0, 1)");
  }
  return s;
}

void tolerance_block(const json& obj, Tolerances& tol) {
  if (!obj.is_object()) field_error("tolerances", "expected an object");
  const std::pair<const char*, double*> keys[] = {
      {"contiguity", &tol.contiguity},   {"constraint", &tol.constraint},
      {"cross_route", &tol.cross_route}, {"spectrum", &tol.spectrum},
      {"parity", &tol.parity},           {"orthogonality", &tol.orthogonality},
      {"eigenpair", &tol.eigenpair},     {"recurrence", &tol.recurrence},
      {"cosine", &tol.cosine},           {"angle", &tol.angle},
  };
  for (const auto& item : obj.items()) {
    double* slot = nullptr;
    for (const auto& [k, p] : keys)
      if (item.key() == k) slot = p;
    if (slot == nullptr) field_error("tolerances." + item.key(), "unknown tolerance");
    const double v = number(item.value(), "tolerances." + item.key());
    if (!(v > 0.0)) field_error("tolerances." + item.key(), "must be positive");
    *slot = v;
  }
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::optional<ContiguityFamily> RunConfig::family() const {
  switch (mode) {
    case Mode::QR13: return ContiguityFamily::QR_I_III;
    case Mode::QR24: return ContiguityFamily::QR_II_IV;
    case Mode::Explicit: return std::nullopt;
  }
  return std::nullopt;
}

RunConfig parse_config(const std::string& text, const Overrides& overrides,
                       const std::string& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(root, "", {"family", "N", "qracah", "couplings", "reference", "seed",
                            "tolerances", "scan", "description"});

  RunConfig cfg;
  if (overrides.family) root["family"] = *overrides.family;
  if (overrides.seed) root["seed"] = *overrides.seed;
  if (overrides.tol) root["tolerances"]["spectrum"] = *overrides.tol;

  const json& fam = require(root, "family", "");
  if (!fam.is_string()) field_error("family", "expected \"qr13\", \"qr24\" or \"explicit\"");
  const std::string family = fam.get<std::string>();
  if (family == "qr13") {
    cfg.mode = Mode::QR13;
  } else if (family == "qr24") {
    cfg.mode = Mode::QR24;
  } else if (family == "explicit") {
    cfg.mode = Mode::Explicit;
  } else {
    field_error("family", "expected \"qr13\", \"qr24\" or \"explicit\", got \"" + family + "\"");
  }

  if (const auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
      field_error("seed", "expected a nonnegative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (const auto it = root.find("tolerances"); it != root.end()) tolerance_block(*it, cfg.tol);

  std::optional<int> n_field;
  if (const auto it = root.find("N"); it != root.end()) {
    const long long v = integer(*it, "N");
    if (v < 0 || v > 1000) field_error("N", "out of range");
    n_field = static_cast<int>(v);
  }

  const bool has_qracah = root.contains("qracah");
  const bool has_couplings = root.contains("couplings");
  if (cfg.mode != Mode::Explicit) {
    if (has_couplings) field_error("couplings", "only allowed with family \"explicit\"");
    if (root.contains("reference")) field_error("reference", "only allowed with family \"explicit\"");
    if (!n_field) field_error("N", "missing");
    if (*n_field < 1) field_error("N", "must be at least 1 for q-Racah families");
    cfg.N = *n_field;
    if (has_qracah) {
      cfg.params = qracah_block(root["qracah"], "qracah", cfg.N);
    } else if (!root.contains("scan")) {
      field_error("qracah", "missing");
    }
  } else {
    if (has_qracah) field_error("qracah", "not allowed with family \"explicit\"; use \"couplings\"");
    const json& block = require(root, "couplings", "");
    if (!block.is_object()) field_error("couplings", "expected an object");
    reject_unknown(block, "couplings", {"alpha", "beta", "gamma", "csv"});
    ChainSpec chain;
    if (block.contains("csv")) {
      if (block.contains("alpha") || block.contains("beta") || block.contains("gamma"))
        field_error("couplings.csv", "give either csv or alpha/beta/gamma, not both");
      if (!block["csv"].is_string()) field_error("couplings.csv", "expected a path");
      std::filesystem::path p = block["csv"].get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      chain = read_couplings_csv(p.string());
    } else {
      chain.beta = number_array(require(block, "beta", "couplings"), "couplings.beta");
      chain.alpha = number_array(require(block, "alpha", "couplings"), "couplings.alpha");
      chain.gamma = number_array(require(block, "gamma", "couplings"), "couplings.gamma");
      if (chain.beta.empty()) field_error("couplings.beta", "needs at least one site");
      chain.N = static_cast<int>(chain.beta.size()) - 1;
    }
    if (n_field && *n_field != chain.N)
      field_error("N", "is " + std::to_string(*n_field) + " but couplings.beta has " +
                           std::to_string(chain.beta.size()) + " entries (expected N+1)");
    if (chain.alpha.size() != static_cast<std::size_t>(chain.N))
      field_error("couplings.alpha", "expected " + std::to_string(chain.N) + " entries, got " +
                                         std::to_string(chain.alpha.size()));
    if (chain.gamma.size() != static_cast<std::size_t>(chain.N))
      field_error("couplings.gamma", "expected " + std::to_string(chain.N) + " entries, got " +
                                         std::to_string(chain.gamma.size()));
    cfg.N = chain.N;
    root["couplings"] = {{"alpha", chain.alpha}, {"beta", chain.beta}, {"gamma", chain.gamma}};
    cfg.couplings = std::move(chain);

    if (const auto it = root.find("reference"); it != root.end()) {
      if (!it->is_object()) field_error("reference", "expected an object");
      reject_unknown(*it, "reference", {"family", "a", "b", "c", "q"});
      const json& rf = require(*it, "family", "reference");
      const auto parsed = rf.is_string() ? parse_family(rf.get<std::string>()) : std::nullopt;
      if (!parsed) field_error("reference.family", "expected \"qr13\" or \"qr24\"");
      if (cfg.N < 1) field_error("reference", "needs N >= 1");
      cfg.reference = Reference{*parsed, qracah_block(*it, "reference", cfg.N)};
    }
  }

  const json* scan = root.contains("scan") ? &root["scan"] : nullptr;
  if (scan != nullptr || cfg.mode != Mode::Explicit) cfg.scan = scan_block(scan, cfg.N);

  cfg.canonical = root;
  return cfg;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(text.str(), overrides, dir.empty() ? "." : dir);
}

ChainSpec read_couplings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read couplings file '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  ChainSpec chain;
  int line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char ch = s[i];
      if (quoted) {
        if (ch == '"' && i + 1 < s.size() && s[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cell += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        cells.push_back(cell);
        cell.clear();
      } else if (ch != '\r') {
        cell += ch;
      }
    }
    cells.push_back(cell);
    return cells;
  };
  int col_alpha = -1, col_beta = -1, col_gamma = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "alpha") col_alpha = static_cast<int>(i);
        if (cells[i] == "beta") col_beta = static_cast<int>(i);
        if (cells[i] == "gamma") col_gamma = static_cast<int>(i);
      }
      if (col_alpha < 0 || col_beta < 0 || col_gamma < 0)
        throw ConfigError(path + ": header must name alpha, beta and gamma columns");
      continue;
    }
    auto cell = [&](int col, bool allow_empty, std::vector<double>& out) {
      if (col >= static_cast<int>(cells.size()))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": too few columns");
      const std::string& s = cells[col];
      if (s.empty()) {
        if (!allow_empty)
          throw ConfigError(path + ":" + std::to_string(line_no) + ": empty " + header[col]);
        return;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size())
        throw ConfigError(path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
      out.push_back(v);
    };
    cell(col_beta, false, chain.beta);
    cell(col_alpha, true, chain.alpha);
    cell(col_gamma, true, chain.gamma);
  }
  if (chain.beta.empty()) throw ConfigError(path + ": no coupling rows");
  chain.N = static_cast<int>(chain.beta.size()) - 1;
  return chain;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.canonical.dump())));
  return buf;
}

}  // namespace xychain::app
