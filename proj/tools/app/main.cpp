#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::string json;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> family;
};

void common_options(CLI::App* sub, Args& args) {
  sub->add_option("--config", args.config, "JSON run configuration")->required();
  sub->add_option("--out", args.out, "output CSV (default: stdout)");
  sub->add_option("--seed", args.seed, "override the config seed");
  sub->add_option("--tol", args.tol, "relative tolerance for spectral comparisons");
  sub->add_option("--family", args.family, "override the config family")
      ->check(CLI::IsMember({"qr13", "qr24", "explicit"}));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace xychain::app;
  CLI::App app{"Exactly solvable inhomogeneous XY chains from q-Racah contiguity data"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Args args;
  const std::pair<const char*, const char*> commands[] = {
      {"spectrum", "closed-form and numeric single-particle spectrum"},
      {"chain-coeffs", "chain couplings alpha, beta, gamma"},
      {"verify", "run every certification; exit 4 on any failure"},
      {"manybody", "all 2^(N+1) many-body energies"},
      {"scan", "search a parameter box for valid q-Racah draws"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    common_options(sub, args);
    if (std::string(name) == "verify")
      sub->add_option("--json", args.json, "also write a JSON report to this path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = load_config(args.config, Overrides{args.family, args.seed, args.tol});
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream* out = &std::cout;
  if (!args.out.empty()) {
    file = std::make_unique<std::ofstream>(args.out, std::ios::binary);
    if (!*file) {
      std::cerr << "config error: cannot write '" << args.out << "'\n";
      return kExitConfig;
    }
    out = file.get();
  }
  std::unique_ptr<std::ofstream> json_file;
  if (!args.json.empty()) {
    json_file = std::make_unique<std::ofstream>(args.json, std::ios::binary);
    if (!*json_file) {
      std::cerr << "config error: cannot write '" << args.json << "'\n";
      return kExitConfig;
    }
  }
  return run(command, cfg, *out, std::cerr, json_file.get());
}
