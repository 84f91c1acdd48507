#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jscc/cli/commands.hpp"

namespace {

constexpr const char* kColumns = R"(CSV columns (12 significant digits, header row, LF line endings):
  measures     key,value
  bounds       n,k,kind,status,log_bound,exponent,s,rho   (exponent = -log_bound/n)
  asymptotics  R,assumption,direct,converse_eval,converse_sup,theta_star,critical_rate,status
  reproduce 1  k,direct_a2,converse_a2,nE,E_md,direct_vacuous,converse_vacuous   (-log P, n = 10000)
  reproduce 2  n,k,direct_a2,converse_a2,E,E_md_over_n,direct_vacuous,converse_vacuous   (-log P / n)
  oracle       chain,family,theta,theta_prime,n,lower,middle,upper,margin
Exit codes: 0 ok, 1 configuration error, 2 computation error, 3 only vacuous output.)";

}  // namespace

int main(int argc, char** argv) {
  using namespace jscc::cli;
  CLI::App app{"Finite-length and asymptotic bounds for joint source-channel coding over Markov chains"};
  app.footer(kColumns);
  app.require_subcommand(1);
  app.fallthrough();  // --out / --grid-density may follow the subcommand

  std::string out_path;
  std::string config_path;
  int grid_density = 60;
  int figure = 0;
  app.add_option("--out", out_path, "Output file (default: standard output)");
  app.add_option("--grid-density", grid_density, "Optimizer grid points per parameter")
      ->check(CLI::Range(4, 100000));

  auto* measures = app.add_subcommand("measures", "Entropy rates, dispersions, capacity, assumption checks");
  auto* bounds = app.add_subcommand("bounds", "Finite-length direct and converse bounds");
  auto* asym = app.add_subcommand("asymptotics", "Error exponents and critical rate");
  auto* repro = app.add_subcommand("reproduce", "Numerical example tables (figure 1 or 2)");
  auto* oracle = app.add_subcommand("oracle", "Brute-force sandwich check of the n-fold entropies");
  for (auto* sub : {measures, bounds, asym})
    sub->add_option("--config", config_path, "JSON configuration file ('-' for stdin)")->required();
  oracle->add_option("--config", config_path, "JSON configuration file ('-' for stdin)");
  repro->add_option("figure", figure, "1 or 2")->required()->check(CLI::IsMember({1, 2}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::ostringstream buf;
  int code = kExitOk;
  try {
    const CommandOptions opt{grid_density};
    if (*measures) {
      code = cmd_measures(load_config(config_path), buf);
    } else if (*bounds) {
      code = cmd_bounds(load_config(config_path), buf, opt);
    } else if (*asym) {
      code = cmd_asymptotics(load_config(config_path), buf);
    } else if (*repro) {
      code = cmd_reproduce(figure, buf, opt);
    } else if (*oracle) {
      const RunConfig cfg = config_path.empty() ? default_oracle_config() : load_config(config_path);
      code = cmd_oracle(cfg, buf, std::cerr);
    }
  } catch (const jscc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const jscc::Error& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return kExitComputation;
  }

  if (out_path.empty()) {
    std::cout << buf.str() << std::flush;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "configuration error: cannot write '" << out_path << "'\n";
      return kExitConfig;
    }
    out << buf.str();
  }
  if (code == kExitVacuous) std::cerr << "no non-vacuous rows in the output\n";
  return code;
}
