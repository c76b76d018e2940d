// tmass: asymptotically hyperbolic mass of metrics on the Poincare ball.
//
//   tmass verify [flags]   invariant suite, JSON report
//   tmass mass   [flags]   energy-momentum by both routes, JSON report
//   tmass aspect [flags]   mass aspect over quadrature nodes, CSV
//
// Exit codes: 0 pass, 1 invariant failure, 2 inconclusive, 64 config error.

#include "tractormass/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

struct FlagSet {
  std::map<std::string, std::string> single;
  std::vector<std::string> params;
  std::string config;
};

void add_flags(CLI::App* cmd, FlagSet& f) {
  static const std::vector<std::pair<std::string, std::string>> flags{
      {"dim", "dimension n of the ball (3..6)"},
      {"family", "hyperbolic | schwarzschild-ads | aspect-perturbation | custom"},
      {"chi", "JSON file of [l, m, coeff] harmonic coefficients"},
      {"route", "tractor | michel | both"},
      {"level", "quadrature level"},
      {"eps0", "largest defining-function value of the schedule"},
      {"ratio", "geometric ratio of the schedule"},
      {"count", "number of schedule samples"},
      {"stages", "Richardson stages"},
      {"tol", "cross-route relative tolerance"},
      {"extract-tol", "extrapolation convergence tolerance"},
      {"out", "output file (default stdout)"},
      {"csv", "mass: also write the aspect CSV here"},
      {"seed", "seed for randomised checks"}};
  for (const auto& [name, help] : flags) {
    cmd->add_option_function<std::string>(
        "--" + name, [&f, name = name](const std::string& v) { f.single[name] = v; }, help);
  }
  cmd->add_option("--param", f.params, "family parameter key=value (repeatable)");
  cmd->add_option("--config", f.config, "flat key = value configuration file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotically hyperbolic mass on the Poincare ball"};
  app.require_subcommand(1);
  FlagSet flags;
  std::string command;
  const std::pair<const char*, const char*> commands[]{
      {"verify", "run the invariant suite and print a JSON report"},
      {"mass", "energy-momentum by the tractor and flux routes, JSON report"},
      {"aspect", "mass aspect at every quadrature node, CSV"}};
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_flags(cmd, flags);
    cmd->callback([&command, name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tractormass::kExitConfig;
  }

  tractormass::RunConfig cfg;
  try {
    if (!flags.config.empty()) {
      for (const auto& [k, v] : tractormass::read_config_file(flags.config)) {
        tractormass::apply_setting(cfg, k, v);
      }
    }
    cfg.command = command;
    for (const auto& [k, v] : flags.single) tractormass::apply_setting(cfg, k, v);
    for (const auto& p : flags.params) tractormass::apply_setting(cfg, "param", p);
  } catch (const tractormass::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return tractormass::kExitConfig;
  }
  return tractormass::run_command(cfg);
}
