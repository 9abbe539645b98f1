// Command-line front end: one subcommand per experiment, flags mirroring the
// configuration keys, with an optional flat `key = value` config file that
// flags override. Exit code 0 on success; on failure a single line
// "error: <category>: <message>" goes to stderr.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "slowbond/experiments.hpp"

namespace {

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> help = {
      {"n", "cell / site count (>= 2)"},
      {"alpha", "slow-bond strength (> 0)"},
      {"alpha-min", "sweep grid lower end"},
      {"alpha-max", "sweep grid upper end"},
      {"alphas-per-decade", "sweep grid resolution"},
      {"alpha-list", "explicit comma-separated alpha values (overrides the grid)"},
      {"beta", "slow-bond exponent in [0, inf]; 'inf' blocks the bond"},
      {"dt", "solver time step (default 1/n)"},
      {"theta", "time-scheme weight in [0,1] (1/2 = trapezoidal)"},
      {"T", "time horizon"},
      {"snapshot-stride", "record every k-th solver step"},
      {"rannacher-steps", "leading implicit-Euler startup steps"},
      {"profile", "initial profile name (constant, halfcos, cos2pi, step, linear-saw)"},
      {"profile-c", "value for the constant profile"},
      {"seed", "base RNG seed"},
      {"replicas", "independent chains per ensemble"},
      {"epsilon", "boxcar window fraction in (0, 1/2)"},
      {"threads", "worker threads for replica / sweep fan-out"},
      {"output", "output CSV path"},
      {"snapshot-times", "comma-separated macroscopic snapshot times"},
      {"aggregate", "simulate output: true = site stats, false = long form"},
      {"n-list", "comma-separated lattice sizes (hydro-compare, green-check)"},
      {"beta-list", "comma-separated regimes (hydro-compare)"},
      {"t-compare", "comparison time (hydro-compare)"},
      {"kappa", "energy normalization (total = (bulk+atom)/(4 kappa))"},
  };
  return help;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slowbond: exclusion process with a slow bond and its heat-equation limits"};
  app.require_subcommand(1);

  std::map<std::string, std::string> flag_kv;
  std::map<std::string, std::string> config_paths;  // per subcommand

  const std::map<std::string, std::string> descriptions = {
      {"solve", "integrate the lattice heat equation and dump the trajectory"},
      {"sweep-alpha", "distances to the Neumann/periodic limits across an alpha grid"},
      {"simulate", "run exclusion-process replicas and dump snapshots"},
      {"hydro-compare", "empirical measures vs the limiting equations across regimes"},
      {"green-check", "inverse-Laplacian property residuals per (alpha, n)"},
      {"energy", "energy functional across an alpha grid"},
  };

  for (const auto& [name, desc] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option_function<std::string>(
        "--config",
        [&config_paths, name = name](const std::string& v) { config_paths[name] = v; },
        "flat 'key = value' config file; flags override it");
    for (const std::string& key : slowbond::config_keys()) {
      if (key == "experiment") continue;
      const auto it = flag_help().find(key);
      sub->add_option_function<std::string>(
          "--" + key, [&flag_kv, key](const std::string& v) { flag_kv[key] = v; },
          it == flag_help().end() ? std::string() : it->second);
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    std::map<std::string, std::string> kv;
    if (config_paths.count(name)) kv = slowbond::read_config_file(config_paths.at(name));
    for (const auto& [key, value] : flag_kv) kv[key] = value;
    kv["experiment"] = name;
    const slowbond::RunSpec spec = slowbond::parse_config(kv);
    const std::string path = slowbond::run_experiment(spec);
    std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid-argument: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: runtime-error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal-error: " << e.what() << "\n";
    return 4;
  }
}
