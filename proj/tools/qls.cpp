// qls: run simulations, convergence studies and stability scans from a JSON
// config, with per-field overrides on the command line.
#include "qls/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Override flags collected per subcommand; only flags actually given are
// merged over the config file.
struct Overrides {
  std::map<std::string, std::string> strings;
  std::map<std::string, double> doubles;
  std::map<std::string, long> integers;
  std::map<std::string, std::vector<double>> double_lists;
  std::map<std::string, std::vector<long>> integer_lists;
  std::map<std::string, bool> flags;
  std::vector<std::pair<std::string, CLI::Option*>> given;

  void str(CLI::App* app, const std::string& key, const std::string& help) {
    given.emplace_back(key, app->add_option(flag(key), strings[key], help));
  }
  void dbl(CLI::App* app, const std::string& key, const std::string& help) {
    given.emplace_back(key, app->add_option(flag(key), doubles[key], help));
  }
  void integer(CLI::App* app, const std::string& key, const std::string& help) {
    given.emplace_back(key, app->add_option(flag(key), integers[key], help));
  }
  void dlist(CLI::App* app, const std::string& key, const std::string& help) {
    given.emplace_back(key, app->add_option(flag(key), double_lists[key], help)->delimiter(','));
  }
  void ilist(CLI::App* app, const std::string& key, const std::string& help) {
    given.emplace_back(key, app->add_option(flag(key), integer_lists[key], help)->delimiter(','));
  }
  void boolean(CLI::App* app, const std::string& key, const std::string& help) {
    given.emplace_back(key, app->add_flag(flag(key), flags[key], help));
  }

  void apply(json& j) const {
    for (const auto& [key, opt] : given) {
      if (opt->count() == 0) continue;
      if (strings.count(key)) j[key] = strings.at(key);
      else if (doubles.count(key)) j[key] = doubles.at(key);
      else if (integers.count(key)) j[key] = integers.at(key);
      else if (double_lists.count(key)) j[key] = double_lists.at(key);
      else if (integer_lists.count(key)) j[key] = integer_lists.at(key);
      else if (flags.count(key)) j[key] = flags.at(key);
    }
  }

  static std::string flag(std::string key) {
    for (auto& ch : key)
      if (ch == '_') ch = '-';
    return "--" + key;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  o.str(app, "model", "pseudo_attractive | thin_film | cubic");
  o.integer(app, "n_points", "grid points N");
  o.str(app, "output", "output file");
  o.dbl(app, "blowup_factor", "guard factor on max |u|");
}

void add_initial_condition(CLI::App* app, Overrides& o) {
  o.str(app, "ic", "gaussian | plane_wave | multi_mode");
  o.dbl(app, "amplitude", "profile amplitude a");
  o.dbl(app, "sigma", "Gaussian width");
  o.integer(app, "wavenumber", "plane-wave wavenumber");
  o.ilist(app, "wavenumbers", "multi-mode wavenumbers, comma separated");
  o.boolean(app, "normalize_modes", "scale multi-mode data so max |u| = a");
  o.integer(app, "perturbation_mode", "seed mode");
  o.dbl(app, "perturbation_amplitude", "seed amplitude");
}

void add_filters(CLI::App* app, Overrides& o) {
  o.dbl(app, "mollify_eps", "mollifier parameter eps");
  o.boolean(app, "mollifier_taper", "raised-cosine mollifier edge");
  o.dbl(app, "krasny_delta", "Krasny filter threshold");
}

void add_timing(CLI::App* app, Overrides& o) {
  o.dbl(app, "tau", "time step");
  o.integer(app, "n_steps", "number of steps N_t");
  o.dbl(app, "t_final", "final time T");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-splitting solver for quasilinear Schrodinger equations"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::string config;
    bool print_config = false;
    Overrides o;
  };
  std::map<std::string, Sub> subs;
  const std::map<std::string, std::string> help = {
      {"simulate", "run one simulation and write diagnostics CSV"},
      {"converge", "run an N_t ladder against a reference run"},
      {"stability", "plane-wave stability verdicts and split-step multipliers"},
      {"planewave-check", "plane-wave exactness and perturbation growth"}};

  for (const auto& [name, text] : help) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, text);
    s.app->add_option("--config", s.config, "JSON config file")->check(CLI::ExistingFile);
    s.app->add_flag("--print-config", s.print_config, "print the merged config and exit");
    add_common(s.app, s.o);
  }
  for (const char* name : {"simulate", "converge", "planewave-check"}) {
    add_filters(subs[name].app, subs[name].o);
  }
  for (const char* name : {"simulate", "converge"}) add_initial_condition(subs[name].app, subs[name].o);

  Sub& sim = subs["simulate"];
  add_timing(sim.app, sim.o);
  sim.o.integer(sim.app, "record_every", "sample stride in steps");
  sim.o.dlist(sim.app, "snapshot_times", "snapshot times, comma separated");
  sim.o.str(sim.app, "snapshot_prefix", "snapshot file prefix");
  sim.o.str(sim.app, "blowup_json", "blow-up report path");

  Sub& conv = subs["converge"];
  conv.o.dbl(conv.app, "t_final", "final time T");
  conv.o.ilist(conv.app, "ladder", "N_t ladder, comma separated");
  conv.o.integer(conv.app, "reference_n_steps", "reference N_t");
  conv.o.str(conv.app, "orders_json", "fitted-order report path");

  Sub& stab = subs["stability"];
  stab.o.dlist(stab.app, "amplitudes", "amplitude grid, comma separated");
  stab.o.integer(stab.app, "xi_max", "largest perturbation wavenumber (0: N/2 - 1)");
  stab.o.dlist(stab.app, "multiplier_w", "constant-state moduli for multipliers");
  stab.o.dbl(stab.app, "multiplier_tau", "time step for multipliers");
  stab.o.ilist(stab.app, "multiplier_k", "wavenumbers for multipliers");

  Sub& pw = subs["planewave-check"];
  add_timing(pw.app, pw.o);
  pw.o.dbl(pw.app, "amplitude", "carrier amplitude a");
  pw.o.integer(pw.app, "wavenumber", "carrier wavenumber k");
  pw.o.integer(pw.app, "perturbation_mode", "seed mode (default k + 2)");
  pw.o.dbl(pw.app, "perturbation_amplitude", "seed amplitude");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qls::ExitConfigError;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      json j = json::object();
      if (!s.config.empty()) {
        std::ifstream in(s.config);
        try {
          in >> j;
        } catch (const json::parse_error& e) {
          throw qls::ConfigError("config '" + s.config + "' is not valid JSON: " + e.what());
        }
      }
      s.o.apply(j);
      j["experiment"] = name;
      qls::ExperimentConfig cfg = qls::config_from_json(j);
      if (s.print_config) {
        std::cout << qls::config_to_json(cfg).dump(2) << '\n';
        return qls::ExitSuccess;
      }
      return qls::run_experiment(cfg, std::cerr);
    } catch (const qls::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return qls::ExitConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return qls::ExitConfigError;
}
