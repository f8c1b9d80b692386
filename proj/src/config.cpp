#include "qls/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace qls {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "experiment",   "model",          "n_points",       "ic",
      "amplitude",    "sigma",          "wavenumber",     "wavenumbers",
      "normalize_modes", "perturbation_mode", "perturbation_amplitude",
      "tau",          "n_steps",        "t_final",        "mollify_eps",
      "mollifier_taper", "krasny_delta", "blowup_factor", "record_every",
      "snapshot_times", "ladder",       "reference_n_steps", "amplitudes",
      "xi_max",       "multiplier_w",   "multiplier_tau", "multiplier_k",
      "output",       "snapshot_prefix", "blowup_json",   "orders_json"};
  return keys;
}

std::string model_name(ModelKind m) {
  switch (m) {
  case ModelKind::PseudoAttractive: return "pseudo_attractive";
  case ModelKind::ThinFilm: return "thin_film";
  case ModelKind::Cubic: return "cubic";
  }
  return {};
}

ModelKind model_from_string(const std::string& s) {
  if (s == "pseudo_attractive") return ModelKind::PseudoAttractive;
  if (s == "thin_film") return ModelKind::ThinFilm;
  if (s == "cubic") return ModelKind::Cubic;
  throw ConfigError("unknown model '" + s + "'");
}

std::string profile_name(ProfileKind p) {
  switch (p) {
  case ProfileKind::Gaussian: return "gaussian";
  case ProfileKind::PlaneWave: return "plane_wave";
  case ProfileKind::MultiMode: return "multi_mode";
  }
  return {};
}

ProfileKind profile_from_string(const std::string& s) {
  if (s == "gaussian") return ProfileKind::Gaussian;
  if (s == "plane_wave") return ProfileKind::PlaneWave;
  if (s == "multi_mode") return ProfileKind::MultiMode;
  throw ConfigError("unknown initial condition '" + s + "'");
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& dst) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  T v{};
  read(j, key, v);
  dst = v;
}

void check_writable(const std::string& path, const char* key) {
  if (path.empty()) return;
  namespace fs = std::filesystem;
  fs::path parent = fs::path(path).parent_path();
  if (parent.empty()) parent = ".";
  std::error_code ec;
  if (!fs::is_directory(parent, ec))
    throw ConfigError(std::string(key) + ": directory '" + parent.string() + "' does not exist");
  const auto perms = fs::status(parent, ec).permissions();
  if ((perms & fs::perms::owner_write) == fs::perms::none)
    throw ConfigError(std::string(key) + ": directory '" + parent.string() + "' is not writable");
}

} // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
  case ExperimentKind::Simulate: return "simulate";
  case ExperimentKind::Converge: return "converge";
  case ExperimentKind::Stability: return "stability";
  case ExperimentKind::PlaneWaveCheck: return "planewave_check";
  }
  return {};
}

ExperimentKind experiment_from_string(const std::string& s) {
  if (s == "simulate") return ExperimentKind::Simulate;
  if (s == "converge") return ExperimentKind::Converge;
  if (s == "stability") return ExperimentKind::Stability;
  if (s == "planewave_check" || s == "planewave-check") return ExperimentKind::PlaneWaveCheck;
  throw ConfigError("unknown experiment '" + s + "'");
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");

  ExperimentConfig c;
  std::string name;
  if (j.contains("experiment")) {
    read(j, "experiment", name);
    c.experiment = experiment_from_string(name);
  }
  if (j.contains("model")) {
    read(j, "model", name);
    c.model = model_from_string(name);
  }
  if (j.contains("ic")) {
    read(j, "ic", name);
    c.profile = profile_from_string(name);
  }
  read(j, "n_points", c.n_points);
  read(j, "amplitude", c.amplitude);
  read(j, "sigma", c.sigma);
  read(j, "wavenumber", c.wavenumber);
  read(j, "wavenumbers", c.wavenumbers);
  read(j, "normalize_modes", c.normalize_modes);
  read(j, "perturbation_mode", c.perturbation_mode);
  read(j, "perturbation_amplitude", c.perturbation_amplitude);
  read(j, "tau", c.tau);
  read(j, "n_steps", c.n_steps);
  read(j, "t_final", c.t_final);
  read(j, "mollify_eps", c.mollify_eps);
  read(j, "mollifier_taper", c.mollifier_taper);
  read(j, "krasny_delta", c.krasny_delta);
  read(j, "blowup_factor", c.blowup_factor);
  read(j, "record_every", c.record_every);
  read(j, "snapshot_times", c.snapshot_times);
  read(j, "ladder", c.ladder);
  read(j, "reference_n_steps", c.reference_n_steps);
  read(j, "amplitudes", c.amplitudes);
  read(j, "xi_max", c.xi_max);
  read(j, "multiplier_w", c.multiplier_w);
  read(j, "multiplier_tau", c.multiplier_tau);
  read(j, "multiplier_k", c.multiplier_k);
  read(j, "output", c.output);
  read(j, "snapshot_prefix", c.snapshot_prefix);
  read(j, "blowup_json", c.blowup_json);
  read(j, "orders_json", c.orders_json);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["model"] = model_name(c.model);
  j["n_points"] = c.n_points;
  j["ic"] = profile_name(c.profile);
  j["amplitude"] = c.amplitude;
  j["sigma"] = c.sigma;
  j["wavenumber"] = c.wavenumber;
  j["wavenumbers"] = c.wavenumbers;
  j["normalize_modes"] = c.normalize_modes;
  if (c.perturbation_mode) j["perturbation_mode"] = *c.perturbation_mode;
  j["perturbation_amplitude"] = c.perturbation_amplitude;
  if (c.tau) j["tau"] = *c.tau;
  if (c.n_steps) j["n_steps"] = *c.n_steps;
  if (c.t_final) j["t_final"] = *c.t_final;
  if (c.mollify_eps) j["mollify_eps"] = *c.mollify_eps;
  j["mollifier_taper"] = c.mollifier_taper;
  if (c.krasny_delta) j["krasny_delta"] = *c.krasny_delta;
  j["blowup_factor"] = c.blowup_factor;
  j["record_every"] = c.record_every;
  j["snapshot_times"] = c.snapshot_times;
  j["ladder"] = c.ladder;
  j["reference_n_steps"] = c.reference_n_steps;
  j["amplitudes"] = c.amplitudes;
  j["xi_max"] = c.xi_max;
  j["multiplier_w"] = c.multiplier_w;
  j["multiplier_tau"] = c.multiplier_tau;
  j["multiplier_k"] = c.multiplier_k;
  j["output"] = c.output;
  j["snapshot_prefix"] = c.snapshot_prefix;
  j["blowup_json"] = c.blowup_json;
  j["orders_json"] = c.orders_json;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

Timing resolve_timing(const ExperimentConfig& c) {
  if (c.t_final) {
    if (c.tau.has_value() == c.n_steps.has_value())
      throw ConfigError("give exactly one of tau and n_steps together with t_final");
    if (!(*c.t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (c.tau) {
      if (!(*c.tau > 0.0)) throw ConfigError("tau must be positive");
      try {
        return {*c.tau, step_count(*c.t_final, *c.tau), *c.t_final};
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (*c.n_steps < 1) throw ConfigError("n_steps must be positive");
    return {*c.t_final / static_cast<double>(*c.n_steps), *c.n_steps, *c.t_final};
  }
  if (!c.tau || !c.n_steps) throw ConfigError("give t_final with tau or n_steps, or both tau and n_steps");
  if (!(*c.tau > 0.0) || *c.n_steps < 1) throw ConfigError("tau and n_steps must be positive");
  return {*c.tau, *c.n_steps, *c.tau * static_cast<double>(*c.n_steps)};
}

ModelSpec make_model(const ExperimentConfig& c) {
  switch (c.model) {
  case ModelKind::PseudoAttractive: return ModelSpec::pseudo_attractive();
  case ModelKind::ThinFilm: return ModelSpec::thin_film();
  case ModelKind::Cubic: return ModelSpec::cubic();
  }
  throw ConfigError("unknown model");
}

InitialCondition make_initial_condition(const ExperimentConfig& c) {
  InitialCondition ic{Gaussian{c.amplitude, c.sigma}, std::nullopt};
  if (c.profile == ProfileKind::PlaneWave) ic.profile = PlaneWave{c.amplitude, c.wavenumber};
  if (c.profile == ProfileKind::MultiMode) ic.profile = MultiMode{c.amplitude, c.wavenumbers, c.normalize_modes};
  if (c.perturbation_mode) ic.perturbation = Perturbation{*c.perturbation_mode, c.perturbation_amplitude};
  return ic;
}

StepperConfig make_stepper_config(const ExperimentConfig& c, double tau) {
  StepperConfig s;
  s.tau = tau;
  s.mollify_eps = c.mollify_eps;
  s.mollifier_shape = c.mollifier_taper ? MollifierShape::RaisedCosine : MollifierShape::Sharp;
  s.krasny_delta = c.krasny_delta;
  s.blowup_factor = c.blowup_factor;
  s.record_every = c.record_every;
  s.snapshot_times = c.snapshot_times;
  return s;
}

void validate(const ExperimentConfig& c) {
  std::optional<Grid> grid;
  try {
    grid.emplace(c.n_points);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto check_stepper = [&](double tau) {
    try {
      make_stepper_config(c, tau).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };
  const auto check_ic = [&] {
    try {
      (void)build_initial_condition(make_initial_condition(c), *grid);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };

  switch (c.experiment) {
  case ExperimentKind::Simulate: {
    const Timing t = resolve_timing(c);
    check_stepper(t.tau);
    check_ic();
    if (c.output.empty()) throw ConfigError("simulate needs an output path");
    for (double s : c.snapshot_times)
      if (s < 0.0 || s > t.t_final) throw ConfigError("snapshot time outside [0, t_final]");
    break;
  }
  case ExperimentKind::Converge: {
    if (!c.t_final || !(*c.t_final > 0.0)) throw ConfigError("converge needs a positive t_final");
    if (c.tau || c.n_steps) throw ConfigError("converge takes its step counts from ladder, not tau/n_steps");
    if (c.ladder.empty()) throw ConfigError("converge needs a non-empty ladder");
    for (std::size_t i = 0; i < c.ladder.size(); ++i) {
      if (c.ladder[i] < 1) throw ConfigError("ladder entries must be positive");
      if (i > 0 && c.ladder[i] <= c.ladder[i - 1]) throw ConfigError("ladder must be strictly increasing");
    }
    if (c.reference_n_steps <= c.ladder.back())
      throw ConfigError("reference_n_steps must exceed every ladder entry");
    check_stepper(*c.t_final / static_cast<double>(c.reference_n_steps));
    check_ic();
    if (c.output.empty()) throw ConfigError("converge needs an output path");
    break;
  }
  case ExperimentKind::Stability:
    if (c.amplitudes.empty() && c.multiplier_w.empty())
      throw ConfigError("stability needs amplitudes or a multiplier grid");
    for (double a : c.amplitudes)
      if (!(a >= 0.0)) throw ConfigError("amplitudes must be non-negative");
    if (c.xi_max < 0) throw ConfigError("xi_max must be non-negative");
    if (!c.multiplier_w.empty() && (!(c.multiplier_tau > 0.0) || c.multiplier_k.empty()))
      throw ConfigError("multiplier grid needs multiplier_tau > 0 and multiplier_k");
    if (c.output.empty()) throw ConfigError("stability needs an output path");
    break;
  case ExperimentKind::PlaneWaveCheck: {
    const Timing t = resolve_timing(c);
    check_stepper(t.tau);
    if (2 * std::abs(c.wavenumber) >= c.n_points) throw ConfigError("plane-wave wavenumber must satisfy |k| < N/2");
    if (c.perturbation_mode && 2 * std::abs(*c.perturbation_mode) >= c.n_points)
      throw ConfigError("perturbation mode must satisfy |mode| < N/2");
    if (!(c.amplitude >= 0.0)) throw ConfigError("amplitude must be non-negative");
    break;
  }
  }

  check_writable(c.output, "output");
  check_writable(c.snapshot_prefix, "snapshot_prefix");
  check_writable(c.blowup_json, "blowup_json");
  check_writable(c.orders_json, "orders_json");
}

} // namespace qls
