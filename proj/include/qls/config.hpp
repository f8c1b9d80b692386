// Experiment configuration: a flat JSON document mirroring the fields below.
#pragma once

#include "qls/model.hpp"
#include "qls/splitting.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qls {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Simulate, Converge, Stability, PlaneWaveCheck };
enum class ModelKind { PseudoAttractive, ThinFilm, Cubic };
enum class ProfileKind { Gaussian, PlaneWave, MultiMode };

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Simulate;
  ModelKind model = ModelKind::PseudoAttractive;
  int n_points = 256;

  ProfileKind profile = ProfileKind::Gaussian;
  double amplitude = 0.2;
  double sigma = 0.2;
  int wavenumber = 1;
  std::vector<int> wavenumbers;
  bool normalize_modes = false;
  std::optional<int> perturbation_mode;
  double perturbation_amplitude = 1e-10;

  std::optional<double> tau;
  std::optional<long> n_steps;
  std::optional<double> t_final;
  std::optional<double> mollify_eps;
  bool mollifier_taper = false;
  std::optional<double> krasny_delta;
  double blowup_factor = 10.0;
  int record_every = 1;
  std::vector<double> snapshot_times;

  std::vector<long> ladder;
  long reference_n_steps = 0;

  std::vector<double> amplitudes;
  int xi_max = 0;  // 0: N/2 - 1
  std::vector<double> multiplier_w;
  double multiplier_tau = 1e-4;
  std::vector<int> multiplier_k;

  std::string output;
  std::string snapshot_prefix;
  std::string blowup_json;
  std::string orders_json;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError on inconsistent settings for the chosen experiment.
void validate(const ExperimentConfig& c);

ModelSpec make_model(const ExperimentConfig& c);
InitialCondition make_initial_condition(const ExperimentConfig& c);
StepperConfig make_stepper_config(const ExperimentConfig& c, double tau);

struct Timing {
  double tau;
  long n_steps;
  double t_final;
};

/// Resolves tau / N_t / T. With T given exactly one of tau, N_t must be set;
/// without T both must be set.
Timing resolve_timing(const ExperimentConfig& c);

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

} // namespace qls
