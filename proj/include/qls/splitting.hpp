// Strang splitting for the quasilinear Schrodinger family.
//
// One step of size tau:
//   u-  = exp(i tau/2 D2) u
//   u+  = u- exp(-i tau V[u-])          (V optionally mollified)
//   u+  = G_eps u+                      (mollified scheme only)
//   u'  = exp(i tau/2 D2) u+
//   u'  = Krasny(u')                    (optional)
//
// The middle stage preserves |u| nodewise, so with both filters off every
// stage is an isometry in L2.
#pragma once

#include "qls/model.hpp"
#include "qls/spectral.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qls {

struct StepperConfig {
  double tau = 1e-3;
  std::optional<double> mollify_eps;
  MollifierShape mollifier_shape = MollifierShape::Sharp;
  std::optional<double> krasny_delta;
  double blowup_factor = 10.0;
  int record_every = 1;
  std::vector<double> snapshot_times;

  /// Throws std::invalid_argument on tau <= 0, eps <= 0, delta outside
  /// (0, 1), blowup_factor <= 1 or record_every < 1.
  void validate() const;
};

/// Scratch space for repeated steps on one grid. Not shareable across threads.
class StrangStepper {
public:
  StrangStepper(ModelSpec model, StepperConfig cfg, Grid grid);

  /// Advances u by one step of size tau (any sign) in place.
  void step(Field& u, double tau);
  void step(Field& u) { step(u, cfg_.tau); }

  /// Same step driven from the spectrum of u, which is kept in sync. The
  /// state passes through one transform pair per step instead of two.
  void step(std::span<complex> spectrum, Field& u, double tau);

  /// Nonlinear stage only: u_j <- u_j exp(-i tau V_j).
  void phase(Field& u, double tau);

  const StepperConfig& config() const { return cfg_; }
  const ModelSpec& model() const { return model_; }

private:
  ModelSpec model_;
  StepperConfig cfg_;
  Grid grid_;
  std::vector<complex> work_;
};

Field nonlinear_phase_step(const ModelSpec& model, const Field& u, double tau,
                           std::optional<double> mollify_eps = std::nullopt);

/// One Strang step with cfg.tau. cfg is not validated here so that negative
/// steps can be taken.
Field strang_step(const ModelSpec& model, const Field& u, const StepperConfig& cfg);

struct DiagnosticSample {
  double t;
  double max_amplitude;
  double mass;
  double energy;
  double min_ellipticity;
};

struct Snapshot {
  double t;
  Field u;
};

enum class BlowupTrigger { Amplitude, NonFinite };

struct BlowupReport {
  double onset_time;
  long step;
  BlowupTrigger trigger;
  double max_amplitude;
  Field final_field;
};

struct SimulationRecord {
  std::vector<DiagnosticSample> samples;
  std::vector<Snapshot> snapshots;
  std::optional<BlowupReport> blowup;
  Field final_state;
  long steps_taken = 0;
  long steps_requested = 0;
  double tau = 0.0;
};

DiagnosticSample sample_diagnostics(const ModelSpec& model, const Field& u, double t);

/// Number of steps t_final / tau; throws std::invalid_argument unless it is
/// a positive integer to within 1e-9 relative.
long step_count(double t_final, double tau);

/// Called after every step (and once at step 0) with the current state.
using StepObserver = std::function<void(long step, double t, const Field& u)>;

/// Runs to t_final, recording diagnostics at t = 0, every record_every steps
/// and at t_final. Halts early when max |u| exceeds blowup_factor times its
/// initial value or a sample becomes non-finite.
SimulationRecord run_simulation(const ModelSpec& model, const Field& initial, const StepperConfig& cfg,
                                double t_final, const StepObserver& observer = {});
SimulationRecord run_simulation(const ModelSpec& model, const InitialCondition& ic, const Grid& grid,
                                const StepperConfig& cfg, double t_final);

enum class Advisory { Ok, Warn };

struct StabilityAdvisory {
  double ratio;  // tau / eps^(5/2)
  Advisory verdict;
};

/// Informational check of tau against eps^(5/2) (constant taken as 1).
StabilityAdvisory stability_advisory(double tau, double eps);

} // namespace qls
