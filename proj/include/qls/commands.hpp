// Experiment drivers behind the command-line front end.
#pragma once

#include "qls/config.hpp"
#include "qls/diagnostics.hpp"
#include "qls/stability.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qls {

enum ExitCode : int { ExitSuccess = 0, ExitConfigError = 2, ExitBlowup = 3, ExitReferenceFailure = 4 };

class ReferenceRunError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Worker count for independent runs: QLS_THREADS if set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
unsigned worker_count();

struct LadderRun {
  long n_steps;
  ErrorNorms errors;
  bool unstable;               // guard tripped or non-finite error
  std::optional<double> onset; // guard trip time
};

struct ConvergenceReport {
  double t_final;
  long reference_n_steps;
  std::vector<LadderRun> runs;
  std::optional<ConvergenceOrder> order;
  std::string notice;  // why the fit was skipped, if it was
};

/// Runs the ladder and the reference concurrently. Unstable rows are kept in
/// `runs` but left out of the fit. Throws ReferenceRunError if the reference
/// run trips the guard.
ConvergenceReport run_convergence(const ExperimentConfig& c);

struct PlaneWaveReport {
  double max_deviation;          // max over steps of the L2 error, unperturbed
  int perturbation_mode;
  double perturbation_amplitude;
  double initial_perturbation_energy;
  double max_growth;             // max_t |u - exact|^2 / initial
  double final_growth;
  bool halted;                   // perturbed run tripped the blow-up guard
};

/// Seed mode defaults to k + 2, the lowest mode that couples to the carrier.
PlaneWaveReport planewave_check(const ExperimentConfig& c);

struct MultiplierRow {
  double w;
  double tau;
  int k;
  SplitStepMultipliers m;
};

struct StabilityReport {
  int xi_max;
  std::vector<AmplitudeVerdict> verdicts;
  std::vector<MultiplierRow> multipliers;
};

StabilityReport stability_report(const ExperimentConfig& c);

// Each command validates the config, writes its files and returns an exit
// code. Progress and notices go to `log`.
int cmd_simulate(const ExperimentConfig& c, std::ostream& log);
int cmd_converge(const ExperimentConfig& c, std::ostream& log);
int cmd_stability(const ExperimentConfig& c, std::ostream& log);
int cmd_planewave_check(const ExperimentConfig& c, std::ostream& log);

/// Dispatches on c.experiment; config errors become ExitConfigError.
int run_experiment(const ExperimentConfig& c, std::ostream& log);

/// Writes `x,re_u,im_u,abs_u` rows.
void write_field_csv(const std::string& path, const Field& u);

} // namespace qls
