#include "qls/splitting.hpp"

#include "qls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qls {

void StepperConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (mollify_eps && !(*mollify_eps > 0.0)) throw std::invalid_argument("mollifier eps must be positive");
  if (krasny_delta && !(*krasny_delta > 0.0 && *krasny_delta < 1.0))
    throw std::invalid_argument("Krasny threshold must lie in (0, 1)");
  if (!(blowup_factor > 1.0)) throw std::invalid_argument("blow-up factor must exceed 1");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
}

StrangStepper::StrangStepper(ModelSpec model, StepperConfig cfg, Grid grid)
    : model_(std::move(model)), cfg_(std::move(cfg)), grid_(grid), work_(static_cast<std::size_t>(grid.size())) {}

void StrangStepper::phase(Field& u, double tau) {
  const std::vector<double> v = potential_field(model_, u);
  if (cfg_.mollify_eps) {
    for (std::size_t j = 0; j < v.size(); ++j) work_[j] = v[j];
    forward_transform(grid_, work_);
    mollify_spectrum(work_, grid_, *cfg_.mollify_eps, cfg_.mollifier_shape);
    inverse_transform(grid_, work_);
    for (int j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, -tau * work_[j].real());
  } else {
    for (int j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, -tau * v[j]);
  }
}

void StrangStepper::step(Field& u, double tau) {
  if (!(u.grid() == grid_)) throw std::invalid_argument("stepper grid does not match field");
  std::vector<complex> spec(u.values().begin(), u.values().end());
  forward_transform(grid_, spec);
  step(spec, u, tau);
}

void StrangStepper::step(std::span<complex> spec, Field& u, double tau) {
  auto values = u.values();
  std::copy(spec.begin(), spec.end(), values.begin());
  propagate_spectrum(values, grid_, 0.5 * tau);
  inverse_transform(grid_, values);

  phase(u, tau);

  forward_transform(grid_, values);
  if (cfg_.mollify_eps) mollify_spectrum(values, grid_, *cfg_.mollify_eps, cfg_.mollifier_shape);
  propagate_spectrum(values, grid_, 0.5 * tau);
  if (cfg_.krasny_delta) krasny_truncate(values, *cfg_.krasny_delta);
  std::copy(values.begin(), values.end(), spec.begin());
  inverse_transform(grid_, values);
}

Field nonlinear_phase_step(const ModelSpec& model, const Field& u, double tau, std::optional<double> mollify_eps) {
  StepperConfig cfg;
  cfg.mollify_eps = mollify_eps;
  StrangStepper stepper(model, cfg, u.grid());
  Field out = u;
  stepper.phase(out, tau);
  return out;
}

Field strang_step(const ModelSpec& model, const Field& u, const StepperConfig& cfg) {
  StrangStepper stepper(model, cfg, u.grid());
  Field out = u;
  stepper.step(out);
  return out;
}

DiagnosticSample sample_diagnostics(const ModelSpec& model, const Field& u, double t) {
  return {t, u.max_abs(), mass(u), energy(model, u), ellipticity_indicator(u).minimum};
}

long step_count(double t_final, double tau) {
  if (!(t_final > 0.0) || !(tau > 0.0)) throw std::invalid_argument("t_final and tau must be positive");
  const double ratio = t_final / tau;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw std::invalid_argument("t_final = " + std::to_string(t_final) + " is not an integer multiple of tau = " +
                                std::to_string(tau));
  return n;
}

SimulationRecord run_simulation(const ModelSpec& model, const Field& initial, const StepperConfig& cfg,
                                double t_final, const StepObserver& observer) {
  cfg.validate();
  const long n_steps = step_count(t_final, cfg.tau);
  if (!initial.all_finite()) throw std::invalid_argument("initial data contains non-finite samples");

  std::vector<long> snapshot_steps;
  for (double ts : cfg.snapshot_times) {
    if (ts < 0.0 || ts > t_final * (1.0 + 1e-12))
      throw std::invalid_argument("snapshot time " + std::to_string(ts) + " outside [0, t_final]");
    snapshot_steps.push_back(std::lround(ts / cfg.tau));
  }

  SimulationRecord rec{{}, {}, std::nullopt, initial};
  rec.steps_requested = n_steps;
  rec.tau = cfg.tau;

  auto time_at = [&](long n) { return n == n_steps ? t_final : static_cast<double>(n) * cfg.tau; };
  auto take_snapshots = [&](long n, const Field& u) {
    for (long s : snapshot_steps)
      if (s == n) rec.snapshots.push_back({time_at(n), u});
  };

  Field u = initial;
  const double initial_max = u.max_abs();
  const double amplitude_limit = cfg.blowup_factor * initial_max;
  StrangStepper stepper(model, cfg, u.grid());
  std::vector<complex> spec(u.values().begin(), u.values().end());
  forward_transform(u.grid(), spec);

  rec.samples.push_back(sample_diagnostics(model, u, 0.0));
  take_snapshots(0, u);
  if (observer) observer(0, 0.0, u);

  for (long n = 1; n <= n_steps; ++n) {
    stepper.step(spec, u, cfg.tau);
    const double t = time_at(n);
    rec.steps_taken = n;

    const bool finite = u.all_finite();
    const double amp = finite ? u.max_abs() : std::numeric_limits<double>::infinity();
    if (!finite || amp > amplitude_limit) {
      rec.blowup = BlowupReport{t, n, finite ? BlowupTrigger::Amplitude : BlowupTrigger::NonFinite, amp, u};
      if (finite) rec.samples.push_back(sample_diagnostics(model, u, t));
      else rec.samples.push_back({t, amp, std::nan(""), std::nan(""), -std::numeric_limits<double>::infinity()});
      break;
    }
    if (n % cfg.record_every == 0 || n == n_steps) rec.samples.push_back(sample_diagnostics(model, u, t));
    take_snapshots(n, u);
    if (observer) observer(n, t, u);
  }
  rec.final_state = std::move(u);
  return rec;
}

SimulationRecord run_simulation(const ModelSpec& model, const InitialCondition& ic, const Grid& grid,
                                const StepperConfig& cfg, double t_final) {
  return run_simulation(model, build_initial_condition(ic, grid), cfg, t_final);
}

StabilityAdvisory stability_advisory(double tau, double eps) {
  if (!(tau > 0.0) || !(eps > 0.0)) throw std::invalid_argument("tau and eps must be positive");
  const double ratio = tau / std::pow(eps, 2.5);
  return {ratio, ratio > 1.0 ? Advisory::Warn : Advisory::Ok};
}

} // namespace qls
