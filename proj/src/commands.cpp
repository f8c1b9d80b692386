#include "qls/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace qls {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  p.replace_extension();
  return p.string() + suffix;
}

void write_json(const std::string& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

// Sum of |a_j - b_j|^2 dx; equal to the Parseval form for grid functions.
double squared_distance(const Field& a, const Field& b) {
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += std::norm(a[j] - b[j]);
  return s * a.grid().dx();
}

// Runs jobs [0, n) on up to worker_count() threads; rethrows the first failure.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& job) {
  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return ExitConfigError;
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("QLS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_field_csv(const std::string& path, const Field& u) {
  auto out = open_output(path);
  out << "x,re_u,im_u,abs_u\n";
  for (int j = 0; j < u.size(); ++j)
    out << num(u.grid().node(j)) << ',' << num(u[j].real()) << ',' << num(u[j].imag()) << ','
        << num(std::abs(u[j])) << '\n';
}

ConvergenceReport run_convergence(const ExperimentConfig& c) {
  validate(c);
  const double t_final = *c.t_final;
  const ModelSpec model = make_model(c);
  const Grid grid(c.n_points);
  const Field initial = build_initial_condition(make_initial_condition(c), grid);

  // Slot 0 is the reference; the ladder follows.
  std::vector<long> steps{c.reference_n_steps};
  steps.insert(steps.end(), c.ladder.begin(), c.ladder.end());
  std::vector<std::optional<SimulationRecord>> records(steps.size());
  parallel_for(steps.size(), [&](std::size_t i) {
    StepperConfig cfg = make_stepper_config(c, t_final / static_cast<double>(steps[i]));
    cfg.record_every = static_cast<int>(std::min<long>(steps[i], 1L << 30));
    cfg.snapshot_times.clear();
    records[i] = run_simulation(model, initial, cfg, t_final);
  });

  const SimulationRecord& reference = *records[0];
  if (reference.blowup)
    throw ReferenceRunError("reference run (N_t = " + std::to_string(c.reference_n_steps) +
                            ") tripped the blow-up guard at t = " + num(reference.blowup->onset_time));

  ConvergenceReport report{t_final, c.reference_n_steps, {}, std::nullopt, {}};
  ConvergenceTable table{t_final, {}};
  const double ref_norm = l2_norm(reference.final_state);
  bool roundoff = false;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const SimulationRecord& r = *records[i];
    LadderRun run{steps[i], {std::nan(""), std::nan("")}, true, std::nullopt};
    if (r.blowup) {
      run.onset = r.blowup->onset_time;
    } else {
      run.errors = error_norms(r.final_state, reference.final_state);
      run.unstable = !std::isfinite(run.errors.l2) || !std::isfinite(run.errors.h1);
    }
    if (!run.unstable) {
      if (!(run.errors.l2 > 1e-11 * ref_norm) || !(run.errors.h1 > 0.0)) roundoff = true;
      table.rows.push_back({run.n_steps, run.errors.l2, run.errors.h1});
    }
    report.runs.push_back(run);
  }

  if (roundoff)
    report.notice = "errors at round-off level; order fit skipped";
  else if (table.rows.size() < 3)
    report.notice = "fewer than three stable ladder runs; order fit skipped";
  else
    report.order = fit_order(table);
  return report;
}

PlaneWaveReport planewave_check(const ExperimentConfig& c) {
  validate(c);
  const Timing timing = resolve_timing(c);
  const ModelSpec model = make_model(c);
  const Grid grid(c.n_points);
  const double a = c.amplitude;
  const int k = c.wavenumber;
  StepperConfig cfg = make_stepper_config(c, timing.tau);
  cfg.record_every = static_cast<int>(std::min<long>(timing.n_steps, 1L << 30));
  cfg.snapshot_times.clear();

  PlaneWaveReport report{};
  run_simulation(model, exact_plane_wave(grid, a, k, 0.0), cfg, timing.t_final,
                 [&](long, double t, const Field& u) {
                   report.max_deviation =
                       std::max(report.max_deviation, std::sqrt(squared_distance(u, exact_plane_wave(grid, a, k, t))));
                 });

  int mode = c.perturbation_mode.value_or(k + 2);
  if (!c.perturbation_mode && 2 * std::abs(mode) >= grid.size()) mode = k - 2;
  report.perturbation_mode = mode;
  report.perturbation_amplitude = c.perturbation_amplitude;

  Field seeded = exact_plane_wave(grid, a, k, 0.0);
  for (int j = 0; j < grid.size(); ++j) seeded[j] += std::polar(c.perturbation_amplitude, mode * grid.node(j));
  report.initial_perturbation_energy = squared_distance(seeded, exact_plane_wave(grid, a, k, 0.0));
  const double e0 = report.initial_perturbation_energy;

  double last = 1.0;
  const SimulationRecord rec =
      run_simulation(model, seeded, cfg, timing.t_final, [&](long, double t, const Field& u) {
        last = squared_distance(u, exact_plane_wave(grid, a, k, t)) / e0;
        report.max_growth = std::max(report.max_growth, last);
      });
  if (rec.blowup) {
    report.halted = true;
    last = rec.blowup->final_field.all_finite()
               ? squared_distance(rec.blowup->final_field, exact_plane_wave(grid, a, k, rec.blowup->onset_time)) / e0
               : std::numeric_limits<double>::infinity();
    report.max_growth = std::max(report.max_growth, last);
  }
  report.final_growth = last;
  return report;
}

StabilityReport stability_report(const ExperimentConfig& c) {
  validate(c);
  StabilityReport report;
  report.xi_max = c.xi_max > 0 ? c.xi_max : c.n_points / 2 - 1;
  if (!c.amplitudes.empty()) report.verdicts = stability_threshold_scan(c.amplitudes, report.xi_max);
  for (double w : c.multiplier_w)
    for (int k : c.multiplier_k)
      report.multipliers.push_back({w, c.multiplier_tau, k, split_step_mode_growth(w, c.multiplier_tau, k)});
  return report;
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    validate(c);
    const Timing timing = resolve_timing(c);
    const Grid grid(c.n_points);
    const SimulationRecord rec = run_simulation(make_model(c), make_initial_condition(c), grid,
                                                make_stepper_config(c, timing.tau), timing.t_final);

    auto out = open_output(c.output);
    out << "t,max_amp,mass,energy,min_ellipticity\n";
    for (const auto& s : rec.samples)
      out << num(s.t) << ',' << num(s.max_amplitude) << ',' << num(s.mass) << ',' << num(s.energy) << ','
          << num(s.min_ellipticity) << '\n';

    const std::string prefix = c.snapshot_prefix.empty() ? sibling(c.output, "_snapshot") : c.snapshot_prefix;
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i)
      write_field_csv(prefix + "_" + std::to_string(i) + ".csv", rec.snapshots[i].u);

    log << "simulate: " << rec.steps_taken << " of " << rec.steps_requested << " steps, tau = " << num(timing.tau)
        << ", " << rec.samples.size() << " samples, " << rec.snapshots.size() << " snapshots\n";
    if (!rec.blowup) return static_cast<int>(ExitSuccess);

    const BlowupReport& b = *rec.blowup;
    const std::string sidecar = c.blowup_json.empty() ? sibling(c.output, ".blowup.json") : c.blowup_json;
    const std::string field_path = sibling(sidecar, "_field.csv");
    write_field_csv(field_path, b.final_field);
    write_json(sidecar, {{"onset_time", b.onset_time},
                         {"step", b.step},
                         {"trigger", b.trigger == BlowupTrigger::Amplitude ? "amplitude" : "non_finite"},
                         {"max_amplitude", std::isfinite(b.max_amplitude) ? json(b.max_amplitude) : json(nullptr)},
                         {"blowup_factor", c.blowup_factor},
                         {"tau", timing.tau},
                         {"n_points", c.n_points},
                         {"final_field", field_path}});
    log << "simulate: blow-up guard tripped at t = " << num(b.onset_time) << " (step " << b.step << "); report in "
        << sidecar << '\n';
    return static_cast<int>(ExitBlowup);
  });
}

int cmd_converge(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    ConvergenceReport report;
    try {
      report = run_convergence(c);
    } catch (const ReferenceRunError& e) {
      log << "converge: " << e.what() << '\n';
      return static_cast<int>(ExitReferenceFailure);
    }

    auto out = open_output(c.output);
    out << "N_t,err_l2,err_h1,status\n";
    for (const auto& r : report.runs)
      out << r.n_steps << ',' << num(r.errors.l2) << ',' << num(r.errors.h1) << ',' << (r.unstable ? "unstable" : "ok")
          << '\n';

    json orders = {{"t_final", report.t_final},
                   {"n_points", c.n_points},
                   {"reference_n_steps", report.reference_n_steps},
                   {"mollify_eps", optional_json(c.mollify_eps)},
                   {"krasny_delta", optional_json(c.krasny_delta)},
                   {"filters", (c.mollify_eps || c.krasny_delta) ? "on" : "off"},
                   {"blowup_factor", c.blowup_factor},
                   {"order_l2", report.order ? json(report.order->l2) : json(nullptr)},
                   {"order_h1", report.order ? json(report.order->h1) : json(nullptr)},
                   {"notice", report.notice}};
    write_json(c.orders_json.empty() ? sibling(c.output, ".orders.json") : c.orders_json, orders);

    for (const auto& r : report.runs)
      if (r.unstable) log << "converge: N_t = " << r.n_steps << " unstable\n";
    if (report.order)
      log << "converge: fitted order l2 = " << num(report.order->l2) << ", h1 = " << num(report.order->h1) << '\n';
    else
      log << "converge: " << report.notice << '\n';
    return static_cast<int>(ExitSuccess);
  });
}

int cmd_stability(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    const StabilityReport report = stability_report(c);
    auto out = open_output(c.output);
    out << "a,unstable,most_unstable_xi,growth_rate\n";
    for (const auto& v : report.verdicts)
      out << num(v.a) << ',' << (v.unstable ? 1 : 0) << ',' << v.most_unstable_xi << ',' << num(v.growth_rate) << '\n';
    if (!report.multipliers.empty()) {
      auto mout = open_output(sibling(c.output, "_multipliers.csv"));
      mout << "w,tau,k,re_plus,im_plus,re_minus,im_minus,exponential_growth\n";
      for (const auto& r : report.multipliers)
        mout << num(r.w) << ',' << num(r.tau) << ',' << r.k << ',' << num(r.m.plus.real()) << ','
             << num(r.m.plus.imag()) << ',' << num(r.m.minus.real()) << ',' << num(r.m.minus.imag()) << ','
             << (r.m.exponential_growth ? 1 : 0) << '\n';
    }
    log << "stability: " << report.verdicts.size() << " amplitudes scanned to xi = " << report.xi_max << ", "
        << report.multipliers.size() << " multiplier rows\n";
    return static_cast<int>(ExitSuccess);
  });
}

int cmd_planewave_check(const ExperimentConfig& c, std::ostream& log) {
  return guarded(log, [&] {
    const PlaneWaveReport r = planewave_check(c);
    const json j = {{"amplitude", c.amplitude},
                    {"wavenumber", c.wavenumber},
                    {"n_points", c.n_points},
                    {"max_deviation", r.max_deviation},
                    {"perturbation_mode", r.perturbation_mode},
                    {"perturbation_amplitude", r.perturbation_amplitude},
                    {"initial_perturbation_energy", r.initial_perturbation_energy},
                    {"max_growth", std::isfinite(r.max_growth) ? json(r.max_growth) : json(nullptr)},
                    {"final_growth", std::isfinite(r.final_growth) ? json(r.final_growth) : json(nullptr)},
                    {"halted", r.halted}};
    if (c.output.empty())
      log << j.dump(2) << '\n';
    else
      write_json(c.output, j);
    log << "planewave-check: max deviation " << num(r.max_deviation) << ", perturbation growth " << num(r.max_growth)
        << '\n';
    return static_cast<int>(ExitSuccess);
  });
}

int run_experiment(const ExperimentConfig& c, std::ostream& log) {
  switch (c.experiment) {
  case ExperimentKind::Simulate: return cmd_simulate(c, log);
  case ExperimentKind::Converge: return cmd_converge(c, log);
  case ExperimentKind::Stability: return cmd_stability(c, log);
  case ExperimentKind::PlaneWaveCheck: return cmd_planewave_check(c, log);
  }
  return ExitConfigError;
}

} // namespace qls
