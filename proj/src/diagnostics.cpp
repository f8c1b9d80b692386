#include "qls/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qls {

double mass(const Field& u) {
  const double n = l2_norm(u);
  return n * n;
}

double energy(const Field& u) { return energy(ModelSpec::pseudo_attractive(), u); }

double energy(const ModelSpec& model, const Field& u) {
  const Grid& grid = u.grid();
  const int n = grid.size();
  const double dx = grid.dx();

  // Gradient terms go through D2 so the Nyquist mode is weighted as in the flow.
  const Spectrum s = to_spectrum(u);
  double kinetic = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = grid.wavenumber(i);
    kinetic += k * k * std::norm(s.coeffs()[i]);
  }
  kinetic *= std::numbers::pi;

  const Polynomial big_f = model.f().antiderivative();
  std::vector<complex> gs(static_cast<std::size_t>(n));
  double potential = 0.0;
  for (int j = 0; j < n; ++j) {
    const double rho = std::norm(u[j]);
    potential += big_f(rho);
    gs[j] = model.g()(rho);
  }
  potential *= 0.5 * dx;

  double quasilinear = 0.0;
  if (model.quasilinear_sign() != 0) {
    std::vector<complex> gdd = gs;
    forward_transform(grid, gdd);
    differentiate_spectrum(gdd, grid, 2);
    inverse_transform(grid, gdd);
    for (int j = 0; j < n; ++j) quasilinear += gs[j].real() * gdd[j].real();
    quasilinear *= 0.25 * model.quasilinear_sign() * dx;
  }
  return kinetic + potential + quasilinear;
}

ErrorNorms error_norms(const Field& u, const Field& reference) {
  if (!(u.grid() == reference.grid())) throw std::invalid_argument("error_norms: grids differ");
  const Field diff = u - reference;
  return {l2_norm(diff), h1_seminorm(diff)};
}

void ConvergenceTable::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].err_l2 > 0.0) || !(rows[i].err_h1 > 0.0))
      throw std::invalid_argument("convergence errors must be positive");
    if (i > 0 && rows[i].n_steps <= rows[i - 1].n_steps)
      throw std::invalid_argument("convergence step counts must strictly increase");
  }
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

} // namespace

ConvergenceOrder fit_order(const ConvergenceTable& table) {
  if (table.rows.size() < 3) throw std::invalid_argument("fit_order needs at least three rows");
  table.validate();
  // log tau = log T - log N_t; the constant offset does not affect the slope.
  std::vector<double> log_tau, log_l2, log_h1;
  for (const auto& r : table.rows) {
    log_tau.push_back(-std::log(static_cast<double>(r.n_steps)));
    log_l2.push_back(std::log(r.err_l2));
    log_h1.push_back(std::log(r.err_h1));
  }
  return {ls_slope(log_tau, log_l2), ls_slope(log_tau, log_h1)};
}

std::vector<double> halving_ratios(const ConvergenceTable& table, bool h1) {
  std::vector<double> out;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    if (b.n_steps != 2 * a.n_steps) continue;
    out.push_back(h1 ? a.err_h1 / b.err_h1 : a.err_l2 / b.err_l2);
  }
  return out;
}

} // namespace qls
