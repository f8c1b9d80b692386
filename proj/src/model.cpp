#include "qls/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qls {

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> a(coeffs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(a));
}

namespace {

void check_sign(int sign) {
  if (sign < -1 || sign > 1)
    throw std::invalid_argument("quasilinear sign must be -1, 0 or +1, got " + std::to_string(sign));
}

void check_derivative(const Polynomial& g, const Polynomial& g_prime) {
  constexpr double h = 1e-5;
  for (double s : {0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) {
    const double fd = (g(s + h) - g(s - h)) / (2.0 * h);
    if (std::abs(fd - g_prime(s)) > 1e-8 * std::max(1.0, std::abs(fd)))
      throw std::invalid_argument("g' is not the derivative of g");
  }
}

} // namespace

ModelSpec::ModelSpec(Polynomial f, Polynomial g, int quasilinear_sign)
    : f_(std::move(f)), g_(std::move(g)), sign_(quasilinear_sign) {
  check_sign(sign_);
  g_prime_ = g_.derivative();
}

ModelSpec::ModelSpec(Polynomial f, Polynomial g, Polynomial g_prime, int quasilinear_sign)
    : f_(std::move(f)), g_(std::move(g)), g_prime_(std::move(g_prime)), sign_(quasilinear_sign) {
  check_sign(sign_);
  check_derivative(g_, g_prime_);
}

ModelSpec ModelSpec::pseudo_attractive() { return {Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0}), +1}; }
ModelSpec ModelSpec::thin_film() { return {Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0}), -1}; }
ModelSpec ModelSpec::cubic() { return {Polynomial({0.0, 1.0}), Polynomial({0.0, 1.0}), 0}; }

std::vector<double> potential_field(const ModelSpec& model, const Field& u) {
  const int n = u.size();
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<complex> gdd(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) gdd[j] = model.g()(std::norm(u[j]));
  if (model.quasilinear_sign() != 0) {
    forward_transform(u.grid(), gdd);
    differentiate_spectrum(gdd, u.grid(), 2);
    inverse_transform(u.grid(), gdd);
  }
  for (int j = 0; j < n; ++j) {
    const double rho = std::norm(u[j]);
    v[j] = model.f()(rho);
    if (model.quasilinear_sign() != 0)
      v[j] += model.quasilinear_sign() * model.g_prime()(rho) * gdd[j].real();
  }
  return v;
}

double plane_wave_frequency(double a, int k) { return static_cast<double>(k) * k + a * a; }

Field exact_plane_wave(const Grid& grid, double a, int k, double t) {
  if (2 * std::abs(k) >= grid.size())
    throw std::invalid_argument("plane-wave wavenumber " + std::to_string(k) + " not representable");
  const double omega = plane_wave_frequency(a, k);
  Field u(grid);
  for (int j = 0; j < grid.size(); ++j) u[j] = std::polar(a, k * grid.node(j) - omega * t);
  return u;
}

namespace {

void check_wavenumber(const Grid& grid, int k) {
  if (2 * std::abs(k) >= grid.size())
    throw std::invalid_argument("wavenumber " + std::to_string(k) + " not representable on a grid of " +
                                std::to_string(grid.size()) + " points");
}

struct ProfileSampler {
  const Grid& grid;

  Field operator()(const Gaussian& g) const {
    if (!(g.sigma > 0.0)) throw std::invalid_argument("Gaussian width must be positive");
    Field u(grid);
    for (int j = 0; j < grid.size(); ++j) {
      const double x = grid.node(j);
      u[j] = g.amplitude * std::exp(-x * x / (2.0 * g.sigma * g.sigma));
    }
    return u;
  }

  Field operator()(const PlaneWave& p) const {
    check_wavenumber(grid, p.wavenumber);
    Field u(grid);
    for (int j = 0; j < grid.size(); ++j) u[j] = std::polar(p.amplitude, p.wavenumber * grid.node(j));
    return u;
  }

  Field operator()(const MultiMode& m) const {
    if (m.wavenumbers.empty()) throw std::invalid_argument("multi-mode data needs at least one wavenumber");
    for (std::size_t i = 0; i < m.wavenumbers.size(); ++i) {
      check_wavenumber(grid, m.wavenumbers[i]);
      if (m.wavenumbers[i] < 0) throw std::invalid_argument("multi-mode wavenumbers must be non-negative");
      if (i > 0 && m.wavenumbers[i] <= m.wavenumbers[i - 1])
        throw std::invalid_argument("multi-mode wavenumbers must be distinct and increasing");
    }
    const double a = m.normalized ? m.amplitude / static_cast<double>(m.wavenumbers.size()) : m.amplitude;
    Field u(grid);
    for (int j = 0; j < grid.size(); ++j)
      for (int k : m.wavenumbers) u[j] += std::polar(a, k * grid.node(j));
    return u;
  }
};

} // namespace

Field build_initial_condition(const InitialCondition& ic, const Grid& grid) {
  Field u = std::visit(ProfileSampler{grid}, ic.profile);
  if (ic.perturbation) {
    check_wavenumber(grid, ic.perturbation->mode);
    for (int j = 0; j < grid.size(); ++j)
      u[j] += std::polar(ic.perturbation->amplitude, ic.perturbation->mode * grid.node(j));
  }
  return u;
}

Ellipticity ellipticity_indicator(const Field& u) {
  Ellipticity e{std::vector<double>(static_cast<std::size_t>(u.size())), 1.0};
  for (int j = 0; j < u.size(); ++j) e.values[j] = 1.0 - 2.0 * std::norm(u[j]);
  e.minimum = *std::min_element(e.values.begin(), e.values.end());
  return e;
}

} // namespace qls
