#include "qls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qls {

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit PlanPair(int n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    const unsigned flags = FFTW_ESTIMATE;
    forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!forward || !backward) throw std::runtime_error("FFTW planning failed");
  }
  ~PlanPair() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
};

const PlanPair& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

fftw_complex* as_fftw(std::span<complex> data) {
  return reinterpret_cast<fftw_complex*>(data.data());
}

void check_size(const Grid& grid, std::size_t n) {
  if (n != static_cast<std::size_t>(grid.size()))
    throw std::invalid_argument("sample count " + std::to_string(n) +
                                " does not match grid size " + std::to_string(grid.size()));
}

} // namespace

complex unit_phase(double theta) {
  complex c = std::polar(1.0, theta);
  // One Newton step on |c| = 1 removes the systematic modulus bias of sin/cos.
  return c * (1.5 - 0.5 * std::norm(c));
}

Grid::Grid(int n_points) : n_(n_points) {
  if (n_points < 8 || n_points % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n_points));
}

double Grid::dx() const { return 2.0 * std::numbers::pi / n_; }

double Grid::node(int j) const { return -std::numbers::pi + 2.0 * std::numbers::pi * j / n_; }

std::vector<double> Grid::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

int Grid::slot(int k) const {
  int s = k % n_;
  return s < 0 ? s + n_ : s;
}

Field::Field(Grid grid) : grid_(grid), values_(static_cast<std::size_t>(grid.size())) {}

Field::Field(Grid grid, std::vector<complex> values) : grid_(grid), values_(std::move(values)) {
  check_size(grid_, values_.size());
}

double Field::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("field grids differ");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("field grids differ");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(complex s, Field a) { return a *= s; }

Spectrum::Spectrum(Grid grid) : grid_(grid), coeffs_(static_cast<std::size_t>(grid.size())) {}

Spectrum::Spectrum(Grid grid, std::vector<complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  check_size(grid_, coeffs_.size());
}

// x_0 = -pi contributes exp(i k pi) = (-1)^k; k and its FFT slot share parity.
void forward_transform(const Grid& grid, std::span<complex> data) {
  check_size(grid, data.size());
  fftw_execute_dft(plans_for(grid.size()).forward, as_fftw(data), as_fftw(data));
  const double inv_n = 1.0 / grid.size();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= (i % 2 == 0) ? inv_n : -inv_n;
}

void inverse_transform(const Grid& grid, std::span<complex> data) {
  check_size(grid, data.size());
  for (std::size_t i = 1; i < data.size(); i += 2) data[i] = -data[i];
  fftw_execute_dft(plans_for(grid.size()).backward, as_fftw(data), as_fftw(data));
}

Spectrum to_spectrum(const Field& f) {
  Spectrum s(f.grid(), std::vector<complex>(f.values().begin(), f.values().end()));
  forward_transform(s.grid(), s.coeffs());
  return s;
}

Field to_physical(const Spectrum& s) {
  check_size(s.grid(), s.coeffs().size());
  Field f(s.grid(), std::vector<complex>(s.coeffs().begin(), s.coeffs().end()));
  inverse_transform(f.grid(), f.values());
  return f;
}

void differentiate_spectrum(std::span<complex> coeffs, const Grid& grid, int order) {
  check_size(grid, coeffs.size());
  if (order != 1 && order != 2)
    throw std::invalid_argument("spectral derivative order must be 1 or 2, got " + std::to_string(order));
  const int n = grid.size();
  for (int i = 0; i < n; ++i) {
    const double k = grid.wavenumber(i);
    if (order == 1)
      coeffs[i] = (k == grid.nyquist()) ? complex{} : complex(0.0, k) * coeffs[i];
    else
      coeffs[i] *= -k * k;
  }
}

Field spectral_derivative(const Field& f, int order) {
  Spectrum s = to_spectrum(f);
  differentiate_spectrum(s.coeffs(), s.grid(), order);
  return to_physical(s);
}

void propagate_spectrum(std::span<complex> coeffs, const Grid& grid, double t) {
  check_size(grid, coeffs.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double k = grid.wavenumber(i);
    coeffs[i] *= unit_phase(-k * k * t);
  }
}

Field free_propagator(const Field& f, double t) {
  Spectrum s = to_spectrum(f);
  propagate_spectrum(s.coeffs(), s.grid(), t);
  return to_physical(s);
}

long mollifier_cutoff(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollifier eps must be positive");
  const double inv = std::floor(1.0 / eps);
  return inv > 1e15 ? static_cast<long>(1e15) : static_cast<long>(inv);
}

void mollify_spectrum(std::span<complex> coeffs, const Grid& grid, double eps, MollifierShape shape) {
  check_size(grid, coeffs.size());
  const long kmax = mollifier_cutoff(eps);
  // Raised-cosine taper over the top 10% of retained modes.
  const double taper_start = 0.9 * static_cast<double>(kmax);
  for (int i = 0; i < grid.size(); ++i) {
    const long k = std::labs(grid.wavenumber(i));
    if (k > kmax) {
      coeffs[i] = 0.0;
    } else if (shape == MollifierShape::RaisedCosine && k > taper_start) {
      const double s = (k - taper_start) / (kmax + 1 - taper_start);
      coeffs[i] *= 0.5 * (1.0 + std::cos(std::numbers::pi * s));
    }
  }
}

Field apply_mollifier(const Field& f, double eps, MollifierShape shape) {
  Spectrum s = to_spectrum(f);
  mollify_spectrum(s.coeffs(), s.grid(), eps, shape);
  return to_physical(s);
}

void krasny_truncate(std::span<complex> coeffs, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("Krasny threshold must lie in (0, 1)");
  double peak = 0.0;
  for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
  const double cut = delta * peak;
  for (auto& c : coeffs)
    if (std::abs(c) < cut) c = 0.0;
}

Field krasny_filter(const Field& f, double delta) {
  Spectrum s = to_spectrum(f);
  krasny_truncate(s.coeffs(), delta);
  return to_physical(s);
}

Field dealias_two_thirds(const Field& f) {
  Spectrum s = to_spectrum(f);
  const int n = s.size();
  for (int i = 0; i < n; ++i)
    if (3 * std::abs(s.grid().wavenumber(i)) > n) s.coeffs()[i] = 0.0;
  return to_physical(s);
}

double l2_norm(const Spectrum& s) {
  double sum = 0.0;
  for (const auto& c : s.coeffs()) sum += std::norm(c);
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

double l2_norm(const Field& f) { return l2_norm(to_spectrum(f)); }

double h1_seminorm(const Field& f) {
  Spectrum s = to_spectrum(f);
  differentiate_spectrum(s.coeffs(), s.grid(), 1);
  return l2_norm(s);
}

} // namespace qls
