// Periodic grid on (-pi, pi], Fourier transforms and spectral operators.
//
// Spectral coefficients are Fourier-series coefficients:
//
//   uhat_k = (1/N) sum_j u_j exp(-i k x_j),   u_j = sum_k uhat_k exp(i k x_j)
//
// with x_j = -pi + 2 pi j / N and k in {-N/2, ..., N/2 - 1}. Coefficient
// storage follows FFT order (k = 0, 1, ..., N/2 - 1, -N/2, ..., -1).
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qls {

using complex = std::complex<double>;

class Grid {
public:
  /// Throws std::invalid_argument unless n_points is even and >= 8.
  explicit Grid(int n_points);

  int size() const { return n_; }
  double dx() const;
  double node(int j) const;
  std::vector<double> nodes() const;

  /// Signed wavenumber stored at FFT-order slot `index`.
  int wavenumber(int index) const { return index < n_ / 2 ? index : index - n_; }
  /// FFT-order slot of signed wavenumber k (taken modulo N).
  int slot(int k) const;
  int nyquist() const { return -n_ / 2; }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  int n_;
};

class Field {
public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<complex> values);

  const Grid& grid() const { return grid_; }
  int size() const { return grid_.size(); }

  std::span<const complex> values() const { return values_; }
  std::span<complex> values() { return values_; }
  const complex& operator[](int j) const { return values_[j]; }
  complex& operator[](int j) { return values_[j]; }

  double max_abs() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(complex s);

private:
  Grid grid_;
  std::vector<complex> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(complex s, Field a);

/// Fourier-series coefficients of a Field, in FFT order.
class Spectrum {
public:
  explicit Spectrum(Grid grid);
  Spectrum(Grid grid, std::vector<complex> coeffs);

  const Grid& grid() const { return grid_; }
  int size() const { return grid_.size(); }

  std::span<const complex> coeffs() const { return coeffs_; }
  std::span<complex> coeffs() { return coeffs_; }

  /// Coefficient of signed wavenumber k.
  const complex& at(int k) const { return coeffs_[grid_.slot(k)]; }
  complex& at(int k) { return coeffs_[grid_.slot(k)]; }

private:
  Grid grid_;
  std::vector<complex> coeffs_;
};

/// exp(i theta) with modulus rounded to 1.
complex unit_phase(double theta);

enum class MollifierShape { Sharp, RaisedCosine };

// In-place transforms on raw sample arrays of length grid.size(); these are
// what the time stepper uses to avoid reallocating per stage.
void forward_transform(const Grid& grid, std::span<complex> data);
void inverse_transform(const Grid& grid, std::span<complex> data);

Spectrum to_spectrum(const Field& f);
/// Throws std::invalid_argument if the coefficient count does not match.
Field to_physical(const Spectrum& s);

/// Multiplies mode k by (ik)^order. Odd orders zero the Nyquist mode.
/// Only orders 1 and 2 are supported; others throw std::invalid_argument.
Field spectral_derivative(const Field& f, int order);
void differentiate_spectrum(std::span<complex> coeffs, const Grid& grid, int order);

/// Exact flow of i u_t = -u_xx over duration t.
Field free_propagator(const Field& f, double t);
void propagate_spectrum(std::span<complex> coeffs, const Grid& grid, double t);

/// Largest |k| kept by the mollifier with parameter eps.
long mollifier_cutoff(double eps);
/// Frequency cut-off at |k| <= floor(1/eps). Throws on eps <= 0.
Field apply_mollifier(const Field& f, double eps, MollifierShape shape = MollifierShape::Sharp);
void mollify_spectrum(std::span<complex> coeffs, const Grid& grid, double eps,
                      MollifierShape shape = MollifierShape::Sharp);

/// Zeroes every mode below delta * max |uhat_k|. Throws unless 0 < delta < 1.
Field krasny_filter(const Field& f, double delta);
void krasny_truncate(std::span<complex> coeffs, double delta);

/// 2/3-rule truncation (|k| > N/3 zeroed). Not used by default.
Field dealias_two_thirds(const Field& f);

double l2_norm(const Spectrum& s);
double l2_norm(const Field& f);
double h1_seminorm(const Field& f);

} // namespace qls
