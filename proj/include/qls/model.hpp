// Quasilinear Schrodinger family
//
//   i u_t = -u_xx + u f(|u|^2) + sign * u g'(|u|^2) (g(|u|^2))_xx
//
// with polynomial f, g. sign = +1 is the pseudo-attractive film model,
// -1 the superfluid thin-film model, 0 the cubic NLS.
#pragma once

#include "qls/spectral.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace qls {

/// Real polynomial c[0] + c[1] s + c[2] s^2 + ...
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  double operator()(double s) const;
  Polynomial derivative() const;
  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
  std::vector<double> coeffs_;
};

class ModelSpec {
public:
  /// g' is derived from g exactly. Throws unless sign is -1, 0 or +1.
  ModelSpec(Polynomial f, Polynomial g, int quasilinear_sign);
  /// Explicit g'; validated against g by central differences (tolerance 1e-8).
  ModelSpec(Polynomial f, Polynomial g, Polynomial g_prime, int quasilinear_sign);

  static ModelSpec pseudo_attractive();
  static ModelSpec thin_film();
  static ModelSpec cubic();

  const Polynomial& f() const { return f_; }
  const Polynomial& g() const { return g_; }
  const Polynomial& g_prime() const { return g_prime_; }
  int quasilinear_sign() const { return sign_; }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

private:
  Polynomial f_, g_, g_prime_;
  int sign_;
};

/// Nodewise f(|u|^2) + sign g'(|u|^2) D2[g(|u|^2)], D2 spectral. Imaginary
/// round-off from the transform is discarded.
std::vector<double> potential_field(const ModelSpec& model, const Field& u);

/// The travelling wave a exp(i(kx - wt)), w = k^2 + a^2 (pseudo-attractive
/// model; the Laplacian of the constant modulus vanishes).
Field exact_plane_wave(const Grid& grid, double a, int k, double t);
double plane_wave_frequency(double a, int k);

struct Gaussian {
  double amplitude;
  double sigma;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct PlaneWave {
  double amplitude;
  int wavenumber;
  friend bool operator==(const PlaneWave&, const PlaneWave&) = default;
};

/// a sum_j exp(i k_j x). With `normalized` each mode carries a / J instead,
/// so that max |u| = a.
struct MultiMode {
  double amplitude;
  std::vector<int> wavenumbers;
  bool normalized = false;
  friend bool operator==(const MultiMode&, const MultiMode&) = default;
};

struct Perturbation {
  int mode = 0;
  double amplitude = 1e-10;
  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct InitialCondition {
  std::variant<Gaussian, PlaneWave, MultiMode> profile;
  std::optional<Perturbation> perturbation;
  friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

/// Samples the profile at the grid nodes. Throws std::invalid_argument for
/// sigma <= 0, wavenumbers with |k| >= N/2, or unsorted/duplicate modes.
Field build_initial_condition(const InitialCondition& ic, const Grid& grid);

struct Ellipticity {
  std::vector<double> values;  // 1 - 2|u_j|^2
  double minimum;
};

Ellipticity ellipticity_indicator(const Field& u);

} // namespace qls
