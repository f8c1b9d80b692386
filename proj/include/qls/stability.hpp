// Linear stability of the travelling wave a exp(i(kx - wt)) and of the
// constant-coefficient reduction of the linearized split step.
//
// A perturbation u = u0 (1 + e), e = sum_n e_n exp(i xi_n x), evolves mode by
// mode as d/dt (e_n, conj(e)_{-n}) = G_n (e_n, conj(e)_{-n}).
#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qls {

using Matrix2c = std::array<std::array<std::complex<double>, 2>, 2>;

struct PlaneWaveLinearization {
  double a;   // carrier amplitude, >= 0
  int k;      // carrier wavenumber
  int xi;     // perturbation wavenumber
};

struct ModeGrowth {
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
  bool unstable;
};

Matrix2c gn_matrix(const PlaneWaveLinearization& lin);

/// Closed form -2ik xi +- |xi| sqrt(-xi^2 - 2a^2 + 2a^2 xi^2), principal root.
/// `unstable` is decided from the sign of 2a^2 xi^2 - 2a^2 - xi^2.
ModeGrowth gn_eigenvalues(const PlaneWaveLinearization& lin);

/// 2a^2 xi^2 - 2a^2 - xi^2; positive exactly when the mode grows.
double instability_discriminant(double a, int xi);

struct AmplitudeVerdict {
  double a;
  bool unstable;
  int most_unstable_xi;  // 0 when every mode is stable
  double growth_rate;    // max Re(lambda) over the scanned modes
};

/// Scans xi = 1..xi_max for each amplitude. Throws when xi_max < 1.
std::vector<AmplitudeVerdict> stability_threshold_scan(const std::vector<double>& amplitudes, int xi_max);

struct SplitStepMultipliers {
  std::complex<double> plus;
  std::complex<double> minus;
  bool exponential_growth;  // 2w^2 - 1 > 0
};

/// Per-step multipliers 1 +- tau k^2 sqrt(2w^2 - 1) of the leading-order
/// linearized split step about a constant state of modulus w.
SplitStepMultipliers split_step_mode_growth(double w_amplitude, double tau, int k);

/// The explicit update matrix I + tau k^2 [[-2 w1 w2, -(2 w2^2 - 1)], [2 w1^2 - 1, 2 w1 w2]].
Matrix2c split_step_update_matrix(double w1, double w2, double tau, int k);

} // namespace qls
