#include "qls/stability.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qls {

using cplx = std::complex<double>;

Matrix2c gn_matrix(const PlaneWaveLinearization& lin) {
  const double a2 = lin.a * lin.a;
  const double xi = lin.xi;
  const double xi2 = xi * xi;
  const double doppler = 2.0 * lin.k * xi;
  const cplx i{0.0, 1.0};
  return {{{i * (-doppler - xi2 - a2 + a2 * xi2), i * (-a2 + a2 * xi2)},
           {i * (a2 - a2 * xi2), i * (-doppler + xi2 + a2 - a2 * xi2)}}};
}

double instability_discriminant(double a, int xi) {
  const double a2 = a * a;
  const double xi2 = static_cast<double>(xi) * xi;
  return 2.0 * a2 * xi2 - 2.0 * a2 - xi2;
}

ModeGrowth gn_eigenvalues(const PlaneWaveLinearization& lin) {
  const double xi = lin.xi;
  const double disc = instability_discriminant(lin.a, lin.xi);
  const cplx root = std::sqrt(cplx(disc, 0.0));
  const cplx doppler{0.0, -2.0 * lin.k * xi};
  const double mag = std::abs(xi);
  return {doppler + mag * root, doppler - mag * root, disc > 0.0};
}

std::vector<AmplitudeVerdict> stability_threshold_scan(const std::vector<double>& amplitudes, int xi_max) {
  if (xi_max < 1) throw std::invalid_argument("xi_max must be >= 1");
  std::vector<AmplitudeVerdict> out;
  out.reserve(amplitudes.size());
  for (double a : amplitudes) {
    AmplitudeVerdict v{a, false, 0, 0.0};
    for (int xi = 1; xi <= xi_max; ++xi) {
      const ModeGrowth g = gn_eigenvalues({a, 0, xi});
      if (!g.unstable) continue;
      const double rate = g.lambda_plus.real();
      if (!v.unstable || rate > v.growth_rate) {
        v.unstable = true;
        v.most_unstable_xi = xi;
        v.growth_rate = rate;
      }
    }
    out.push_back(v);
  }
  return out;
}

SplitStepMultipliers split_step_mode_growth(double w_amplitude, double tau, int k) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const double disc = 2.0 * w_amplitude * w_amplitude - 1.0;
  const cplx root = std::sqrt(cplx(disc, 0.0));
  const double scale = tau * static_cast<double>(k) * k;
  return {1.0 + scale * root, 1.0 - scale * root, disc > 0.0};
}

Matrix2c split_step_update_matrix(double w1, double w2, double tau, int k) {
  const double s = tau * static_cast<double>(k) * k;
  return {{{1.0 - s * 2.0 * w1 * w2, -s * (2.0 * w2 * w2 - 1.0)},
           {s * (2.0 * w1 * w1 - 1.0), 1.0 + s * 2.0 * w1 * w2}}};
}

} // namespace qls
