#include "qls/stability.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace qls;
using doctest::Approx;
using cplx = std::complex<double>;

namespace {

Eigen::Matrix2cd to_eigen(const Matrix2c& m) {
  Eigen::Matrix2cd e;
  e << m[0][0], m[0][1], m[1][0], m[1][1];
  return e;
}

// Distance between two unordered pairs.
double pair_distance(cplx a1, cplx a2, cplx b1, cplx b2) {
  return std::min(std::max(std::abs(a1 - b1), std::abs(a2 - b2)), std::max(std::abs(a1 - b2), std::abs(a2 - b1)));
}

} // namespace

TEST_CASE("G_n matrix examples") {
  const cplx i{0, 1};
  Matrix2c free = gn_matrix({0.0, 3, 2});
  CHECK(std::abs(free[0][0] - i * (-12.0 - 4.0)) < 1e-15);
  CHECK(std::abs(free[1][1] - i * (-12.0 + 4.0)) < 1e-15);
  CHECK(free[0][1] == cplx(0));
  CHECK(free[1][0] == cplx(0));

  // a = 1, k = 0, xi = 1: every a^2 (xi^2 - 1) term cancels.
  Matrix2c m = gn_matrix({1.0, 0, 1});
  CHECK(std::abs(m[0][0] - i * -1.0) < 1e-15);
  CHECK(std::abs(m[1][1] - i * 1.0) < 1e-15);
  CHECK(std::abs(m[0][1]) < 1e-15);
  CHECK(std::abs(m[1][0]) < 1e-15);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ua(0.0, 1.5);
  std::uniform_int_distribution<int> uk(-8, 8), ux(1, 64);
  for (int n = 0; n < 200; ++n) {
    const int k = uk(rng), xi = ux(rng);
    Matrix2c g = gn_matrix({ua(rng), k, xi});
    CHECK(std::abs(g[0][0] + g[1][1] - cplx(0, -4.0 * k * xi)) < 1e-9);
  }
}

TEST_CASE("G_n eigenvalue examples") {
  ModeGrowth two = gn_eigenvalues({1.0, 0, 2});
  CHECK(two.unstable);
  CHECK(pair_distance(two.lambda_plus, two.lambda_minus, 2 * std::sqrt(2.0), -2 * std::sqrt(2.0)) < 1e-14);

  ModeGrowth one = gn_eigenvalues({1.0, 0, 1});
  CHECK_FALSE(one.unstable);
  CHECK(pair_distance(one.lambda_plus, one.lambda_minus, cplx(0, 1), cplx(0, -1)) < 1e-14);

  for (int xi = 1; xi < 5000; xi += 37) {
    CHECK_FALSE(gn_eigenvalues({std::sqrt(0.5), 0, xi}).unstable);
    CHECK(instability_discriminant(std::sqrt(0.5), xi) == Approx(-1.0).epsilon(1e-6));
  }
}

TEST_CASE("closed form agrees with a numeric eigensolve") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> ua(0.0, 1.5);
  std::uniform_int_distribution<int> uk(-8, 8), ux(1, 64);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const PlaneWaveLinearization lin{ua(rng), uk(rng), ux(rng)};
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(to_eigen(gn_matrix(lin)), false);
    REQUIRE(solver.info() == Eigen::Success);
    const auto ev = solver.eigenvalues();
    const ModeGrowth g = gn_eigenvalues(lin);
    const double d = pair_distance(g.lambda_plus, g.lambda_minus, ev(0), ev(1));
    worst = std::max(worst, d);
    CHECK(d < 1e-12 * std::max(1.0, to_eigen(gn_matrix(lin)).norm()));

    const double disc = 2 * lin.a * lin.a * lin.xi * lin.xi - 2 * lin.a * lin.a - double(lin.xi) * lin.xi;
    CHECK(g.unstable == (disc > 0.0));
    CHECK(g.unstable == (std::max(g.lambda_plus.real(), g.lambda_minus.real()) > 0.0));
    if (lin.a <= std::sqrt(0.5)) CHECK_FALSE(g.unstable);
  }
  MESSAGE("worst eigenvalue mismatch " << worst);
}

TEST_CASE("carrier wavenumber only shifts the imaginary part") {
  for (double a : {0.3, 0.72, 1.1})
    for (int xi : {1, 3, 20}) {
      ModeGrowth base = gn_eigenvalues({a, 0, xi});
      for (int k : {-5, 2, 7}) {
        ModeGrowth moved = gn_eigenvalues({a, k, xi});
        CHECK(moved.unstable == base.unstable);
        CHECK(moved.lambda_plus.real() == base.lambda_plus.real());
        CHECK(moved.lambda_plus.imag() == Approx(base.lambda_plus.imag() - 2.0 * k * xi));
      }
    }
}

TEST_CASE("threshold scan") {
  auto v = stability_threshold_scan({0.0, 0.7, 0.705, 0.7071, 0.708, 0.71}, 128);
  REQUIRE(v.size() == 6);
  for (int i = 0; i < 4; ++i) {
    CHECK_FALSE(v[i].unstable);
    CHECK(v[i].most_unstable_xi == 0);
  }
  CHECK(v[4].unstable);
  CHECK(v[5].unstable);
  CHECK(v[5].growth_rate > v[4].growth_rate);

  // 0.71: growth rate xi sqrt((2a^2 - 1) xi^2 - 2a^2) increases with xi.
  auto r64 = stability_threshold_scan({0.71}, 64)[0];
  auto r128 = stability_threshold_scan({0.71}, 128)[0];
  CHECK(r64.most_unstable_xi == 64);
  CHECK(r128.most_unstable_xi == 128);
  CHECK(r128.growth_rate > 3.0 * r64.growth_rate);

  // +-1e-8 around the threshold: the unstable band starts near xi = 5946.
  const double a_minus = std::sqrt(0.5) - 1e-8, a_plus = std::sqrt(0.5) + 1e-8;
  auto near = stability_threshold_scan({a_minus, a_plus}, 8192);
  CHECK_FALSE(near[0].unstable);
  CHECK(near[1].unstable);
  CHECK_FALSE(stability_threshold_scan({a_plus}, 5000)[0].unstable);

  for (double a = 0.0; a <= std::sqrt(0.5); a += 0.01)
    for (int xi = 1; xi <= 512; ++xi) CHECK(instability_discriminant(a, xi) <= 0.0);

  CHECK_THROWS_AS(stability_threshold_scan({0.5}, 0), std::invalid_argument);
}

TEST_CASE("split-step multipliers") {
  auto m = split_step_mode_growth(1.0, 1e-4, 16);
  CHECK(m.exponential_growth);
  CHECK(std::abs(m.plus - 1.0256) < 1e-14);
  CHECK(std::abs(m.minus - 0.9744) < 1e-14);

  // sqrt(0.5) is off by an ulp, and the multipliers depend on 2w^2 - 1
  // through a square root.
  for (int k : {1, 10, 100}) {
    const double tol = 3e-8 * 1e-3 * k * k;
    auto edge = split_step_mode_growth(std::sqrt(0.5), 1e-3, k);
    CHECK(std::abs(edge.plus - 1.0) < tol);
    CHECK(std::abs(edge.minus - 1.0) < tol);
  }

  auto half = split_step_mode_growth(0.5, 1e-3, 10);
  CHECK_FALSE(half.exponential_growth);
  CHECK(std::abs(half.plus - cplx(1.0, 0.1 * std::sqrt(0.5))) < 1e-14);
  CHECK(std::abs(half.minus - cplx(1.0, -0.1 * std::sqrt(0.5))) < 1e-14);

  CHECK_THROWS_AS(split_step_mode_growth(0.5, 0.0, 3), std::invalid_argument);
}

TEST_CASE("multipliers are the eigenvalues of the update matrix") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uw(0.0, 1.5), uphi(0.0, 2 * M_PI), utau(1e-6, 1e-2);
  std::uniform_int_distribution<int> uk(-64, 64);
  for (int n = 0; n < 1000; ++n) {
    const double w = uw(rng), phi = uphi(rng), tau = utau(rng);
    const int k = uk(rng);
    const double w1 = w * std::cos(phi), w2 = w * std::sin(phi);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(to_eigen(split_step_update_matrix(w1, w2, tau, k)), false);
    const auto ev = solver.eigenvalues();
    if (tau * k * k == 0.0) continue;
    auto m = split_step_mode_growth(w, tau, k);
    CHECK(pair_distance(m.plus, m.minus, ev(0), ev(1)) < 1e-12 * std::max(1.0, tau * k * k));
  }
}
