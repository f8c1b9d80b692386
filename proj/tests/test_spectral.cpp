#include "oracles.hpp"
#include "qls/spectral.hpp"

#include <doctest.h>

#include <numbers>
#include <stdexcept>

using namespace qls;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(Grid(6), std::invalid_argument);
  CHECK_THROWS_AS(Grid(17), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0), std::invalid_argument);
  Grid g(16);
  CHECK(g.dx() == 2.0 * pi / 16);
  CHECK(g.node(0) == -pi);
  CHECK(std::abs(g.node(8)) < 1e-15);
  CHECK(g.nyquist() == -8);
}

TEST_CASE("wavenumbers are symmetric apart from Nyquist") {
  Grid g(32);
  std::vector<int> count(33, 0);
  for (int i = 0; i < g.size(); ++i) {
    const int k = g.wavenumber(i);
    CHECK(g.slot(k) == i);
    ++count[k + 16];
  }
  for (int k = -15; k <= 15; ++k) CHECK(count[k + 16] == 1);
  CHECK(count[0] == 1);   // -N/2
  CHECK(count[32] == 0);  // +N/2 absent
}

TEST_CASE("forward transform matches the direct DFT sum") {
  std::mt19937_64 rng(11);
  for (int n : {8, 16, 30, 64}) {
    Grid g(n);
    Field u = oracle::random_field(g, rng);
    const auto ref = oracle::naive_dft(g, {u.values().begin(), u.values().end()});
    Spectrum s = to_spectrum(u);
    for (int i = 0; i < n; ++i) CHECK(std::abs(s.coeffs()[i] - ref[i]) < 1e-14);
  }
}

TEST_CASE("to_spectrum examples") {
  Grid g(16);
  SUBCASE("constant field") {
    Field u(g, std::vector<complex>(16, complex(0.3, -0.7)));
    Spectrum s = to_spectrum(u);
    CHECK(std::abs(s.at(0) - complex(0.3, -0.7)) < 1e-15);
    for (int k = -8; k < 8; ++k)
      if (k != 0) CHECK(std::abs(s.at(k)) < 1e-15);
  }
  SUBCASE("single mode") {
    Spectrum s = to_spectrum(oracle::mode(g, 1));
    CHECK(std::abs(s.at(1) - 1.0) < 1e-15);
    for (int k = -8; k < 8; ++k)
      if (k != 1) CHECK(std::abs(s.at(k)) < 1e-15);
  }
  SUBCASE("cos 2x") {
    Field u(g);
    for (int j = 0; j < 16; ++j) u[j] = std::cos(2.0 * g.node(j));
    const auto ref = oracle::naive_dft(g, {u.values().begin(), u.values().end()});
    CHECK(std::abs(ref[g.slot(2)] - 0.5) < 1e-15);
    CHECK(std::abs(ref[g.slot(-2)] - 0.5) < 1e-15);
    Spectrum s = to_spectrum(u);
    CHECK(std::abs(s.at(2) - 0.5) < 1e-15);
    CHECK(std::abs(s.at(-2) - 0.5) < 1e-15);
    for (int k = -8; k < 8; ++k)
      if (std::abs(k) != 2) CHECK(std::abs(s.at(k)) < 1e-15);
  }
}

TEST_CASE("to_physical examples") {
  Grid g(16);
  CHECK(to_physical(Spectrum(g)).max_abs() == 0.0);
  Spectrum s(g);
  s.at(1) = 1.0;
  CHECK(oracle::max_diff(to_physical(s), oracle::mode(g, 1)) < 1e-15);
  CHECK_THROWS_AS(Spectrum(g, std::vector<complex>(15)), std::invalid_argument);
}

TEST_CASE("round trip and Parseval on random fields") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    Grid g(8 << (trial % 8));
    Field u = oracle::random_field(g, rng, 3.0);
    Field back = to_physical(to_spectrum(u));
    CHECK(oracle::l2_norm_diff_relative(back, u) < 1e-13);
    const double trap = oracle::trapezoid_l2(u);
    CHECK(std::abs(l2_norm(u) - trap) / trap < 1e-12);
  }
}

TEST_CASE("spectral derivative") {
  Grid g(32);
  SUBCASE("eigenfunction exp(3ix)") {
    Field u = oracle::mode(g, 3);
    CHECK(oracle::max_diff(spectral_derivative(u, 1), oracle::mode(g, 3, complex(0, 3))) < 1e-13);
    CHECK(oracle::max_diff(spectral_derivative(u, 2), oracle::mode(g, 3, -9.0)) < 1e-12);
  }
  SUBCASE("cos x against the analytic derivative") {
    Field u(g), du(g);
    for (int j = 0; j < 32; ++j) {
      u[j] = std::cos(g.node(j));
      du[j] = -std::sin(g.node(j));
    }
    Field d = spectral_derivative(u, 1);
    CHECK(oracle::max_diff(d, du) < 1e-12);
    CHECK(std::abs(d[16]) < 1e-12);  // x = 0
  }
  SUBCASE("every representable mode") {
    for (int k = -15; k < 16; ++k) {
      Field u = oracle::mode(g, k);
      const double scale = std::max(1.0, double(k * k));
      CHECK(oracle::max_diff(spectral_derivative(u, 1), oracle::mode(g, k, complex(0, k))) < 1e-13 * scale);
      CHECK(oracle::max_diff(spectral_derivative(u, 2), oracle::mode(g, k, -double(k * k))) < 1e-13 * scale);
    }
  }
  SUBCASE("Nyquist handling") {
    Field u = oracle::mode(g, -16);
    CHECK(spectral_derivative(u, 1).max_abs() < 1e-13);
    CHECK(oracle::max_diff(spectral_derivative(u, 2), oracle::mode(g, -16, -256.0)) < 1e-11);
  }
  CHECK_THROWS_AS(spectral_derivative(Field(g), 3), std::invalid_argument);
  CHECK_THROWS_AS(spectral_derivative(Field(g), 0), std::invalid_argument);
}

TEST_CASE("free propagator") {
  Grid g(64);
  std::mt19937_64 rng(5);
  Field u = oracle::smooth_random_field(g, rng, 20);
  CHECK(oracle::max_diff(free_propagator(u, 0.0), u) < 1e-14);

  Field one = oracle::mode(g, 1);
  CHECK(oracle::max_diff(free_propagator(one, pi / 2), oracle::mode(g, 1, complex(0, -1))) < 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    Field v = oracle::random_field(g, rng);
    const double t1 = 0.37 * trial, t2 = 1.1 - 0.05 * trial;
    CHECK(std::abs(l2_norm(free_propagator(v, t1)) / l2_norm(v) - 1.0) < 1e-13);
    Field two_steps = free_propagator(free_propagator(v, t1), t2);
    // phase round-off grows like t k^2 eps
    CHECK(oracle::l2_norm_diff_relative(two_steps, free_propagator(v, t1 + t2)) < 1e-12);
  }
}

TEST_CASE("mollifier") {
  Grid g(32);
  std::mt19937_64 rng(9);
  CHECK(mollifier_cutoff(0.5) == 2);
  CHECK(mollifier_cutoff(0.1) == 10);
  CHECK_THROWS_AS(mollifier_cutoff(0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_mollifier(Field(g), -1.0), std::invalid_argument);

  Field u = oracle::random_field(g, rng);
  CHECK(oracle::max_diff(apply_mollifier(u, 1.0 / 16), u) < 1e-14);
  CHECK(apply_mollifier(oracle::mode(g, 3), 0.5).max_abs() < 1e-15);

  for (auto shape : {MollifierShape::Sharp, MollifierShape::RaisedCosine}) {
    for (double eps : {0.05, 0.1, 0.25}) {
      Field v = oracle::random_field(g, rng);
      Field once = apply_mollifier(v, eps, shape);
      CHECK(l2_norm(once) <= l2_norm(v) * (1 + 1e-14));
      if (shape == MollifierShape::Sharp) CHECK(oracle::max_diff(apply_mollifier(once, eps), once) < 1e-14);
    }
  }
}

TEST_CASE("raised-cosine taper keeps low modes and damps the edge") {
  Grid g(64);
  Spectrum s(g);
  for (int k = -31; k < 32; ++k) s.at(k) = 1.0;
  mollify_spectrum(s.coeffs(), g, 1.0 / 20, MollifierShape::RaisedCosine);
  CHECK(s.at(0) == complex(1.0));
  CHECK(s.at(18) == complex(1.0));
  CHECK(std::abs(s.at(20)) < 1.0);
  CHECK(std::abs(s.at(20)) > 0.0);
  CHECK(s.at(21) == complex(0.0));
  CHECK(s.at(-21) == complex(0.0));
}

TEST_CASE("Krasny filter") {
  Grid g(32);
  Field single = oracle::mode(g, 4, 1e-3);
  for (double d : {1e-12, 0.5, 0.999}) CHECK(oracle::max_diff(krasny_filter(single, d), single) < 1e-17);

  Spectrum s(g);
  s.at(1) = 1.0;
  s.at(2) = 1e-2;
  s.at(3) = 1e-5;
  Spectrum out = to_spectrum(krasny_filter(to_physical(s), 1e-3));
  CHECK(std::abs(out.at(1) - 1.0) < 1e-14);
  CHECK(std::abs(out.at(2) - 1e-2) < 1e-14);
  CHECK(std::abs(out.at(3)) < 1e-16);

  std::mt19937_64 rng(3);
  Field u = oracle::random_field(g, rng);
  CHECK(l2_norm(krasny_filter(u, 0.3)) <= l2_norm(u) * (1 + 1e-14));
  CHECK_THROWS_AS(krasny_filter(u, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(krasny_filter(u, 1.0), std::invalid_argument);
}

TEST_CASE("2/3 dealiasing") {
  Grid g(48);
  CHECK(oracle::max_diff(dealias_two_thirds(oracle::mode(g, 16)), oracle::mode(g, 16)) < 1e-14);
  CHECK(dealias_two_thirds(oracle::mode(g, 17)).max_abs() < 1e-14);
}

TEST_CASE("norms") {
  Grid g(256);
  CHECK(l2_norm(Field(g)) == 0.0);
  CHECK(l2_norm(oracle::mode(g, 5, 0.3)) == Approx(0.3 * std::sqrt(2 * pi)).epsilon(1e-14));
  CHECK(h1_seminorm(Field(g, std::vector<complex>(256, 2.0))) < 1e-14);
  CHECK(h1_seminorm(oracle::mode(g, -7, 0.3)) == Approx(7 * 0.3 * std::sqrt(2 * pi)).epsilon(1e-13));

  SUBCASE("Gaussian L2 against quadrature") {
    const double a = 0.2, sigma = 0.2;
    const double quad = std::sqrt(oracle::simpson(
        [&](double x) { return a * a * std::exp(-x * x / (sigma * sigma)); }, -pi, pi, 20000));
    CHECK(quad == Approx(std::sqrt(a * a * sigma * std::sqrt(pi))).epsilon(1e-10));
    Field u(g);
    for (int j = 0; j < 256; ++j) u[j] = a * std::exp(-g.node(j) * g.node(j) / (2 * sigma * sigma));
    CHECK(std::abs(l2_norm(u) - quad) < 1e-6);
    CHECK(std::abs(l2_norm(u) - 0.11908) < 1e-5);
  }

  SUBCASE("H1 seminorm against centred differences") {
    auto gauss = [](double x) { return 0.2 * std::exp(-x * x / (2 * 0.2 * 0.2)); };
    const int fine = 8192;
    const double h = 2 * pi / fine;
    double sum = 0.0;
    for (int j = 0; j < fine; ++j) {
      const double x = -pi + j * h;
      const double d = (gauss(x + h) - gauss(x - h)) / (2 * h);
      sum += d * d * h;
    }
    const double fd = std::sqrt(sum);
    Field u(g);
    for (int j = 0; j < 256; ++j) u[j] = gauss(g.node(j));
    CHECK(std::abs(h1_seminorm(u) - fd) < 1e-4);
    CHECK(h1_seminorm(u) == Approx(std::sqrt(0.04 * std::sqrt(pi) / 0.4)).epsilon(1e-6));
  }
}
