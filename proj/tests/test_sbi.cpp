#include <cmath>
#include <random>

#include "doctest.h"
#include "hsbi/sbi.hpp"

using namespace hsbi;

namespace {

const ElasticMaterial kRock = ElasticMaterial::from_wavespeeds(2670, 6000, 3464);

std::vector<double> random_field(size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> f(n);
  for (auto& x : f) x = d(rng);
  return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("2D spectral transform round-trips") {
  Fft2D fft(12, 10);
  const auto f = random_field(120, 3);
  VecC modes;
  std::vector<double> back;
  fft.fwd(f, modes);
  fft.inv(modes, back);
  CHECK(max_abs_diff(f, back) < 1e-12);
  // constant field excites only mode (0,0)
  std::vector<double> c(120, 3.5);
  fft.fwd(c, modes);
  CHECK(std::abs(modes[0] - std::complex<double>(3.5 * 120.0)) < 1e-9);
  for (size_t i = 1; i < modes.size(); ++i) CHECK(std::abs(modes[i]) < 1e-9);
  std::vector<double> wrong(100);
  CHECK_THROWS_AS(fft.fwd(wrong, modes), std::invalid_argument);
}

TEST_CASE("single-step convolution against the synthetic closed form") {
  const int n1 = 16, n3 = 8;
  const double dx = 100.0, dt = 0.01, A = 2.0, rate = 0.5;
  SyntheticExpKernel kern(A, rate, 100.0);
  SbiBoundary b(n1, n3, dx, kRock, +1, dt, kern, 0);

  // pure mode along x1 (q = 2 pi / L1), tangential component only
  const double L1 = n1 * dx;
  const double q = 2.0 * M_PI / L1;
  std::vector<double> u1(size_t(n1) * n3), zero(size_t(n1) * n3, 0.0);
  for (int k = 0; k < n3; ++k)
    for (int i = 0; i < n1; ++i)
      u1[size_t(k) * n1 + i] = std::cos(q * i * dx);
  b.push_history(u1, zero, zero, 0);

  std::vector<double> s1, s2, s3;
  b.nonlocal_term(s1, s2, s3);
  // one-sample trapezoid: conv = 0.5 * dT * H(0) * u
  const double dT = q * kRock.cs() * dt;
  const double expected = -kRock.mu * q * 0.5 * dT * A;
  for (int i = 0; i < n1; ++i)
    CHECK(std::abs(s1[size_t(i)] - expected * std::cos(q * i * dx)) <
          1e-9 * std::abs(expected));
  for (double v : s2) CHECK(std::abs(v) < 1e-9 * std::abs(expected));
  for (double v : s3) CHECK(std::abs(v) < 1e-9 * std::abs(expected));
}

TEST_CASE("multi-step convolution matches a directly summed reference") {
  const int n1 = 8, n3 = 4;
  const double dx = 50.0, dt = 0.02, A = 1.3, rate = 0.7;
  SyntheticExpKernel kern(A, rate, 100.0);
  SbiBoundary b(n1, n3, dx, kRock, +1, dt, kern, 0);

  const double q = 2.0 * M_PI / (n1 * dx);
  const double dT = q * kRock.cs() * dt;
  const int steps = 25;
  std::vector<double> amp(steps);
  for (int s = 0; s < steps; ++s) amp[size_t(s)] = std::sin(0.3 * s) + 0.2 * s;

  std::vector<double> u1(size_t(n1) * n3), zero(size_t(n1) * n3, 0.0);
  std::vector<double> s1, s2, s3;
  for (int s = 0; s < steps; ++s) {
    for (int k = 0; k < n3; ++k)
      for (int i = 0; i < n1; ++i)
        u1[size_t(k) * n1 + i] = amp[size_t(s)] * std::cos(q * i * dx);
    b.push_history(u1, zero, zero, s);
  }
  b.nonlocal_term(s1, s2, s3);

  // trapezoid over the available history, newest sample first
  double conv = 0.0;
  for (int n = 0; n < steps; ++n) {
    const double w = (n == 0 || n == steps - 1) ? 0.5 : 1.0;
    conv += w * dT * A * std::exp(-rate * dT * n) * amp[size_t(steps - 1 - n)];
  }
  const double expected = -kRock.mu * q * conv;
  CHECK(s1[0] == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("nonlocal term is linear in the pushed history") {
  const int n1 = 10, n3 = 6;
  ElastodynamicKernels kern(20.0);
  auto make = [&]() {
    return SbiBoundary(n1, n3, 100.0, kRock, +1, 0.005, kern, 64);
  };
  SbiBoundary ba = make(), bb = make(), bc = make();
  std::vector<double> s1a, s2a, s3a, s1b, s2b, s3b, s1c, s2c, s3c;
  const size_t n = size_t(n1) * n3;
  for (int s = 0; s < 5; ++s) {
    auto u1 = random_field(n, 100 + s), u2 = random_field(n, 200 + s),
         u3 = random_field(n, 300 + s);
    auto w1 = random_field(n, 400 + s), w2 = random_field(n, 500 + s),
         w3 = random_field(n, 600 + s);
    std::vector<double> c1(n), c2(n), c3(n);
    for (size_t i = 0; i < n; ++i) {
      c1[i] = 2.0 * u1[i] - 3.0 * w1[i];
      c2[i] = 2.0 * u2[i] - 3.0 * w2[i];
      c3[i] = 2.0 * u3[i] - 3.0 * w3[i];
    }
    ba.push_history(u1, u2, u3, s);
    bb.push_history(w1, w2, w3, s);
    bc.push_history(c1, c2, c3, s);
  }
  ba.nonlocal_term(s1a, s2a, s3a);
  bb.nonlocal_term(s1b, s2b, s3b);
  bc.nonlocal_term(s1c, s2c, s3c);
  double scale = 0.0;
  for (double v : s1c) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < n; ++i) {
    CHECK(std::abs(s1c[i] - (2.0 * s1a[i] - 3.0 * s1b[i])) < 1e-10 * scale);
    CHECK(std::abs(s2c[i] - (2.0 * s2a[i] - 3.0 * s2b[i])) < 1e-10 * scale);
    CHECK(std::abs(s3c[i] - (2.0 * s3a[i] - 3.0 * s3b[i])) < 1e-10 * scale);
  }
}

TEST_CASE("radiation damping: shear and normal channel impedances") {
  const int n1 = 8, n3 = 8;
  SyntheticExpKernel kern(0.0, 1.0, 10.0);  // zero kernels isolate the damping
  SbiBoundary b(n1, n3, 100.0, kRock, +1, 0.01, kern, 0);
  const size_t n = size_t(n1) * n3;
  std::vector<double> zero(n, 0.0), v1(n, 1.0), v2(n, 1.0);
  b.push_history(zero, zero, zero, 0);
  std::vector<double> t1, t2, t3;
  b.traction(v1, zero, zero, t1, t2, t3);
  // shear: mu/cs ~ 9.25 MPa per m/s
  CHECK(t1[0] == doctest::Approx(-kRock.mu / kRock.cs()).epsilon(1e-12));
  CHECK(t1[0] == doctest::Approx(-9.25e6).epsilon(0.002));
  CHECK(t2[0] == 0.0);
  // normal: the P-wave impedance rho*cp
  b.traction(zero, v2, zero, t1, t2, t3);
  CHECK(t2[0] == doctest::Approx(-kRock.rho * kRock.cp()).epsilon(1e-12));
  CHECK(t1[0] == 0.0);
}

TEST_CASE("zero history and velocity return the far-field traction") {
  const int n1 = 4, n3 = 4;
  SyntheticExpKernel kern(1.0, 1.0, 10.0);
  SbiBoundary b(n1, n3, 100.0, kRock, +1, 0.01, kern, 0);
  const size_t n = size_t(n1) * n3;
  std::vector<double> zero(n, 0.0);
  std::vector<double> inf1(n, 1e6), inf2(n, -2e6), inf3(n, 0.5e6);
  b.set_far_field(inf1, inf2, inf3);
  b.push_history(zero, zero, zero, 0);
  std::vector<double> t1, t2, t3;
  b.traction(zero, zero, zero, t1, t2, t3);
  for (size_t i = 0; i < n; ++i) {
    CHECK(t1[i] == 1e6);
    CHECK(t2[i] == -2e6);
    CHECK(t3[i] == 0.5e6);
  }
}

TEST_CASE("uniform translation excites only radiation damping") {
  const int n1 = 6, n3 = 6;
  ElastodynamicKernels kern(20.0);
  SbiBoundary b(n1, n3, 100.0, kRock, +1, 0.005, kern, 32);
  const size_t n = size_t(n1) * n3;
  std::vector<double> ones(n, 1.0), zero(n, 0.0);
  for (int s = 0; s < 10; ++s) b.push_history(ones, ones, ones, s);
  std::vector<double> s1, s2, s3;
  b.nonlocal_term(s1, s2, s3);
  for (size_t i = 0; i < n; ++i) {
    CHECK(std::abs(s1[i]) < 1e-9);
    CHECK(std::abs(s2[i]) < 1e-9);
    CHECK(std::abs(s3[i]) < 1e-9);
  }
}

TEST_CASE("out-of-order history pushes are rejected") {
  SyntheticExpKernel kern(1.0, 1.0, 10.0);
  SbiBoundary b(4, 4, 100.0, kRock, +1, 0.01, kern, 0);
  std::vector<double> zero(16, 0.0);
  b.push_history(zero, zero, zero, 0);
  CHECK_THROWS_AS(b.push_history(zero, zero, zero, 0), std::runtime_error);
  CHECK_THROWS_AS(b.push_history(zero, zero, zero, 5), std::runtime_error);
  b.push_history(zero, zero, zero, 1);  // in order is fine
}

TEST_CASE("held displacement converges to the clamped static half-space") {
  // independent static oracle (Papkovich-Neuber, surface displacement
  // u = A sin(q x1) e2 with u1 = u3 = 0 clamped):
  //   tau2 = -mu q A 4(1-nu)/(3-4nu) sin(q x1)
  //   tau1 = +mu q A 2(1-2nu)/(3-4nu) cos(q x1)   (upper half-space)
  const int n1 = 16, n3 = 4;
  const double dx = 100.0;
  ElastodynamicKernels kern(100.0);
  const double q = 2.0 * M_PI / (n1 * dx);
  // choose dt so a few thousand pushes cover the kernel horizon
  const double dt = 110.0 / (q * kRock.cs()) / 3000.0;
  SbiBoundary b(n1, n3, dx, kRock, +1, dt, kern, 0);

  const double A = 0.01;
  const size_t n = size_t(n1) * n3;
  std::vector<double> u2(n), zero(n, 0.0);
  for (int k = 0; k < n3; ++k)
    for (int i = 0; i < n1; ++i)
      u2[size_t(k) * n1 + i] = A * std::sin(q * i * dx);
  for (int s = 0; s < 3000; ++s) b.push_history(zero, u2, zero, s);

  std::vector<double> s1, s2, s3;
  b.nonlocal_term(s1, s2, s3);

  const double nu =
      kRock.lambda / (2.0 * (kRock.lambda + kRock.mu));  // Poisson ratio
  const double k22 = kRock.mu * q * A * 4.0 * (1.0 - nu) / (3.0 - 4.0 * nu);
  const double k12 = kRock.mu * q * A * 2.0 * (1.0 - 2.0 * nu) / (3.0 - 4.0 * nu);
  const int i_peak2 = n1 / 4;  // sin = 1
  CHECK(s2[size_t(i_peak2)] == doctest::Approx(-k22).epsilon(0.02));
  CHECK(s1[0] == doctest::Approx(k12).epsilon(0.02));  // cos = 1 at i = 0
  for (double v : s3) CHECK(std::abs(v) < 1e-6 * k22);
}
