#include "hsbi/kernels.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>

namespace hsbi {

using cplx = std::complex<double>;

static cplx alpha_p(cplx P, double r) { return std::sqrt(1.0 + r * r * P * P); }
static cplx alpha_s(cplx P) { return std::sqrt(1.0 + P * P); }

std::complex<double> kernel_laplace_h11(cplx P, double r) {
  const cplx ap = alpha_p(P, r), as = alpha_s(P);
  return -(ap * P * P / (1.0 - ap * as) + P);
}

std::complex<double> kernel_laplace_h22(cplx P, double r) {
  const cplx ap = alpha_p(P, r), as = alpha_s(P);
  return -(as * P * P / (1.0 - ap * as) + P / r);
}

double kernel_h12_instant(double r) { return 1.0 / r - 2.0; }

std::complex<double> kernel_laplace_h12(cplx P, double r) {
  const cplx ap = alpha_p(P, r), as = alpha_s(P);
  // full coupling minus the instantaneous (high-frequency) limit
  return -(2.0 + P * P - 2.0 * ap * as) / (1.0 - ap * as) -
         kernel_h12_instant(r);
}

std::complex<double> kernel_laplace_h33(cplx P, double /*r*/) {
  return alpha_s(P) - P;
}

namespace {

// 1/P and 1/P^2 coefficients of F at infinity, from samples at two large
// real arguments.
std::pair<double, double> asymptotic_coeffs(cplx (*f)(cplx, double), double r) {
  const double pa = 2e3, pb = 8e3;
  const double fa = f(cplx(pa, 0.0), r).real();
  const double fb = f(cplx(pb, 0.0), r).real();
  // fa = c1/pa + c2/pa^2 ; fb = c1/pb + c2/pb^2
  const double det = 1.0 / (pa * pb * pb) - 1.0 / (pb * pa * pa);
  const double c1 = (fa / (pb * pb) - fb / (pa * pa)) / det;
  const double c2 = (fb / pa - fa / pb) / det;
  return {c1, c2};
}

// Damped-FFT Bromwich inversion of F minus its analytic 1/P, 1/P^2
// asymptote; the asymptote c1 e^-T + (c1+c2) T e^-T is added back in
// closed form.
std::vector<double> invert_one(cplx (*f)(cplx, double), double r,
                               std::int64_t n_out, double dT) {
  const std::int64_t n_fft = 1 << 18;
  const double t_period = dT * double(n_fft);
  const double dw = 2.0 * M_PI / t_period;
  const double sigma = 6.0 / t_period;
  auto [c1, c2] = asymptotic_coeffs(f, r);

  std::vector<cplx> samples(static_cast<size_t>(n_fft));
  for (std::int64_t n = 0; n < n_fft; ++n) {
    const double w = (n < n_fft / 2 ? double(n) : double(n - n_fft)) * dw;
    const cplx P(sigma, w);
    const cplx asym = c1 / (P + 1.0) + (c1 + c2) / ((P + 1.0) * (P + 1.0));
    samples[size_t(n)] = f(P, r) - asym;
  }
  Eigen::FFT<double> fft;
  std::vector<cplx> time(static_cast<size_t>(n_fft));
  fft.inv(time, samples);

  std::vector<double> h(static_cast<size_t>(n_out));
  for (std::int64_t j = 0; j < n_out; ++j) {
    const double T = dT * double(j);
    const double remainder = time[size_t(j)].real() * std::exp(sigma * T) / dT;
    h[size_t(j)] = remainder + (c1 + (c1 + c2) * T) * std::exp(-T);
  }
  return h;
}

}  // namespace

KernelSet invert_kernels(double r, double t_max, double dT) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("kernels: need 0 < cs/cp < 1");
  KernelSet set;
  set.dT = dT;
  set.t_max = t_max;
  set.h12_instant = kernel_h12_instant(r);
  const std::int64_t n = std::int64_t(std::ceil(t_max / dT)) + 1;
  set.h11 = invert_one(&kernel_laplace_h11, r, n, dT);
  set.h22 = invert_one(&kernel_laplace_h22, r, n, dT);
  set.h12 = invert_one(&kernel_laplace_h12, r, n, dT);
  set.h33 = invert_one(&kernel_laplace_h33, r, n, dT);
  return set;
}

double KernelSet::sample(const std::vector<double>& h, double T) const {
  if (T <= 0.0) return h.front();
  const double x = T / dT;
  const std::int64_t i = std::int64_t(x);
  if (i + 1 >= std::int64_t(h.size())) return 0.0;  // beyond horizon
  const double f = x - double(i);
  return (1.0 - f) * h[size_t(i)] + f * h[size_t(i + 1)];
}

const KernelSet& ElastodynamicKernels::master(double r) const {
  const std::int64_t key = std::int64_t(std::llround(r * 1e12));
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, invert_kernels(r, t_max_)).first;
  return it->second;
}

KernelTable ElastodynamicKernels::table(double q,
                                        const ElasticMaterial& material,
                                        double dt,
                                        std::int64_t max_samples) const {
  const double r = material.cs() / material.cp();
  const KernelSet& m = master(r);
  KernelTable t;
  t.dT = q * material.cs() * dt;
  if (!(t.dT > 0.0)) throw std::invalid_argument("kernel table: q*cs*dt <= 0");
  std::int64_t w = std::int64_t(std::ceil(t_max_ / t.dT)) + 1;
  if (max_samples > 0) w = std::min(w, max_samples);
  t.h11.resize(size_t(w));
  t.h22.resize(size_t(w));
  t.h12.resize(size_t(w));
  t.h33.resize(size_t(w));
  for (std::int64_t n = 0; n < w; ++n) {
    const double T = t.dT * double(n);
    t.h11[size_t(n)] = m.sample(m.h11, T);
    t.h22[size_t(n)] = m.sample(m.h22, T);
    t.h12[size_t(n)] = m.sample(m.h12, T);
    t.h33[size_t(n)] = m.sample(m.h33, T);
  }
  t.h12_instant = m.h12_instant;
  return t;
}

KernelTable SyntheticExpKernel::table(double q, const ElasticMaterial& material,
                                      double dt,
                                      std::int64_t max_samples) const {
  KernelTable t;
  t.dT = q * material.cs() * dt;
  std::int64_t w = std::int64_t(std::ceil(t_max_ / t.dT)) + 1;
  if (max_samples > 0) w = std::min(w, max_samples);
  t.h11.resize(size_t(w));
  for (std::int64_t n = 0; n < w; ++n)
    t.h11[size_t(n)] = amplitude_ * std::exp(-rate_ * t.dT * double(n));
  t.h22 = t.h11;
  t.h33 = t.h11;
  t.h12.assign(size_t(w), 0.0);
  t.h12_instant = 0.0;
  return t;
}

}  // namespace hsbi
