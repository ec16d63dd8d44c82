#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "hsbi/materials.hpp"

namespace hsbi {

/// Convolution kernels for one spectral mode, sampled on the simulation's
/// own time grid: entry n is H(n * dT) with dT = q * cs * dt. h12_instant
/// is the delta-function part of the shear/normal coupling.
struct KernelTable {
  double dT = 0.0;
  std::vector<double> h11, h22, h12, h33;  // decaying parts
  double h12_instant = 0.0;
  std::int64_t window() const { return std::int64_t(h11.size()); }
};

/// Nondimensional master tables H(T) on a uniform fine grid, one set per
/// wave-speed ratio r = cs/cp.
struct KernelSet {
  double dT = 0.0;
  double t_max = 0.0;
  std::vector<double> h11, h22, h12, h33;
  double h12_instant = 0.0;

  double sample(const std::vector<double>& h, double T) const;
};

/// Interface between the boundary machinery and the kernel implementation;
/// lets a synthetic test double stand in for the physical kernels.
class KernelProvider {
 public:
  virtual ~KernelProvider() = default;

  /// Sampled kernels for wavenumber magnitude q at time step dt; the window
  /// covers min(t_max horizon, max_samples) entries.
  virtual KernelTable table(double q, const ElasticMaterial& material,
                            double dt, std::int64_t max_samples) const = 0;
};

/// Physical half-space kernels: Laplace-domain impedance derived from the
/// plane-strain + antiplane mode decomposition, numerically inverted once
/// per material and resampled per mode.
class ElastodynamicKernels : public KernelProvider {
 public:
  explicit ElastodynamicKernels(double t_max = 100.0) : t_max_(t_max) {}

  KernelTable table(double q, const ElasticMaterial& material, double dt,
                    std::int64_t max_samples) const override;

  double t_max() const { return t_max_; }
  const KernelSet& master(double r) const;

 private:
  double t_max_;
  mutable std::map<std::int64_t, KernelSet> cache_;  // keyed on rounded r
};

/// Test double: H(T) = amplitude * exp(-rate T) on all diagonal channels,
/// no coupling. Exercises the convolution machinery in isolation.
class SyntheticExpKernel : public KernelProvider {
 public:
  SyntheticExpKernel(double amplitude, double rate, double t_max = 100.0)
      : amplitude_(amplitude), rate_(rate), t_max_(t_max) {}
  KernelTable table(double q, const ElasticMaterial& material, double dt,
                    std::int64_t max_samples) const override;

 private:
  double amplitude_, rate_, t_max_;
};

// Laplace-domain kernels (nondimensional P = p/(q cs), r = cs/cp), exposed
// for the inversion tests.
std::complex<double> kernel_laplace_h11(std::complex<double> P, double r);
std::complex<double> kernel_laplace_h22(std::complex<double> P, double r);
std::complex<double> kernel_laplace_h12(std::complex<double> P, double r);
std::complex<double> kernel_laplace_h33(std::complex<double> P, double r);

/// Instantaneous part of the coupling kernel: cp/cs - 2.
double kernel_h12_instant(double r);

/// Numerical inversion of the four kernels up to t_max.
KernelSet invert_kernels(double r, double t_max, double dT = 0.005);

}  // namespace hsbi
