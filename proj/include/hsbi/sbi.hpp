#pragma once

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "hsbi/kernels.hpp"
#include "hsbi/materials.hpp"

namespace hsbi {

using Eigen::ArrayXXd;
using VecC = std::vector<std::complex<double>>;

/// 2D forward/inverse discrete Fourier transform on the unique periodic
/// boundary grid (layout: index = k3*n1 + i1).
class Fft2D {
 public:
  Fft2D(int n1, int n3);
  void fwd(const std::vector<double>& field, VecC& modes) const;
  void inv(const VecC& modes, std::vector<double>& field) const;
  // complex-valued variants, used to transform two packed real fields at once
  void fwd(const VecC& field, VecC& modes) const;
  void inv_c(const VecC& modes, VecC& field) const;
  int n1() const { return n1_; }
  int n3() const { return n3_; }

 private:
  void pass(VecC& data, bool inverse) const;  // in-place separable 2D DFT

  int n1_, n3_;
  // cached transform plans and scratch rows (plans are expensive to rebuild)
  mutable Eigen::FFT<double> plan_;
  mutable VecC row_in_, row_out_, col_in_, col_out_, work_;
};

/// Half-space transparent boundary on a regular periodic grid: far-field
/// traction + radiation damping + spectral nonlocal convolution term.
///
/// orientation +1: half-space occupies x2 > plane (boundary S+);
/// orientation -1: half-space occupies x2 < plane (boundary S-).
class SbiBoundary {
 public:
  SbiBoundary(int n1, int n3, double dx, ElasticMaterial material,
              int orientation, double dt, const KernelProvider& kernels,
              std::int64_t max_history = 0);

  int n1() const { return n1_; }
  int n3() const { return n3_; }
  std::int64_t grid_size() const { return std::int64_t(n1_) * n3_; }
  const ElasticMaterial& material() const { return material_; }
  double dt() const { return dt_; }
  double dx() const { return dx_; }
  int orientation() const { return orientation_; }

  /// Far-field traction fields (component-major, each grid_size long);
  /// zero unless set.
  void set_far_field(const std::vector<double>& tau1,
                     const std::vector<double>& tau2,
                     const std::vector<double>& tau3);

  /// Append u_{t+1} (three component fields) to the mode histories.
  /// step must advance by one per call; a repeated step throws.
  void push_history(const std::vector<double>& u1,
                    const std::vector<double>& u2,
                    const std::vector<double>& u3, std::int64_t step);

  /// Nonlocal spectral term s_i for the current history head.
  /// Fields are overwritten (each grid_size long).
  void nonlocal_term(std::vector<double>& s1, std::vector<double>& s2,
                     std::vector<double>& s3) const;

  /// tau_i = tau_inf_i - eta_ij (mu/cs) v_j + s_i with eta11=eta33=1 and
  /// the normal channel using the P-wave impedance.
  void traction(const std::vector<double>& v1, const std::vector<double>& v2,
                const std::vector<double>& v3, std::vector<double>& tau1,
                std::vector<double>& tau2, std::vector<double>& tau3) const;

  std::int64_t steps_pushed() const { return steps_pushed_; }
  double mode_q(int a1, int a3) const;

 private:
  struct Mode {
    double q = 0.0;
    double c1 = 0.0, c3 = 0.0;  // unit wavevector components (l-direction)
    std::int64_t window = 0;
    std::int64_t offset = 0;   // into the history arrays
    std::int32_t table = -1;   // index into tables_ (-1 for the (0,0) mode)
    // real input fields make the spectrum Hermitian: the -k partner of a
    // computed mode is its complex conjugate, so only one of each pair
    // carries history and convolution work
    std::int64_t mirror = -1;   // index of the computed partner, or -1
    std::int64_t partner = -1;  // index of the -k mode (self for k = -k)
  };

  void spectral_forward(const std::vector<double>& f, VecC& out) const;

  int n1_, n3_;
  double dx_, dt_;
  ElasticMaterial material_;
  int orientation_;
  Fft2D fft_;

  std::vector<Mode> modes_;
  std::vector<KernelTable> tables_;
  // per-mode ring buffers in the rotated (l, m, 2) basis; planar re/im
  // storage. Each sample is written twice, a window apart, so that any
  // window ending at the head is one contiguous ascending range (a single
  // vectorizable convolution run)
  std::vector<double> hl_re_, hl_im_, hm_re_, hm_im_, h2_re_, h2_im_;
  mutable VecC packed_, spec_a_, spec_b_, unpacked_;
  std::int64_t steps_pushed_ = 0;
  std::int64_t last_step_ = -1;
  bool have_step_base_ = false;

  std::vector<double> tau_inf_1_, tau_inf_2_, tau_inf_3_;
};

}  // namespace hsbi
