#include "hsbi/sbi.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <stdexcept>

namespace hsbi {

using cplx = std::complex<double>;

Fft2D::Fft2D(int n1, int n3) : n1_(n1), n3_(n3) {
  if (n1 < 1 || n3 < 1) throw std::invalid_argument("fft: grid must be >= 1");
  row_in_.resize(size_t(n1));
  row_out_.resize(size_t(n1));
  col_in_.resize(size_t(n3));
  col_out_.resize(size_t(n3));
  work_.resize(size_t(n1) * n3);
}

void Fft2D::pass(VecC& data, bool inverse) const {
  for (int k = 0; k < n3_; ++k) {
    for (int i = 0; i < n1_; ++i)
      row_in_[size_t(i)] = data[size_t(k) * n1_ + i];
    if (inverse)
      plan_.inv(row_out_, row_in_);
    else
      plan_.fwd(row_out_, row_in_);
    for (int i = 0; i < n1_; ++i) data[size_t(k) * n1_ + i] = row_out_[size_t(i)];
  }
  if (n3_ == 1) return;
  for (int i = 0; i < n1_; ++i) {
    for (int k = 0; k < n3_; ++k) col_in_[size_t(k)] = data[size_t(k) * n1_ + i];
    if (inverse)
      plan_.inv(col_out_, col_in_);
    else
      plan_.fwd(col_out_, col_in_);
    for (int k = 0; k < n3_; ++k) data[size_t(k) * n1_ + i] = col_out_[size_t(k)];
  }
}

void Fft2D::fwd(const std::vector<double>& field, VecC& modes) const {
  const size_t n = size_t(n1_) * n3_;
  if (field.size() != n) throw std::invalid_argument("fft: field size mismatch");
  modes.resize(n);
  for (size_t i = 0; i < n; ++i) modes[i] = field[i];
  pass(modes, false);
}

void Fft2D::fwd(const VecC& field, VecC& modes) const {
  const size_t n = size_t(n1_) * n3_;
  if (field.size() != n) throw std::invalid_argument("fft: field size mismatch");
  modes = field;
  pass(modes, false);
}

void Fft2D::inv(const VecC& modes, std::vector<double>& field) const {
  const size_t n = size_t(n1_) * n3_;
  if (modes.size() != n) throw std::invalid_argument("fft: mode size mismatch");
  work_ = modes;
  pass(work_, true);
  field.resize(n);
  for (size_t i = 0; i < n; ++i) field[i] = work_[i].real();
}

void Fft2D::inv_c(const VecC& modes, VecC& field) const {
  const size_t n = size_t(n1_) * n3_;
  if (modes.size() != n) throw std::invalid_argument("fft: mode size mismatch");
  field = modes;
  pass(field, true);
}

namespace {
// signed frequency index for entry a of an n-point transform
int freq_index(int a, int n) { return a <= n / 2 ? a : a - n; }
}  // namespace

SbiBoundary::SbiBoundary(int n1, int n3, double dx, ElasticMaterial material,
                         int orientation, double dt,
                         const KernelProvider& kernels,
                         std::int64_t max_history)
    : n1_(n1),
      n3_(n3),
      dx_(dx),
      dt_(dt),
      material_(material),
      orientation_(orientation),
      fft_(n1, n3) {
  material_.validate();
  if (!(dx > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("sbi: dx and dt must be > 0");
  if (orientation != 1 && orientation != -1)
    throw std::invalid_argument("sbi: orientation must be +1 or -1");

  const double l1 = dx * n1, l3 = dx * n3;
  const std::int64_t nm = grid_size();
  modes_.resize(size_t(nm));
  std::map<std::int64_t, std::int32_t> table_of_q;
  std::int64_t offset = 0;
  for (int a3 = 0; a3 < n3_; ++a3) {
    for (int a1 = 0; a1 < n1_; ++a1) {
      const std::int64_t idx = std::int64_t(a3) * n1_ + a1;
      Mode& m = modes_[size_t(idx)];
      const double k1 = 2.0 * M_PI / l1 * freq_index(a1, n1_);
      const double k3 = 2.0 * M_PI / l3 * freq_index(a3, n3_);
      m.q = std::hypot(k1, k3);
      if (m.q == 0.0) continue;  // uniform mode: radiation damping only
      m.c1 = k1 / m.q;
      m.c3 = k3 / m.q;
      const std::int64_t pair =
          std::int64_t((n3_ - a3) % n3_) * n1_ + (n1_ - a1) % n1_;
      m.partner = pair;
      if (pair < idx) {
        m.mirror = pair;  // conjugate of an already-set-up mode
        continue;
      }
      const std::int64_t key = std::llround(m.q * 1e9);
      auto it = table_of_q.find(key);
      if (it == table_of_q.end()) {
        tables_.push_back(kernels.table(m.q, material_, dt_, max_history));
        it = table_of_q.emplace(key, std::int32_t(tables_.size() - 1)).first;
      }
      m.table = it->second;
      m.window = tables_[size_t(m.table)].window();
      m.offset = offset;
      offset += 2 * m.window;  // doubled ring (each sample stored twice)
    }
  }
  hl_re_.assign(size_t(offset), 0.0);
  hl_im_.assign(size_t(offset), 0.0);
  hm_re_.assign(size_t(offset), 0.0);
  hm_im_.assign(size_t(offset), 0.0);
  h2_re_.assign(size_t(offset), 0.0);
  h2_im_.assign(size_t(offset), 0.0);

  tau_inf_1_.assign(size_t(nm), 0.0);
  tau_inf_2_.assign(size_t(nm), 0.0);
  tau_inf_3_.assign(size_t(nm), 0.0);
}

double SbiBoundary::mode_q(int a1, int a3) const {
  return modes_[size_t(a3) * n1_ + a1].q;
}

void SbiBoundary::set_far_field(const std::vector<double>& tau1,
                                const std::vector<double>& tau2,
                                const std::vector<double>& tau3) {
  const size_t n = size_t(grid_size());
  if (tau1.size() != n || tau2.size() != n || tau3.size() != n)
    throw std::invalid_argument("sbi: far-field size mismatch");
  tau_inf_1_ = tau1;
  tau_inf_2_ = tau2;
  tau_inf_3_ = tau3;
}

void SbiBoundary::push_history(const std::vector<double>& u1,
                               const std::vector<double>& u2,
                               const std::vector<double>& u3,
                               std::int64_t step) {
  if (have_step_base_ && step != last_step_ + 1)
    throw std::runtime_error(
        "sbi: history must be pushed exactly once per step, in order");
  // two real fields ride one complex transform: F(u1 + i u2) recovers both
  // spectra through the Hermitian split below
  const std::int64_t nm = grid_size();
  packed_.resize(size_t(nm));
  for (std::int64_t i = 0; i < nm; ++i)
    packed_[size_t(i)] = cplx(u1[size_t(i)], u2[size_t(i)]);
  fft_.fwd(packed_, spec_a_);
  fft_.fwd(u3, spec_b_);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t idx = 0; idx < nm; ++idx) {
    const Mode& m = modes_[size_t(idx)];
    if (m.window == 0) continue;
    const cplx zk = spec_a_[size_t(idx)];
    const cplx zp = std::conj(spec_a_[size_t(m.partner)]);
    const cplx U1 = 0.5 * (zk + zp);
    const cplx U2 = cplx(0.0, -0.5) * (zk - zp);
    const cplx U3 = spec_b_[size_t(idx)];
    const cplx ul = m.c1 * U1 + m.c3 * U3;
    const cplx um = -m.c3 * U1 + m.c1 * U3;
    // write the sample twice, one window apart: the convolution can then
    // walk any window ending at the head without wrapping
    const std::int64_t s = m.window - 1 - steps_pushed_ % m.window;
    for (std::int64_t slot : {m.offset + s, m.offset + s + m.window}) {
      hl_re_[size_t(slot)] = ul.real();
      hl_im_[size_t(slot)] = ul.imag();
      hm_re_[size_t(slot)] = um.real();
      hm_im_[size_t(slot)] = um.imag();
      h2_re_[size_t(slot)] = U2.real();
      h2_im_[size_t(slot)] = U2.imag();
    }
  }
  ++steps_pushed_;
  last_step_ = step;
  have_step_base_ = true;
}

void SbiBoundary::nonlocal_term(std::vector<double>& s1, std::vector<double>& s2,
                                std::vector<double>& s3) const {
  if (steps_pushed_ == 0)
    throw std::logic_error("sbi: nonlocal term requested before any history");
  const std::int64_t nm = grid_size();
  const auto nmz = static_cast<size_t>(nm);
  VecC S1(nmz), S2(nmz), S3(nmz);
  const double mu = material_.mu;
  const double o = double(orientation_);
  const cplx iu(0.0, 1.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::int64_t idx = 0; idx < nm; ++idx) {
    const Mode& m = modes_[size_t(idx)];
    if (m.window == 0) {
      S1[size_t(idx)] = S2[size_t(idx)] = S3[size_t(idx)] = 0.0;
      continue;
    }
    const KernelTable& tab = tables_[size_t(m.table)];
    const std::int64_t avail = std::min(steps_pushed_, m.window);
    const std::int64_t head = steps_pushed_ - 1;

    // the doubled ring makes "n steps before the head" one contiguous
    // ascending range starting at the head slot; planar re/im storage lets
    // the 10 running sums vectorize in a single pass
    double l11_re = 0, l11_im = 0, c22_re = 0, c22_im = 0, c12_re = 0,
           c12_im = 0, l12_re = 0, l12_im = 0, m33_re = 0, m33_im = 0;
    const std::int64_t base = m.offset + m.window - 1 - head % m.window;
    {
      const double* h11 = tab.h11.data();
      const double* h22 = tab.h22.data();
      const double* h12 = tab.h12.data();
      const double* h33 = tab.h33.data();
      const double* lr = hl_re_.data() + base;
      const double* li = hl_im_.data() + base;
      const double* mr = hm_re_.data() + base;
      const double* mi = hm_im_.data() + base;
      const double* tr = h2_re_.data() + base;
      const double* ti = h2_im_.data() + base;
#ifdef _OPENMP
#pragma omp simd reduction(+ : l11_re, l11_im, c22_re, c22_im, c12_re, \
                               c12_im, l12_re, l12_im, m33_re, m33_im)
#endif
      for (std::int64_t n = 0; n < avail; ++n) {
        l11_re += h11[n] * lr[n];
        l11_im += h11[n] * li[n];
        c22_re += h22[n] * tr[n];
        c22_im += h22[n] * ti[n];
        c12_re += h12[n] * tr[n];
        c12_im += h12[n] * ti[n];
        l12_re += h12[n] * lr[n];
        l12_im += h12[n] * li[n];
        m33_re += h33[n] * mr[n];
        m33_im += h33[n] * mi[n];
      }
    }
    // trapezoid rule: full weight everywhere, then halve the endpoints
    auto endpoint = [&](std::int64_t n) {
      const std::int64_t slot = base + n;
      l11_re -= 0.5 * tab.h11[size_t(n)] * hl_re_[size_t(slot)];
      l11_im -= 0.5 * tab.h11[size_t(n)] * hl_im_[size_t(slot)];
      c22_re -= 0.5 * tab.h22[size_t(n)] * h2_re_[size_t(slot)];
      c22_im -= 0.5 * tab.h22[size_t(n)] * h2_im_[size_t(slot)];
      c12_re -= 0.5 * tab.h12[size_t(n)] * h2_re_[size_t(slot)];
      c12_im -= 0.5 * tab.h12[size_t(n)] * h2_im_[size_t(slot)];
      l12_re -= 0.5 * tab.h12[size_t(n)] * hl_re_[size_t(slot)];
      l12_im -= 0.5 * tab.h12[size_t(n)] * hl_im_[size_t(slot)];
      m33_re -= 0.5 * tab.h33[size_t(n)] * hm_re_[size_t(slot)];
      m33_im -= 0.5 * tab.h33[size_t(n)] * hm_im_[size_t(slot)];
    };
    endpoint(0);
    if (avail > 1) endpoint(avail - 1);
    const cplx conv_l11 = tab.dT * cplx(l11_re, l11_im);
    const cplx conv_2_22 = tab.dT * cplx(c22_re, c22_im);
    const cplx conv_2_12 = tab.dT * cplx(c12_re, c12_im);
    const cplx conv_l12 = tab.dT * cplx(l12_re, l12_im);
    const cplx conv_m33 = tab.dT * cplx(m33_re, m33_im);
    const cplx ul_now(hl_re_[size_t(base)], hl_im_[size_t(base)]);
    const cplx u2_now(h2_re_[size_t(base)], h2_im_[size_t(base)]);

    const cplx sl =
        -mu * m.q *
        (conv_l11 + o * iu * (tab.h12_instant * u2_now + conv_2_12));
    const cplx s2m =
        -mu * m.q *
        (conv_2_22 - o * iu * (tab.h12_instant * ul_now + conv_l12));
    const cplx sm = -mu * m.q * conv_m33;

    S1[size_t(idx)] = m.c1 * sl - m.c3 * sm;
    S3[size_t(idx)] = m.c3 * sl + m.c1 * sm;
    S2[size_t(idx)] = s2m;
  }
  for (std::int64_t idx = 0; idx < nm; ++idx) {
    const std::int64_t p = modes_[size_t(idx)].mirror;
    if (p < 0) continue;
    S1[size_t(idx)] = std::conj(S1[size_t(p)]);
    S2[size_t(idx)] = std::conj(S2[size_t(p)]);
    S3[size_t(idx)] = std::conj(S3[size_t(p)]);
  }
  // s1 and s2 are both real, so invert them together as Re/Im of one
  // complex transform
  packed_.resize(nmz);
  unpacked_.resize(nmz);
  for (size_t i = 0; i < nmz; ++i) packed_[i] = S1[i] + iu * S2[i];
  fft_.inv_c(packed_, unpacked_);
  s1.resize(nmz);
  s2.resize(nmz);
  for (size_t i = 0; i < nmz; ++i) {
    s1[i] = unpacked_[i].real();
    s2[i] = unpacked_[i].imag();
  }
  fft_.inv(S3, s3);
}

void SbiBoundary::traction(const std::vector<double>& v1,
                           const std::vector<double>& v2,
                           const std::vector<double>& v3,
                           std::vector<double>& tau1, std::vector<double>& tau2,
                           std::vector<double>& tau3) const {
  const size_t n = size_t(grid_size());
  if (v1.size() != n || v2.size() != n || v3.size() != n)
    throw std::invalid_argument("sbi: velocity field size mismatch");
  std::vector<double> s1, s2, s3;
  nonlocal_term(s1, s2, s3);
  const double zs = material_.mu / material_.cs();     // shear impedance
  const double zp = zs * material_.cp() / material_.cs();  // normal channel
  tau1.resize(n);
  tau2.resize(n);
  tau3.resize(n);
  for (size_t i = 0; i < n; ++i) {
    tau1[i] = tau_inf_1_[i] - zs * v1[i] + s1[i];
    tau2[i] = tau_inf_2_[i] - zp * v2[i] + s2[i];
    tau3[i] = tau_inf_3_[i] - zs * v3[i] + s3[i];
  }
}

}  // namespace hsbi
