#include "hsbi/sbim.hpp"

#include <cmath>
#include <stdexcept>

namespace hsbi {

namespace {

FaultSurface make_flat_fault(int n1, int n3, double dx) {
  FaultSurface f;
  f.mode = FaultSurface::Mode::Symmetric;
  f.dx = dx;
  f.plus_node.resize(size_t(n1) * n3, -1);
  for (int k = 0; k < n3; ++k) {
    for (int i = 0; i < n1; ++i) {
      f.ii.push_back(i);
      f.kk.push_back(k);
    }
  }
  f.allocate_state();
  return f;
}

}  // namespace

SbimSolver::SbimSolver(int n1, int n3, double dx, ElasticMaterial material,
                       double dt, const KernelProvider& kernels,
                       std::int64_t max_history)
    : dt_(dt),
      material_(material),
      boundary_(n1, n3, dx, material, +1, dt, kernels, max_history),
      fault_(make_flat_fault(n1, n3, dx)) {
  const size_t n = size_t(boundary_.grid_size());
  u1_.assign(n, 0.0);
  u2_.assign(n, 0.0);
  u3_.assign(n, 0.0);
}

void SbimSolver::step() {
  const std::int64_t n = fault_.size();
  // half-space displacement is half the slip
  for (std::int64_t i = 0; i < n; ++i) {
    u1_[size_t(i)] = 0.5 * fault_.slip(i, 0);
    u3_[size_t(i)] = 0.5 * fault_.slip(i, 1);
  }
  boundary_.push_history(u1_, u2_, u3_, step_);
  boundary_.nonlocal_term(s1_, s2_, s3_);

  apply_nucleation(fault_, t_);
  // combined radiation impedance of both half-spaces acting on the slip rate
  const double damping = 0.5 * material_.mu / material_.cs();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const Vector2d tau_stick(fault_.tau0(i, 0) + s1_[size_t(i)],
                             fault_.tau0(i, 1) + s3_[size_t(i)]);
    Vector2d tau_new;
    Vector2d rate = Vector2d::Zero();
    bool stick = true;
    if (fault_.unbreakable[size_t(i)]) {
      tau_new = tau_stick;
    } else {
      SlipWeakeningLaw law{fault_.mu_s[i], fault_.mu_k[i], fault_.delta_c[i]};
      if (law.mu_s < law.mu_k) law.mu_s = law.mu_k;
      const double tau_s =
          fault_.sigma0[i] * friction_coefficient(law, fault_.delta_weak[i]);
      std::tie(tau_new, stick) = resolve_traction(tau_stick, tau_s);
      if (!stick) rate = (tau_stick - tau_new) / damping;
    }
    fault_.tau.row(i) = tau_new.transpose().array();
    fault_.tau_pert.row(i) = (tau_new - Vector2d(fault_.tau0(i, 0),
                                                 fault_.tau0(i, 1)))
                                 .transpose()
                                 .array();
    fault_.sticking[size_t(i)] = stick ? 1 : 0;
    fault_.slip_rate.row(i) = rate.transpose().array();
    fault_.slip.row(i) += dt_ * rate.transpose().array();
    fault_.delta_weak[i] =
        std::max(fault_.delta_weak[i], fault_.slip.row(i).matrix().norm());
  }
  t_ += dt_;
  ++step_;
}

}  // namespace hsbi
