#include "hsbi/fault.hpp"

#include <cmath>
#include <stdexcept>

namespace hsbi {

void FaultSurface::allocate_state() {
  const std::int64_t n = size();
  if (area.size() == 0) area = VectorXd::Constant(n, dx * dx);
  tau0 = Eigen::ArrayX2d::Zero(n, 2);
  sigma0 = VectorXd::Zero(n);
  mu_s = VectorXd::Zero(n);
  mu_k = VectorXd::Zero(n);
  delta_c = VectorXd::Ones(n);
  unbreakable.assign(size_t(n), 0);
  slip = Eigen::ArrayX2d::Zero(n, 2);
  slip_rate = Eigen::ArrayX2d::Zero(n, 2);
  tau = Eigen::ArrayX2d::Zero(n, 2);
  tau_pert = Eigen::ArrayX2d::Zero(n, 2);
  tau_pert_n = VectorXd::Zero(n);
  delta_weak = VectorXd::Zero(n);
  sigma_n_eff = sigma0;
  sticking.assign(size_t(n), 1);
}

std::int64_t FaultSurface::find_node(double x1q, double x3q) const {
  std::int64_t best = -1;
  double best_d2 = std::numeric_limits<double>::max();
  for (std::int64_t n = 0; n < size(); ++n) {
    const double d1 = x1(n) - x1q, d3 = x3(n) - x3q;
    const double d2 = d1 * d1 + d3 * d3;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = n;
    }
  }
  if (best < 0 || best_d2 > dx * dx)
    throw std::invalid_argument("fault: no node near requested station");
  return best;
}

FaultSurface make_symmetric_fault(const StructuredGrid& grid, int plane_j2,
                                  bool periodic) {
  FaultSurface f;
  f.mode = FaultSurface::Mode::Symmetric;
  f.plane_j2 = plane_j2;
  f.dx = grid.dx();
  f.x1_origin = grid.origin()[0];
  f.x3_origin = grid.origin()[2];
  const int ni = periodic ? grid.n1() : grid.n1() + 1;
  const int nk = periodic ? grid.n3() : grid.n3() + 1;
  f.plus_node.reserve(size_t(ni) * nk);
  std::vector<double> areas;
  for (int k = 0; k < nk; ++k) {
    for (int i = 0; i < ni; ++i) {
      f.plus_node.push_back(grid.node_index(i, plane_j2, k));
      f.ii.push_back(i);
      f.kk.push_back(k);
      if (!periodic) {
        double a = grid.dx() * grid.dx();
        if (i == 0 || i == grid.n1()) a *= 0.5;
        if (k == 0 || k == grid.n3()) a *= 0.5;
        areas.push_back(a);
      }
    }
  }
  if (!periodic)
    f.area = Eigen::Map<VectorXd>(areas.data(), std::int64_t(areas.size()));
  f.allocate_state();
  return f;
}

FaultSurface add_split_fault(Connectivity& conn, int plane_j2, int i_lo,
                             int i_hi, int k_lo, int k_hi) {
  const StructuredGrid& grid = conn.grid();
  if (plane_j2 <= 0 || plane_j2 >= grid.n2())
    throw std::invalid_argument("split fault plane must be interior");
  if (i_lo < 1 || k_lo < 1 || i_hi > grid.n1() - 1 || k_hi > grid.n3() - 1 ||
      i_lo > i_hi || k_lo > k_hi)
    throw std::invalid_argument("split fault patch outside plane interior");

  FaultSurface f;
  f.mode = FaultSurface::Mode::TwoSided;
  f.plane_j2 = plane_j2;
  f.dx = grid.dx();
  f.x1_origin = grid.origin()[0] + grid.dx() * i_lo;
  f.x3_origin = grid.origin()[2] + grid.dx() * k_lo;

  std::int64_t next = conn.total_nodes();
  const int ni = i_hi - i_lo + 1;
  const int nk = k_hi - k_lo + 1;
  std::vector<std::int64_t> minus_of(size_t(ni) * nk);
  for (int k = k_lo; k <= k_hi; ++k) {
    for (int i = i_lo; i <= i_hi; ++i) {
      f.plus_node.push_back(grid.node_index(i, plane_j2, k));
      f.minus_node.push_back(next);
      minus_of[size_t(k - k_lo) * ni + (i - i_lo)] = next;
      f.ii.push_back(i - i_lo);
      f.kk.push_back(k - k_lo);
      ++next;
    }
  }
  conn.set_total_nodes(next);

  // rewire the element row below the plane to the - copies
  for (int k = k_lo - 1; k <= k_hi; ++k) {
    for (int i = i_lo - 1; i <= i_hi; ++i) {
      const std::int64_t e = grid.element_index(i, plane_j2 - 1, k);
      auto nodes = conn.nodes(e);
      bool changed = false;
      int c = 0;
      for (int dj = 0; dj <= 1; ++dj) {
        for (int dk = 0; dk <= 1; ++dk) {
          for (int di = 0; di <= 1; ++di, ++c) {
            if (dj != 1) continue;
            const int gi = i + di, gk = k + dk;
            if (gi >= i_lo && gi <= i_hi && gk >= k_lo && gk <= k_hi) {
              nodes[size_t(c)] =
                  minus_of[size_t(gk - k_lo) * ni + (gi - i_lo)];
              changed = true;
            }
          }
        }
      }
      if (changed) conn.override_nodes(e, nodes);
    }
  }

  f.allocate_state();
  return f;
}

VectorXd fault_impedance(const FaultSurface& fault, const LumpedMass& mass,
                         double dt) {
  const std::int64_t n = fault.size();
  VectorXd z(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = fault.area[i];
    const double inv_p = mass.inv_m[fault.plus_node[size_t(i)]];
    const double inv_m = fault.mode == FaultSurface::Mode::Symmetric
                             ? inv_p
                             : mass.inv_m[fault.minus_node[size_t(i)]];
    const double zinv = 0.5 * dt * a * (inv_p + inv_m);
    if (!(zinv > 0.0)) throw std::invalid_argument("impedance: zero nodal mass");
    z[i] = 1.0 / zinv;
  }
  return z;
}

Eigen::ArrayX3d free_slip_predictor(const FaultSurface& fault,
                                    const SimulationState& state,
                                    const VectorXd& f_int,
                                    const VectorXd& f_ext,
                                    const LumpedMass& mass) {
  const std::int64_t n = fault.size();
  Eigen::ArrayX3d pred(n, 3);
  const double dt = state.dt;
  // velocity each side would reach half a step past the corrector with zero
  // fault traction (state.v holds the predictor velocity here); the stick
  // traction tau_tilde = 1/2 Z [|.|] re-zeroes exactly this jump, which
  // freezes the displacement discontinuity over the following step.
  auto side_val = [&](std::int64_t node) -> Eigen::Vector3d {
    const std::int64_t d = 3 * node;
    return state.v.segment<3>(d) - 0.5 * dt * state.a.segment<3>(d) -
           dt * mass.inv_m[node] *
               (f_int.segment<3>(d) - f_ext.segment<3>(d));
  };
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::Vector3d p;
    if (fault.mode == FaultSurface::Mode::Symmetric) {
      p = 2.0 * side_val(fault.plus_node[size_t(i)]);
      p[1] = 0.0;  // normal pinned by symmetry
    } else {
      p = side_val(fault.plus_node[size_t(i)]) -
          side_val(fault.minus_node[size_t(i)]);
    }
    pred.row(i) = p.transpose().array();
  }
  return pred;
}

std::pair<Vector2d, bool> resolve_traction(const Vector2d& tau_tilde,
                                           double tau_s) {
  const double mag = tau_tilde.norm();
  if (mag <= tau_s) return {tau_tilde, true};
  return {tau_tilde * (tau_s / mag), false};
}

void apply_nucleation(FaultSurface& fault, double t) {
  for (const auto& nuc : fault.nucleation) {
    if (t < nuc.onset) continue;
    for (std::int64_t i = 0; i < fault.size(); ++i) {
      const double x1 = fault.x1(i), x3 = fault.x3(i);
      if (x1 < nuc.x1_lo || x1 > nuc.x1_hi || x3 < nuc.x3_lo ||
          x3 > nuc.x3_hi)
        continue;
      if (nuc.mechanism == Nucleation::Mechanism::StressStep) {
        fault.tau0(i, 0) = nuc.value;
        fault.tau0(i, 1) = 0.0;
      } else {
        fault.mu_s[i] = fault.mu_k[i];  // strength drops to kinetic
      }
    }
  }
}

void resolve_fault(FaultSurface& fault, const Eigen::ArrayX3d& predictor,
                   const VectorXd& impedance, double t, VectorXd& f_fault) {
  apply_nucleation(fault, t);
  const std::int64_t n = fault.size();
  const bool symmetric = fault.mode == FaultSurface::Mode::Symmetric;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const double z = impedance[i];
    const Vector2d pert_stick =
        stick_traction(z, Vector2d(predictor(i, 0), predictor(i, 2)));
    const double pn = symmetric ? 0.0 : 0.5 * z * predictor(i, 1);
    const double sigma_n =
        symmetric ? fault.sigma0[i] : std::max(0.0, fault.sigma0[i] - pn);

    const Vector2d tau0(fault.tau0(i, 0), fault.tau0(i, 1));
    const Vector2d tau_tilde = tau0 + pert_stick;

    Vector2d tau_new;
    bool stick;
    if (fault.unbreakable[size_t(i)]) {
      tau_new = tau_tilde;
      stick = true;
    } else {
      SlipWeakeningLaw law{fault.mu_s[i], fault.mu_k[i], fault.delta_c[i]};
      if (law.mu_s < law.mu_k) law.mu_s = law.mu_k;  // after strength drop
      const double tau_s = sigma_n * friction_coefficient(law, fault.delta_weak[i]);
      std::tie(tau_new, stick) = resolve_traction(tau_tilde, tau_s);
    }
    const Vector2d pert = tau_new - tau0;

    fault.tau.row(i) = tau_new.transpose().array();
    fault.tau_pert.row(i) = pert.transpose().array();
    fault.tau_pert_n[i] = pn;
    fault.sigma_n_eff[i] = sigma_n;
    fault.sticking[size_t(i)] = stick ? 1 : 0;

    const double a = fault.area[i];
    const std::int64_t p = 3 * fault.plus_node[size_t(i)];
    f_fault[p + 0] -= a * pert[0];
    f_fault[p + 2] -= a * pert[1];
    if (!symmetric) {
      f_fault[p + 1] -= a * pn;
      const std::int64_t m = 3 * fault.minus_node[size_t(i)];
      f_fault[m + 0] += a * pert[0];
      f_fault[m + 1] += a * pn;
      f_fault[m + 2] += a * pert[1];
    }
  }
}

void update_fault_state(FaultSurface& fault, const SimulationState& state) {
  const std::int64_t n = fault.size();
  const bool symmetric = fault.mode == FaultSurface::Mode::Symmetric;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t p = 3 * fault.plus_node[size_t(i)];
    Vector2d du(state.u[p + 0], state.u[p + 2]);
    Vector2d dv(state.v[p + 0], state.v[p + 2]);
    if (symmetric) {
      du *= 2.0;
      dv *= 2.0;
    } else {
      const std::int64_t m = 3 * fault.minus_node[size_t(i)];
      du -= Vector2d(state.u[m + 0], state.u[m + 2]);
      dv -= Vector2d(state.v[m + 0], state.v[m + 2]);
    }
    fault.slip.row(i) = du.transpose().array();
    fault.slip_rate.row(i) = dv.transpose().array();
    fault.delta_weak[i] = std::max(fault.delta_weak[i], du.norm());
  }
}

}  // namespace hsbi
