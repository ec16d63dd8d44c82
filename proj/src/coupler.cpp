#include "hsbi/coupler.hpp"

#include <cmath>
#include <stdexcept>

namespace hsbi {

PeriodicTies periodic_ties(const StructuredGrid& grid) {
  PeriodicTies ties;
  const int n1 = grid.n1(), n3 = grid.n3();
  for (int j = 0; j <= grid.n2(); ++j) {
    for (int k = 0; k <= n3; ++k) {
      for (int i = 0; i <= n1; ++i) {
        if (i < n1 && k < n3) continue;  // master
        ties.emplace_back(grid.node_index(i % n1, j, k % n3),
                          grid.node_index(i, j, k));
      }
    }
  }
  return ties;
}

void fold_mass(const PeriodicTies& ties, LumpedMass& mass) {
  for (const auto& [m, s] : ties) mass.m[m] += mass.m[s];
  for (const auto& [m, s] : ties) mass.m[s] = mass.m[m];
  mass.inv_m = mass.m.cwiseInverse();
}

void fold_forces(const PeriodicTies& ties, VectorXd& f) {
  for (const auto& [m, s] : ties) {
    f.segment<3>(3 * m) += f.segment<3>(3 * s);
    f.segment<3>(3 * s).setZero();
  }
}

void sync_slaves(const PeriodicTies& ties, SimulationState& state) {
  for (const auto& [m, s] : ties) {
    state.u.segment<3>(3 * s) = state.u.segment<3>(3 * m);
    state.v.segment<3>(3 * s) = state.v.segment<3>(3 * m);
    state.a.segment<3>(3 * s) = state.a.segment<3>(3 * m);
  }
}

SbiBinding bind_boundary(const StructuredGrid& grid, int plane_j2,
                         int orientation, const ElasticMaterial& material,
                         double dt, const KernelProvider& kernels,
                         std::int64_t max_history) {
  SbiBinding b;
  b.plane_j2 = plane_j2;
  b.area = grid.dx() * grid.dx();
  const int n1 = grid.n1(), n3 = grid.n3();
  b.boundary = std::make_unique<SbiBoundary>(n1, n3, grid.dx(), material,
                                             orientation, dt, kernels,
                                             max_history);
  b.nodes.resize(size_t(n1) * n3, -1);
  const double x2_plane = grid.origin()[1] + grid.dx() * plane_j2;
  for (int k = 0; k < n3; ++k) {
    for (int i = 0; i < n1; ++i) {
      const Vec3 want(grid.origin()[0] + grid.dx() * i, x2_plane,
                      grid.origin()[2] + grid.dx() * k);
      const std::int64_t node = grid.node_index(i, plane_j2, k);
      if ((grid.node_coord(node) - want).norm() > 0.5 * grid.dx())
        throw std::runtime_error("coupler: boundary grid point has no FE node");
      b.nodes[size_t(k) * n1 + i] = node;
    }
  }
  return b;
}

void HybridModel::finalize(double dt) {
  const std::int64_t n = stiffness.connectivity().total_nodes();
  state = SimulationState(n, dt);
  f_int_ = VectorXd::Zero(3 * n);
  f_ext_ = VectorXd::Zero(3 * n);
  f_fault_ = VectorXd::Zero(3 * n);
  impedances.clear();
  for (const auto& f : faults)
    impedances.push_back(fault_impedance(f, mass, dt));
  for (const auto& b : bindings) {
    // the binding and the strip must share one clock
    if (b.boundary->dt() != dt)
      throw std::invalid_argument("coupler: boundary dt differs from FE dt");
    if (b.boundary->steps_pushed() != 0)
      throw std::logic_error("coupler: boundary already has history");
  }
  size_t max_b = 0;
  for (const auto& b : bindings)
    max_b = std::max(max_b, size_t(b.boundary->grid_size()));
  b_u1_.resize(max_b);
  b_u2_.resize(max_b);
  b_u3_.resize(max_b);
  b_v1_.resize(max_b);
  b_v2_.resize(max_b);
  b_v3_.resize(max_b);
  b_t1_.resize(max_b);
  b_t2_.resize(max_b);
  b_t3_.resize(max_b);
  finalized_ = true;
}

void HybridModel::exchange(VectorXd& f_ext) {
  f_ext.setZero();
  for (auto& b : bindings) {
    const std::int64_t nb = b.boundary->grid_size();
    b_u1_.resize(size_t(nb));
    b_u2_.resize(size_t(nb));
    b_u3_.resize(size_t(nb));
    b_v1_.resize(size_t(nb));
    b_v2_.resize(size_t(nb));
    b_v3_.resize(size_t(nb));
    for (std::int64_t i = 0; i < nb; ++i) {
      const std::int64_t d = 3 * b.nodes[size_t(i)];
      b_u1_[size_t(i)] = state.u[d + 0];
      b_u2_[size_t(i)] = state.u[d + 1];
      b_u3_[size_t(i)] = state.u[d + 2];
      b_v1_[size_t(i)] = state.v[d + 0];
      b_v2_[size_t(i)] = state.v[d + 1];
      b_v3_[size_t(i)] = state.v[d + 2];
      if (!std::isfinite(b_u1_[size_t(i)] + b_u2_[size_t(i)] +
                         b_u3_[size_t(i)] + b_v1_[size_t(i)] +
                         b_v2_[size_t(i)] + b_v3_[size_t(i)]))
        throw std::runtime_error(
            "coupler: non-finite boundary field in exchange");
    }
    b.boundary->push_history(b_u1_, b_u2_, b_u3_, state.step);
    b.boundary->traction(b_v1_, b_v2_, b_v3_, b_t1_, b_t2_, b_t3_);
    for (std::int64_t i = 0; i < nb; ++i) {
      const std::int64_t d = 3 * b.nodes[size_t(i)];
      f_ext[d + 0] += b.area * b_t1_[size_t(i)];
      f_ext[d + 1] += b.area * b_t2_[size_t(i)];
      f_ext[d + 2] += b.area * b_t3_[size_t(i)];
    }
  }
}

void HybridModel::step() {
  if (!finalized_) throw std::logic_error("coupler: step before finalize");
  predict(state, dirichlet);
  exchange(f_ext_);
  f_int_.setZero();
  stiffness.apply(state.u, f_int_);
  fold_forces(ties, f_int_);
  fold_forces(ties, f_ext_);
  f_fault_.setZero();
  for (size_t f = 0; f < faults.size(); ++f) {
    const auto pred =
        free_slip_predictor(faults[f], state, f_int_, f_ext_, mass);
    resolve_fault(faults[f], pred, impedances[f], state.t, f_fault_);
  }
  correct(state, f_int_, f_ext_, f_fault_, mass, dirichlet);
  sync_slaves(ties, state);
  for (auto& f : faults) update_fault_state(f, state);
  check_stability(state);
}

}  // namespace hsbi
