#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "hsbi/fault.hpp"
#include "hsbi/sbi.hpp"

namespace hsbi {

/// Master -> slave node pairs tying the periodic side boundaries of the
/// strip together (slave nodes are the duplicated i1 = N1 / k3 = N3 edges).
using PeriodicTies = std::vector<std::pair<std::int64_t, std::int64_t>>;

PeriodicTies periodic_ties(const StructuredGrid& grid);

/// Accumulate slave nodal mass into masters, then mirror so both carry the
/// periodic total.
void fold_mass(const PeriodicTies& ties, LumpedMass& mass);

/// Accumulate slave dof forces into the master dofs (slaves zeroed).
void fold_forces(const PeriodicTies& ties, VectorXd& f);

/// Copy u, v, a from masters onto their slaves.
void sync_slaves(const PeriodicTies& ties, SimulationState& state);

/// One half-space boundary glued onto a horizontal plane of the strip:
/// the spectral machinery plus the FE node of each boundary grid point.
struct SbiBinding {
  std::unique_ptr<SbiBoundary> boundary;
  std::vector<std::int64_t> nodes;  // FE node per grid point (k3*n1 + i1)
  double area = 0.0;                // tributary area (dx^2, periodic grid)
  int plane_j2 = 0;
};

/// Maps the unique periodic nodes of grid plane j2 onto a half-space
/// boundary by coordinate lookup; throws if dt disagrees with the boundary
/// or a grid point has no FE node within dx/2.
SbiBinding bind_boundary(const StructuredGrid& grid, int plane_j2,
                         int orientation, const ElasticMaterial& material,
                         double dt, const KernelProvider& kernels,
                         std::int64_t max_history);

/// The coupled model: explicit FE strip, split-node faults, periodic side
/// ties and half-space boundaries. Scenario builders fill the fields; step()
/// runs the coupled update.
class HybridModel {
 public:
  StructuredGrid grid;
  std::vector<ElasticMaterial> materials;
  StiffnessOperator stiffness;
  LumpedMass mass;
  SimulationState state;
  std::vector<DirichletBC> dirichlet;
  PeriodicTies ties;
  std::vector<FaultSurface> faults;
  std::vector<VectorXd> impedances;
  std::vector<SbiBinding> bindings;

  /// Sizes the state/scratch vectors and the fault impedances; call once
  /// after all fields are in place.
  void finalize(double dt);

  /// One explicit coupled step:
  ///  1. FE predictor (v*, u_{t+1})
  ///  2. boundary exchange: push u_{t+1}, tractions from v* -> f_ext
  ///  3. internal forces f_int = K u_{t+1}
  ///  4. periodic folding of f_int, f_ext
  ///  5. fault stick/slip resolution -> f_fault
  ///  6. corrector
  ///  7. periodic sync, fault state update, blow-up check
  void step();

  /// Stage 2 in isolation (for orchestration tests): returns the assembled
  /// external force vector for given displacement/velocity fields.
  void exchange(VectorXd& f_ext);

  const VectorXd& f_int() const { return f_int_; }
  const VectorXd& f_ext() const { return f_ext_; }
  const VectorXd& f_fault() const { return f_fault_; }

 private:
  VectorXd f_int_, f_ext_, f_fault_;
  std::vector<double> b_u1_, b_u2_, b_u3_, b_v1_, b_v2_, b_v3_;
  std::vector<double> b_t1_, b_t2_, b_t3_;
  bool finalized_ = false;
};

}  // namespace hsbi
