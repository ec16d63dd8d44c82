#pragma once

#include <memory>

#include "hsbi/fault.hpp"
#include "hsbi/sbi.hpp"

namespace hsbi {

/// Boundary-integral-only reference solver: a planar slip-weakening fault
/// between two identical half-spaces, exploiting symmetry (u+ = slip/2).
/// Valid only for homogeneous material; the hybrid scheme must reproduce it
/// in that limit.
class SbimSolver {
 public:
  SbimSolver(int n1, int n3, double dx, ElasticMaterial material, double dt,
             const KernelProvider& kernels, std::int64_t max_history = 0);

  /// Friction parameters, prestress and state live here (plus_node /
  /// minus_node are unused).
  FaultSurface& fault() { return fault_; }
  const FaultSurface& fault() const { return fault_; }

  double dt() const { return dt_; }
  double time() const { return t_; }
  std::int64_t step_index() const { return step_; }

  /// One explicit update: push slip/2 history, evaluate the nonlocal term,
  /// resolve stick/slip, advance slip by dt * slip_rate.
  void step();

 private:
  double dt_;
  double t_ = 0.0;
  std::int64_t step_ = 0;
  ElasticMaterial material_;
  SbiBoundary boundary_;
  FaultSurface fault_;
  std::vector<double> u1_, u2_, u3_, s1_, s2_, s3_;
};

}  // namespace hsbi
