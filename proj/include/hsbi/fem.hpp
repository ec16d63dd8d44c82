#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hsbi/grid.hpp"

namespace hsbi {

using Eigen::VectorXd;
using ElementMatrix = Eigen::Matrix<double, 24, 24>;

/// Raised by the blow-up detector when the explicit loop goes unstable.
struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Global displacement/velocity/acceleration vectors (3 dofs per node,
/// split-node duplicates included) plus time bookkeeping. During a step,
/// between predict() and correct(), `v` holds the velocity predictor.
struct SimulationState {
  VectorXd u, v, a;
  double t = 0.0;
  double dt = 0.0;
  std::int64_t step = 0;

  explicit SimulationState(std::int64_t num_nodes = 0, double dt_ = 0.0)
      : u(VectorXd::Zero(3 * num_nodes)),
        v(VectorXd::Zero(3 * num_nodes)),
        a(VectorXd::Zero(3 * num_nodes)),
        dt(dt_) {}
  std::int64_t num_nodes() const { return u.size() / 3; }
};

/// Diagonal (row-sum lumped) mass, one scalar per node.
struct LumpedMass {
  VectorXd m;      // [kg]
  VectorXd inv_m;  // elementwise inverse
};

struct DirichletBC {
  std::int64_t dof = 0;  // global dof index (3*node + component)
  double value = 0.0;
};

/// Element connectivity for the structured mesh with optional per-element
/// node overrides (split-node duplicates near faults, periodic ties).
class Connectivity {
 public:
  Connectivity() = default;
  Connectivity(const StructuredGrid* grid, std::int64_t total_nodes)
      : grid_(grid),
        total_nodes_(total_nodes),
        override_slot_(size_t(grid->num_elements()), -1) {}

  const StructuredGrid& grid() const { return *grid_; }
  std::int64_t total_nodes() const { return total_nodes_; }
  void set_total_nodes(std::int64_t n) { total_nodes_ = n; }

  std::array<std::int64_t, 8> nodes(std::int64_t e) const {
    int s = override_slot_[size_t(e)];
    return s < 0 ? grid_->element_nodes(e) : overrides_[size_t(s)];
  }

  void override_nodes(std::int64_t e, const std::array<std::int64_t, 8>& n) {
    int& s = override_slot_[size_t(e)];
    if (s < 0) {
      s = int(overrides_.size());
      overrides_.push_back(n);
    } else {
      overrides_[size_t(s)] = n;
    }
  }

 private:
  const StructuredGrid* grid_ = nullptr;
  std::int64_t total_nodes_ = 0;
  std::vector<int> override_slot_;
  std::vector<std::array<std::int64_t, 8>> overrides_;
};

/// Per-region 24x24 cubic-hex stiffness templates plus the element loop
/// machinery (8-color ordering gives deterministic parallel assembly).
class StiffnessOperator {
 public:
  StiffnessOperator() = default;
  StiffnessOperator(Connectivity conn,
                    const std::vector<ElasticMaterial>& materials);

  const Connectivity& connectivity() const { return conn_; }
  Connectivity& connectivity() { return conn_; }
  const ElementMatrix& element_template(int region) const {
    return templates_[size_t(region)];
  }

  /// f_int = K u, gather-compute-scatter over elements.
  void apply(const VectorXd& u, VectorXd& f_int) const;
  VectorXd apply(const VectorXd& u) const {
    VectorXd f = VectorXd::Zero(u.size());
    apply(u, f);
    return f;
  }

 private:
  Connectivity conn_;
  std::vector<ElementMatrix> templates_;
  std::array<std::vector<std::int64_t>, 8> colors_;
};

/// Full 2x2x2 Gauss integration of B^T C B over the cube of edge dx.
ElementMatrix element_stiffness(const ElasticMaterial& material, double dx);

/// Row-sum lumping: each corner of an element receives rho*dx^3/8.
LumpedMass assemble_lumped_mass(const Connectivity& conn,
                                const std::vector<ElasticMaterial>& materials);

/// dt = safety * dx / max regional cp.
double cfl_timestep(const StructuredGrid& grid,
                    const std::vector<ElasticMaterial>& materials,
                    double safety = 0.4);

/// Eqs. of the explicit predictor: v <- v + dt a (predictor), u <- u + dt v;
/// Dirichlet dofs overwritten.
void predict(SimulationState& state, const std::vector<DirichletBC>& dirichlet);

/// Corrector: da = (f_total) M^-1 - a with f_total = -f_int + f_ext + f_fault;
/// v += dt/2 da; a += da; t += dt.
void correct(SimulationState& state, const VectorXd& f_int,
             const VectorXd& f_ext, const VectorXd& f_fault,
             const LumpedMass& mass, const std::vector<DirichletBC>& dirichlet);

/// Blow-up detector; throws InstabilityError when max |v| exceeds 1e6 m/s.
void check_stability(const SimulationState& state);

}  // namespace hsbi
