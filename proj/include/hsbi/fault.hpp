#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <vector>

#include "hsbi/fem.hpp"

namespace hsbi {

using Eigen::Vector2d;

/// Linear slip-weakening friction parameters.
struct SlipWeakeningLaw {
  double mu_s = 0.0;
  double mu_k = 0.0;
  double delta_c = 0.0;

  void validate() const {
    if (!(mu_s >= mu_k && mu_k > 0.0))
      throw std::invalid_argument("friction: need mu_s >= mu_k > 0");
    if (!(delta_c > 0.0))
      throw std::invalid_argument("friction: delta_c must be > 0");
  }
};

/// mu_s - (mu_s - mu_k) delta/delta_c below delta_c, mu_k beyond.
inline double friction_coefficient(const SlipWeakeningLaw& law, double delta) {
  if (delta < 0.0)
    throw std::invalid_argument("friction_coefficient: delta must be >= 0");
  if (delta >= law.delta_c) return law.mu_k;
  return law.mu_s - (law.mu_s - law.mu_k) * delta / law.delta_c;
}

struct Nucleation {
  enum class Mechanism { StressStep, StrengthDrop };
  Mechanism mechanism = Mechanism::StressStep;
  double x1_lo = 0, x1_hi = 0, x3_lo = 0, x3_hi = 0;  // patch in fault coords
  double value = 0.0;   // imposed shear traction for StressStep [Pa]
  double onset = 0.0;   // [s]
};

/// Split-node planar fault (normal e2). In Symmetric mode only the + side
/// exists (fault on the lower boundary of a half-strip, mirror implied);
/// in TwoSided mode each fault node is a +/- duplicate pair.
struct FaultSurface {
  enum class Mode { Symmetric, TwoSided };
  Mode mode = Mode::Symmetric;

  int plane_j2 = 0;          // grid plane index of the fault
  double x1_origin = 0.0;    // coordinate of fault node (i=0, k=0)
  double x3_origin = 0.0;
  double dx = 0.0;

  std::vector<std::int64_t> plus_node;
  std::vector<std::int64_t> minus_node;  // empty in Symmetric mode
  std::vector<int> ii, kk;               // plane indices of each fault node

  VectorXd area;              // nodal tributary area [m^2]
  Eigen::ArrayX2d tau0;       // background shear traction (x1, x3) [Pa]
  VectorXd sigma0;            // background normal stress, compression > 0 [Pa]
  VectorXd mu_s, mu_k, delta_c;
  std::vector<std::uint8_t> unbreakable;  // infinite strength (no-slip)

  // per-node state
  Eigen::ArrayX2d slip;       // tangential opening (u+ - u-)
  Eigen::ArrayX2d slip_rate;
  Eigen::ArrayX2d tau;        // resolved total shear traction [Pa]
  Eigen::ArrayX2d tau_pert;   // applied perturbation traction (incl. normal below)
  VectorXd tau_pert_n;        // applied normal perturbation traction [Pa]
  VectorXd delta_weak;        // running max slip magnitude (weakening variable)
  VectorXd sigma_n_eff;       // effective normal stress [Pa]
  std::vector<std::uint8_t> sticking;

  std::vector<Nucleation> nucleation;

  std::int64_t size() const { return std::int64_t(plus_node.size()); }
  double x1(std::int64_t n) const { return x1_origin + dx * ii[size_t(n)]; }
  double x3(std::int64_t n) const { return x3_origin + dx * kk[size_t(n)]; }

  /// Index of the fault node nearest to (x1, x3); throws if farther than dx.
  std::int64_t find_node(double x1, double x3) const;

  void allocate_state();
};

/// One-sided fault covering the unique (periodic) nodes of grid plane j2.
/// The caller pins u2 = 0 on the plane via Dirichlet BCs.
FaultSurface make_symmetric_fault(const StructuredGrid& grid, int plane_j2,
                                  bool periodic);

/// Interior split-node fault patch on plane j2: nodes with i in [i_lo, i_hi]
/// and k in [k_lo, k_hi] (inclusive) are duplicated; elements below the
/// plane are rewired to the - copies. Patch-boundary nodes stay continuous.
FaultSurface add_split_fault(Connectivity& conn, int plane_j2, int i_lo,
                             int i_hi, int k_lo, int k_hi);

/// Diagonal fault impedance per node: Z^-1 = dt (M+^-1 B+ + M-^-1 B-)/2,
/// with the mirror side implied in Symmetric mode.
VectorXd fault_impedance(const FaultSurface& fault, const LumpedMass& mass,
                         double dt);

/// Predicted slip-rate discontinuity [| v_pred - dt/2 a - dt M^-1 (Ku - f) |]
/// per fault node (columns: x1, x2, x3 components). Symmetric mode returns
/// twice the one-sided tangential value and zero in the normal slot.
Eigen::ArrayX3d free_slip_predictor(const FaultSurface& fault,
                                    const SimulationState& state,
                                    const VectorXd& f_int,
                                    const VectorXd& f_ext,
                                    const LumpedMass& mass);

/// tau_tilde = 1/2 Z [|v|]; applying -tau/+tau re-zeroes the predictor.
inline Vector2d stick_traction(double z, const Vector2d& predicted_rate) {
  return 0.5 * z * predicted_rate;
}

/// Eq. stick/slip selection: keep tau_tilde when within strength, otherwise
/// cap its magnitude at tau_s preserving direction. Returns (tau, sticking).
std::pair<Vector2d, bool> resolve_traction(const Vector2d& tau_tilde,
                                           double tau_s);

/// Overwrites tau0 (stress step) or drops strength to kinetic (strength
/// drop) inside each active nucleation patch; idempotent after onset.
void apply_nucleation(FaultSurface& fault, double t);

/// Applies nucleation overrides active at time t, resolves stick/slip for
/// every node and accumulates the nodal fault forces into f_fault.
void resolve_fault(FaultSurface& fault, const Eigen::ArrayX3d& predictor,
                   const VectorXd& impedance, double t, VectorXd& f_fault);

/// Post-corrector state update: slip from displacement discontinuities,
/// slip rate from velocities, weakening variable as running max.
void update_fault_state(FaultSurface& fault, const SimulationState& state);

}  // namespace hsbi
