#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "hsbi/coupler.hpp"
#include "hsbi/sbim.hpp"

namespace hsbi {

/// Named observation point on a fault plane (fault-local coordinates).
struct Station {
  std::string name;
  double x1 = 0.0;
  double x3 = 0.0;
  int fault = 0;  // index into Scenario::faults
};

/// Declarative description of one planar fault: where it sits in the strip,
/// where rupture is permitted, friction, prestress and nucleation.
struct FaultSpec {
  double x2 = 0.0;  // strip coordinate of the fault plane
  // rupture-permitted box in fault coordinates; nodes outside never slip
  double x1_lo = 0.0, x1_hi = 0.0, x3_lo = 0.0, x3_hi = 0.0;
  SlipWeakeningLaw law;
  double tau0 = 0.0;    // background shear traction along x1 [Pa]
  double sigma0 = 0.0;  // background normal stress, compression > 0 [Pa]
  std::vector<Nucleation> nucleation;
  // additional no-slip boxes inside the rupture-permitted region
  // ({x1_lo, x1_hi, x3_lo, x3_hi} each)
  std::vector<std::array<double, 4>> no_slip;
};

/// Fully parameterized experiment description: pure data, buildable into a
/// hybrid model. Presets are pure functions of (dx, overrides).
struct Scenario {
  std::string name;
  double dx = 0.0;
  Vec3 extents = Vec3::Zero();  // grid extents; [1] is the FE strip height
  Vec3 origin = Vec3::Zero();
  bool symmetric = true;  // fault on the bottom plane, mirror implied
  std::vector<ElasticMaterial> materials;  // region 0 = background
  std::vector<RegionSpec> regions;
  ElasticMaterial half_space;  // material of the bounding half-space(s)
  std::vector<FaultSpec> faults;
  std::vector<Station> stations;
  double duration = 0.0;  // [s]
  double cfl_safety = 0.4;
};

/// SCEC TPV3 benchmark: slip-weakening fault in a homogeneous full space.
/// strip_width = 0 selects the default of 4 dx (total width across the
/// symmetry plane; the meshed half-strip is strip_width / 2).
Scenario tpv3(double dx, double strip_width = 0.0);

/// Rupture inside a low-velocity fault zone (damaged layer of half-thickness
/// 0.8 km hugging the fault, 20% wave-speed reduction).
Scenario lvfz(double dx);

/// Complementary layout: pristine rock within 0.8 km of the fault, damaged
/// material beyond; the strip boundary sits 2 dx outside the contrast.
Scenario offfault_lvz(double dx);

/// Two parallel overlapping faults (dilational step-over, 1 km apart,
/// 20 km overlap) in a homogeneous medium; no symmetry, two-sided strip.
Scenario stepover(double dx);

/// Lookup by name ("tpv3", "lvfz", "offfault-lvz", "stepover").
Scenario preset(const std::string& name, double dx, double strip_width = 0.0);
const std::vector<std::string>& preset_names();

/// S = (mu_s sigma0 - tau0) / (tau0 - mu_k sigma0); throws if the
/// denominator is not positive.
double strength_ratio(const FaultSpec& f);

/// Checks every invariant that does not require building the mesh:
/// divisibility/admissibility of the grid, material and friction validity,
/// stations on faults inside rupture-permitted regions, nucleation patches
/// inside those regions, stress-step nucleation exceeding static strength.
void validate(const Scenario& s);

/// A scenario assembled into a steppable coupled model.
struct BuiltModel {
  std::unique_ptr<HybridModel> model;
  double dt = 0.0;
  std::vector<std::int64_t> station_nodes;  // fault-node per station
};

/// Meshes the strip, wires faults / periodic ties / half-space boundaries
/// and finalizes the model. `kernels` must outlive the returned model.
BuiltModel build_model(const Scenario& s, const KernelProvider& kernels,
                       std::int64_t max_history = 0);

/// Boundary-integral-only reference on the same fault grid; valid only for
/// symmetric single-fault scenarios in homogeneous material.
struct BuiltReference {
  std::unique_ptr<SbimSolver> solver;
  std::vector<std::int64_t> station_nodes;
};
BuiltReference build_reference(const Scenario& s, const KernelProvider& kernels,
                               std::int64_t max_history = 0);

}  // namespace hsbi
