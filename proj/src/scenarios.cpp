#include "hsbi/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace hsbi {

namespace {

const ElasticMaterial kHostRock =
    ElasticMaterial::from_wavespeeds(2670.0, 6000.0, 3464.0);
// 20% wave-speed reduction at equal density
const ElasticMaterial kDamagedRock =
    ElasticMaterial::from_wavespeeds(2670.0, 4800.0, 2771.2);

bool is_multiple(double length, double dx) {
  const double r = length / dx;
  return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, std::abs(r));
}

std::int64_t steps_of(double length, double dx, const char* what) {
  if (!is_multiple(length, dx))
    throw std::invalid_argument(std::string("scenario: ") + what +
                                " is not a multiple of dx");
  return std::llround(length / dx);
}

bool in_box(double x1, double x3, double lo1, double hi1, double lo3,
            double hi3, double tol) {
  return x1 >= lo1 - tol && x1 <= hi1 + tol && x3 >= lo3 - tol &&
         x3 <= hi3 + tol;
}

/// Per-node friction, prestress, nucleation and breakability from the spec.
void configure_fault(FaultSurface& f, const FaultSpec& spec) {
  f.tau0.col(0).setConstant(spec.tau0);
  f.tau0.col(1).setZero();
  f.sigma0.setConstant(spec.sigma0);
  f.sigma_n_eff = f.sigma0;
  f.mu_s.setConstant(spec.law.mu_s);
  f.mu_k.setConstant(spec.law.mu_k);
  f.delta_c.setConstant(spec.law.delta_c);
  f.nucleation = spec.nucleation;
  const double tol = 1e-6 * f.dx;
  for (std::int64_t n = 0; n < f.size(); ++n) {
    const double x1 = f.x1(n), x3 = f.x3(n);
    bool breakable =
        in_box(x1, x3, spec.x1_lo, spec.x1_hi, spec.x3_lo, spec.x3_hi, tol);
    for (const auto& b : spec.no_slip)
      if (in_box(x1, x3, b[0], b[1], b[2], b[3], tol)) breakable = false;
    f.unbreakable[size_t(n)] = breakable ? 0 : 1;
  }
}

}  // namespace

double strength_ratio(const FaultSpec& f) {
  const double num = f.law.mu_s * f.sigma0 - f.tau0;
  const double den = f.tau0 - f.law.mu_k * f.sigma0;
  if (!(den > 0.0))
    throw std::invalid_argument(
        "strength_ratio: background shear does not exceed residual strength");
  return num / den;
}

Scenario tpv3(double dx, double strip_width) {
  if (strip_width == 0.0) strip_width = 4.0 * dx;
  Scenario s;
  s.name = "tpv3";
  s.dx = dx;
  const double half = 0.5 * strip_width;
  s.extents = Vec3(40e3, half, 20e3);
  s.origin = Vec3(-20e3, 0.0, -10e3);
  s.symmetric = true;
  s.materials = {kHostRock};
  s.half_space = kHostRock;

  FaultSpec f;
  f.x2 = 0.0;
  f.x1_lo = -15e3;
  f.x1_hi = 15e3;
  f.x3_lo = -7.5e3;
  f.x3_hi = 7.5e3;
  f.law = {0.677, 0.525, 0.4};
  f.tau0 = 70e6;
  f.sigma0 = 120e6;
  Nucleation nuc;
  nuc.mechanism = Nucleation::Mechanism::StressStep;
  nuc.x1_lo = -1.5e3;
  nuc.x1_hi = 1.5e3;
  nuc.x3_lo = -1.5e3;
  nuc.x3_hi = 1.5e3;
  nuc.value = 81.6e6;  // exceeds static strength 0.677 * 120 MPa = 81.24 MPa
  f.nucleation = {nuc};
  s.faults = {f};

  // station coordinates are read off the benchmark figure; recorded here
  s.stations = {{"A", 3e3, 0.0, 0}, {"B", 6e3, 0.0, 0}, {"C", 0.0, 6e3, 0}};
  s.duration = 6.0;
  return s;
}

Scenario lvfz(double dx) {
  Scenario s;
  s.name = "lvfz";
  s.dx = dx;
  // the damaged layer reaches 0.8 km from the fault; the meshed half-strip
  // is the smallest whole number of layers covering 1 km (2 km full width
  // at dx = 100 m, rounded up to 1.2 km at dx = 400 m)
  const int n2 = std::max(2, int(std::ceil(1e3 / dx - 1e-9)));
  s.extents = Vec3(80e3, n2 * dx, 40e3);
  s.origin = Vec3(-40e3, 0.0, -20e3);
  s.symmetric = true;
  s.materials = {kHostRock, kDamagedRock};
  s.regions = {{Vec3(-40e3, 0.0, -20e3), Vec3(40e3, 0.8e3, 20e3), 1}};
  s.half_space = kHostRock;

  FaultSpec f;
  f.x2 = 0.0;
  f.x1_lo = -30e3;
  f.x1_hi = 30e3;
  f.x3_lo = -15e3;
  f.x3_hi = 15e3;
  f.law = {0.677, 0.564, 0.2};
  f.tau0 = 27.5e6;
  f.sigma0 = 44e6;
  Nucleation nuc;
  nuc.mechanism = Nucleation::Mechanism::StressStep;
  nuc.x1_lo = -1.6e3;
  nuc.x1_hi = 1.6e3;
  nuc.x3_lo = -1.6e3;
  nuc.x3_hi = 1.6e3;
  nuc.value = 31e6;  // exceeds static strength 0.677 * 44 MPa = 29.8 MPa
  f.nucleation = {nuc};
  s.faults = {f};

  s.stations = {{"A", 6e3, 0.0, 0}, {"B", 12e3, 0.0, 0}, {"C", 20e3, 0.0, 0}};
  s.duration = 16.0;
  return s;
}

Scenario offfault_lvz(double dx) {
  Scenario s = lvfz(dx);
  s.name = "offfault-lvz";
  // complemented layout: pristine rock next to the fault, damaged material
  // beyond 0.8 km; the strip boundary sits 2 dx outside the contrast
  const std::int64_t contrast = steps_of(0.8e3, dx, "material contrast depth");
  const int n2 = int(contrast) + 2;
  s.extents[1] = n2 * dx;
  s.regions = {{Vec3(-40e3, 0.8e3, -20e3), Vec3(40e3, n2 * dx, 20e3), 1}};
  s.half_space = kDamagedRock;
  s.stations = {{"A", 8e3, 0.0, 0}, {"B", 16e3, 0.0, 0}, {"C", 24e3, 0.0, 0}};
  return s;
}

Scenario stepover(double dx) {
  Scenario s;
  s.name = "stepover";
  s.dx = dx;
  const std::int64_t sep = steps_of(1e3, dx, "fault separation");
  const int n2 = int(sep) + 4;  // faults 2 dx inside each strip face
  s.extents = Vec3(80e3, n2 * dx, 20e3);
  s.origin = Vec3(-40e3, 0.0, -5e3);
  s.symmetric = false;
  s.materials = {kHostRock};
  s.half_space = kHostRock;

  // uniform background shear chosen so the strength ratio
  // S = (mu_s sigma0 - tau0)/(tau0 - mu_k sigma0) equals 1.75 exactly
  const double mu_s = 0.677, mu_k = 0.373, sigma0 = 150e6, s_ratio = 1.75;
  const double tau0 = (mu_s + s_ratio * mu_k) * sigma0 / (1.0 + s_ratio);

  FaultSpec primary;
  primary.x2 = 2.0 * dx;
  primary.x1_lo = -30e3;
  primary.x1_hi = 10e3;
  primary.x3_lo = 0.0;
  primary.x3_hi = 10e3;
  primary.law = {mu_s, mu_k, 0.5};
  primary.tau0 = tau0;
  primary.sigma0 = sigma0;
  // slip-strengthening cap of the top 1 km modeled as no-slip
  primary.no_slip = {{-30e3, 10e3, 0.0, 1e3}};
  Nucleation nuc;
  nuc.mechanism = Nucleation::Mechanism::StrengthDrop;
  nuc.x1_lo = -20e3;
  nuc.x1_hi = 0.0;
  nuc.x3_lo = 0.0;
  nuc.x3_hi = 10e3;
  primary.nucleation = {nuc};

  FaultSpec secondary = primary;
  secondary.x2 = (2.0 + double(sep)) * dx;
  secondary.x1_lo = -10e3;
  secondary.x1_hi = 30e3;
  secondary.no_slip = {{-10e3, 30e3, 0.0, 1e3}};
  secondary.nucleation.clear();

  s.faults = {primary, secondary};
  s.stations = {{"A", 12e3, 5e3, 1}, {"B", 18e3, 5e3, 1}, {"C", 24e3, 5e3, 1}};
  s.duration = 20.0;
  return s;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"tpv3", "lvfz",
                                                 "offfault-lvz", "stepover"};
  return names;
}

Scenario preset(const std::string& name, double dx, double strip_width) {
  if (name == "tpv3") return tpv3(dx, strip_width);
  if (strip_width != 0.0)
    throw std::invalid_argument(
        "scenario: strip width is only adjustable for tpv3");
  if (name == "lvfz") return lvfz(dx);
  if (name == "offfault-lvz") return offfault_lvz(dx);
  if (name == "stepover") return stepover(dx);
  throw std::invalid_argument("scenario: unknown preset '" + name + "'");
}

void validate(const Scenario& s) {
  if (!(s.dx > 0.0)) throw std::invalid_argument("scenario: dx must be > 0");
  if (!(s.duration > 0.0))
    throw std::invalid_argument("scenario: duration must be > 0");
  if (!(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0))
    throw std::invalid_argument("scenario: CFL safety must be in (0, 1]");
  if (s.materials.empty())
    throw std::invalid_argument("scenario: needs at least one material");
  for (const auto& m : s.materials) m.validate();
  s.half_space.validate();
  if (s.faults.empty())
    throw std::invalid_argument("scenario: needs at least one fault");

  const std::int64_t n1 = steps_of(s.extents[0], s.dx, "along-strike extent");
  const std::int64_t n2 = steps_of(s.extents[1], s.dx, "strip height");
  const std::int64_t n3 = steps_of(s.extents[2], s.dx, "down-dip extent");
  if (!spectral_admissible(int(n1)) || !spectral_admissible(int(n3)))
    throw std::invalid_argument(
        "scenario: boundary grid size is not 2/3/5-smooth");
  if (n2 < 2) throw std::invalid_argument("scenario: strip thinner than 2 dx");

  if (s.symmetric) {
    if (s.faults.size() != 1)
      throw std::invalid_argument("scenario: symmetric mode needs one fault");
    if (s.faults[0].x2 != s.origin[1])
      throw std::invalid_argument(
          "scenario: symmetric fault must sit on the bottom plane");
  }

  const double tol = 1e-6 * s.dx;
  for (const auto& f : s.faults) {
    f.law.validate();
    if (!(f.sigma0 > 0.0))
      throw std::invalid_argument("scenario: sigma0 must be compressive");
    if (!s.symmetric) {
      const std::int64_t j2 = steps_of(f.x2 - s.origin[1], s.dx, "fault plane");
      if (j2 <= 0 || j2 >= n2)
        throw std::invalid_argument("scenario: fault plane must be interior");
      // the split patch needs one unbroken node ring inside the plane
      const std::int64_t i_lo = steps_of(f.x1_lo - s.origin[0], s.dx,
                                         "rupture region") -
                                1;
      const std::int64_t k_lo = steps_of(f.x3_lo - s.origin[2], s.dx,
                                         "rupture region") -
                                1;
      const std::int64_t i_hi =
          steps_of(f.x1_hi - s.origin[0], s.dx, "rupture region") + 1;
      const std::int64_t k_hi =
          steps_of(f.x3_hi - s.origin[2], s.dx, "rupture region") + 1;
      if (i_lo < 1 || k_lo < 1 || i_hi > n1 - 1 || k_hi > n3 - 1)
        throw std::invalid_argument(
            "scenario: rupture region too close to the grid edge");
    }
    if (!(f.x1_lo < f.x1_hi && f.x3_lo < f.x3_hi))
      throw std::invalid_argument("scenario: empty rupture-permitted region");
    for (const auto& nuc : f.nucleation) {
      if (!in_box(nuc.x1_lo, nuc.x3_lo, f.x1_lo, f.x1_hi, f.x3_lo, f.x3_hi,
                  tol) ||
          !in_box(nuc.x1_hi, nuc.x3_hi, f.x1_lo, f.x1_hi, f.x3_lo, f.x3_hi,
                  tol))
        throw std::invalid_argument(
            "scenario: nucleation patch outside rupture-permitted region");
      if (nuc.mechanism == Nucleation::Mechanism::StressStep &&
          !(nuc.value > f.law.mu_s * f.sigma0))
        throw std::invalid_argument(
            "scenario: nucleation stress does not exceed static strength");
    }
  }

  for (const auto& st : s.stations) {
    if (st.fault < 0 || size_t(st.fault) >= s.faults.size())
      throw std::invalid_argument("scenario: station on unknown fault");
    const auto& f = s.faults[size_t(st.fault)];
    if (!in_box(st.x1, st.x3, f.x1_lo, f.x1_hi, f.x3_lo, f.x3_hi, tol))
      throw std::invalid_argument(
          "scenario: station outside rupture-permitted region");
  }

  for (const auto& r : s.regions) {
    if (r.material < 0 || size_t(r.material) >= s.materials.size())
      throw std::invalid_argument("scenario: region uses unknown material");
  }
}

BuiltModel build_model(const Scenario& s, const KernelProvider& kernels,
                       std::int64_t max_history) {
  validate(s);
  BuiltModel out;
  out.model = std::make_unique<HybridModel>();
  HybridModel& m = *out.model;

  m.grid = build_grid(s.extents, s.dx, s.origin);
  assign_regions(m.grid, s.regions, int(s.materials.size()));
  m.materials = s.materials;

  Connectivity conn(&m.grid, m.grid.num_nodes());
  if (s.symmetric) {
    m.faults.push_back(make_symmetric_fault(m.grid, 0, true));
    for (auto id : m.grid.plane_node_set(0))
      m.dirichlet.push_back({3 * id + 1, 0.0});
  } else {
    for (const auto& spec : s.faults) {
      const int j2 = int(std::llround((spec.x2 - s.origin[1]) / s.dx));
      const int i_lo =
          int(std::llround((spec.x1_lo - s.origin[0]) / s.dx)) - 1;
      const int i_hi =
          int(std::llround((spec.x1_hi - s.origin[0]) / s.dx)) + 1;
      const int k_lo =
          int(std::llround((spec.x3_lo - s.origin[2]) / s.dx)) - 1;
      const int k_hi =
          int(std::llround((spec.x3_hi - s.origin[2]) / s.dx)) + 1;
      m.faults.push_back(add_split_fault(conn, j2, i_lo, i_hi, k_lo, k_hi));
    }
  }
  for (size_t f = 0; f < s.faults.size(); ++f)
    configure_fault(m.faults[f], s.faults[f]);

  m.stiffness = StiffnessOperator(conn, m.materials);
  m.mass = assemble_lumped_mass(m.stiffness.connectivity(), m.materials);
  m.ties = periodic_ties(m.grid);
  fold_mass(m.ties, m.mass);

  out.dt = cfl_timestep(m.grid, m.materials, s.cfl_safety);
  m.bindings.push_back(bind_boundary(m.grid, m.grid.n2(), +1, s.half_space,
                                     out.dt, kernels, max_history));
  if (!s.symmetric)
    m.bindings.push_back(
        bind_boundary(m.grid, 0, -1, s.half_space, out.dt, kernels,
                      max_history));
  m.finalize(out.dt);

  for (const auto& st : s.stations)
    out.station_nodes.push_back(
        m.faults[size_t(st.fault)].find_node(st.x1, st.x3));
  return out;
}

BuiltReference build_reference(const Scenario& s,
                               const KernelProvider& kernels,
                               std::int64_t max_history) {
  validate(s);
  if (!s.symmetric || s.materials.size() != 1 || !s.regions.empty())
    throw std::invalid_argument(
        "reference solver requires a symmetric homogeneous scenario");
  const int n1 = int(std::llround(s.extents[0] / s.dx));
  const int n3 = int(std::llround(s.extents[2] / s.dx));
  const double dt = s.cfl_safety * s.dx / s.materials[0].cp();

  BuiltReference out;
  out.solver = std::make_unique<SbimSolver>(n1, n3, s.dx, s.materials[0], dt,
                                            kernels, max_history);
  FaultSurface& f = out.solver->fault();
  f.x1_origin = s.origin[0];
  f.x3_origin = s.origin[2];
  configure_fault(f, s.faults[0]);
  for (const auto& st : s.stations)
    out.station_nodes.push_back(f.find_node(st.x1, st.x3));
  return out;
}

}  // namespace hsbi
