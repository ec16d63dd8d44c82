#include "hsbi/fem.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hsbi {

ElementMatrix element_stiffness(const ElasticMaterial& material, double dx) {
  material.validate();
  const double la = material.lambda, mu = material.mu;
  Eigen::Matrix<double, 6, 6> C = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C(i, j) = la;
    C(i, i) = la + 2.0 * mu;
    C(i + 3, i + 3) = mu;
  }

  // local node a = 4*dj + 2*dk + di, reference coords xi in {-1,+1}^3
  auto xi_of = [](int a) {
    return Vec3(2 * (a & 1) - 1, 2 * ((a >> 2) & 1) - 1, 2 * ((a >> 1) & 1) - 1);
  };

  ElementMatrix K = ElementMatrix::Zero();
  const double g = 1.0 / std::sqrt(3.0);
  const double detJ = std::pow(dx / 2.0, 3);
  const double dNdx_scale = 2.0 / dx;  // d(xi)/d(x)
  for (int gp = 0; gp < 8; ++gp) {
    const Vec3 p = g * xi_of(gp);
    Eigen::Matrix<double, 6, 24> B = Eigen::Matrix<double, 6, 24>::Zero();
    for (int a = 0; a < 8; ++a) {
      const Vec3 xa = xi_of(a);
      Vec3 dN;  // shape-function gradient in physical coords
      for (int d = 0; d < 3; ++d) {
        double v = xa[d] / 8.0;
        for (int o = 0; o < 3; ++o)
          if (o != d) v *= 1.0 + xa[o] * p[o];
        dN[d] = v * dNdx_scale;
      }
      const int c = 3 * a;
      B(0, c + 0) = dN[0];
      B(1, c + 1) = dN[1];
      B(2, c + 2) = dN[2];
      B(3, c + 1) = dN[2];  // gamma_yz
      B(3, c + 2) = dN[1];
      B(4, c + 0) = dN[2];  // gamma_xz
      B(4, c + 2) = dN[0];
      B(5, c + 0) = dN[1];  // gamma_xy
      B(5, c + 1) = dN[0];
    }
    K += detJ * B.transpose() * C * B;
  }
  // enforce exact symmetry against roundoff
  K = 0.5 * (K + K.transpose()).eval();
  return K;
}

StiffnessOperator::StiffnessOperator(Connectivity conn,
                                     const std::vector<ElasticMaterial>& materials)
    : conn_(std::move(conn)) {
  const auto& grid = conn_.grid();
  templates_.reserve(materials.size());
  for (const auto& m : materials)
    templates_.push_back(element_stiffness(m, grid.dx()));
  for (std::int64_t e = 0; e < grid.num_elements(); ++e) {
    auto [i, j, k] = grid.element_ijk(e);
    colors_[size_t((i & 1) | ((j & 1) << 1) | ((k & 1) << 2))].push_back(e);
  }
}

void StiffnessOperator::apply(const VectorXd& u, VectorXd& f_int) const {
  const auto& grid = conn_.grid();
  const auto& regions = grid.regions();
  for (const auto& color : colors_) {
    const std::int64_t n = std::int64_t(color.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ci = 0; ci < n; ++ci) {
      const std::int64_t e = color[size_t(ci)];
      const auto nodes = conn_.nodes(e);
      Eigen::Matrix<double, 24, 1> ue;
      for (int a = 0; a < 8; ++a)
        ue.segment<3>(3 * a) = u.segment<3>(3 * nodes[size_t(a)]);
      const Eigen::Matrix<double, 24, 1> fe =
          templates_[size_t(regions[size_t(e)])] * ue;
      for (int a = 0; a < 8; ++a)
        f_int.segment<3>(3 * nodes[size_t(a)]) += fe.segment<3>(3 * a);
    }
  }
}

LumpedMass assemble_lumped_mass(const Connectivity& conn,
                                const std::vector<ElasticMaterial>& materials) {
  const auto& grid = conn.grid();
  LumpedMass mass;
  mass.m = VectorXd::Zero(conn.total_nodes());
  const double vol8 = std::pow(grid.dx(), 3) / 8.0;
  for (std::int64_t e = 0; e < grid.num_elements(); ++e) {
    const double me = materials[size_t(grid.element_region(e))].rho * vol8;
    for (auto nid : conn.nodes(e)) mass.m[nid] += me;
  }
  mass.inv_m = mass.m.cwiseInverse();
  return mass;
}

double cfl_timestep(const StructuredGrid& grid,
                    const std::vector<ElasticMaterial>& materials,
                    double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("cfl_timestep: safety must be in (0, 1]");
  double cp_max = 0.0;
  for (const auto& m : materials) cp_max = std::max(cp_max, m.cp());
  return safety * grid.dx() / cp_max;
}

void predict(SimulationState& state, const std::vector<DirichletBC>& dirichlet) {
  // explicit predictor-corrector: u advances with the full predictor
  // velocity. The scheme is slightly dissipative (per-step energy factor
  // 1 - (w dt)^2 / 2 for a mode of frequency w), which removes the
  // grid-scale ringing that rupture fronts excite while leaving resolved
  // waves first-order accurate.
  state.v += state.dt * state.a;
  state.u += state.dt * state.v;
  for (const auto& bc : dirichlet) {
    state.u[bc.dof] = bc.value;
    state.v[bc.dof] = 0.0;
    state.a[bc.dof] = 0.0;
  }
}

void correct(SimulationState& state, const VectorXd& f_int,
             const VectorXd& f_ext, const VectorXd& f_fault,
             const LumpedMass& mass, const std::vector<DirichletBC>& dirichlet) {
  const std::int64_t n = state.num_nodes();
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    const double inv_m = mass.inv_m[i];
    for (int d = 0; d < 3; ++d) {
      const std::int64_t dof = 3 * i + d;
      const double a_new =
          (-f_int[dof] + f_ext[dof] + f_fault[dof]) * inv_m;
      const double da = a_new - state.a[dof];
      state.v[dof] += 0.5 * state.dt * da;
      state.a[dof] = a_new;
    }
  }
  for (const auto& bc : dirichlet) {
    state.v[bc.dof] = 0.0;
    state.a[bc.dof] = 0.0;
  }
  state.t += state.dt;
  state.step += 1;
}

void check_stability(const SimulationState& state) {
  const double vmax = state.v.cwiseAbs().maxCoeff();
  if (!(vmax < 1e6))
    throw InstabilityError("time loop unstable: max |v| = " +
                           std::to_string(vmax) + " m/s at t = " +
                           std::to_string(state.t));
}

}  // namespace hsbi
