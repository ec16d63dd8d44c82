#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "hsbi/fem.hpp"

using namespace hsbi;

namespace {

const ElasticMaterial kRock = ElasticMaterial::from_wavespeeds(2670, 6000, 3464);

VectorXd random_vector(std::int64_t n, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  VectorXd v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// independent dense assembly from the element templates
Eigen::MatrixXd dense_stiffness(const StiffnessOperator& K) {
  const auto& conn = K.connectivity();
  const auto& grid = conn.grid();
  const std::int64_t n = 3 * conn.total_nodes();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t e = 0; e < grid.num_elements(); ++e) {
    const auto nodes = conn.nodes(e);
    const ElementMatrix& ke = K.element_template(grid.element_region(e));
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        M.block<3, 3>(3 * nodes[size_t(a)], 3 * nodes[size_t(b)]) +=
            ke.block<3, 3>(3 * a, 3 * b);
  }
  return M;
}

}  // namespace

TEST_CASE("element stiffness annihilates rigid-body modes") {
  const double dx = 100.0;
  const ElementMatrix K = element_stiffness(kRock, dx);
  StructuredGrid g(1, 1, 1, dx, Vec3::Zero());
  const auto nodes = g.element_nodes(0);

  std::vector<Eigen::Matrix3d> rots;
  rots.push_back((Eigen::Matrix3d() << 0, -1, 0, 1, 0, 0, 0, 0, 0).finished());
  rots.push_back((Eigen::Matrix3d() << 0, 0, 1, 0, 0, 0, -1, 0, 0).finished());
  rots.push_back((Eigen::Matrix3d() << 0, 0, 0, 0, 0, -1, 0, 1, 0).finished());

  const double scale = K.cwiseAbs().maxCoeff();
  for (int t = 0; t < 3; ++t) {  // translations
    Eigen::Matrix<double, 24, 1> u = Eigen::Matrix<double, 24, 1>::Zero();
    for (int a = 0; a < 8; ++a) u[3 * a + t] = 1.0;
    CHECK((K * u).cwiseAbs().maxCoeff() < 1e-9 * scale);
  }
  for (const auto& W : rots) {  // infinitesimal rotations
    Eigen::Matrix<double, 24, 1> u;
    for (int a = 0; a < 8; ++a)
      u.segment<3>(3 * a) = W * g.node_coord(nodes[size_t(a)]);
    CHECK((K * u).cwiseAbs().maxCoeff() < 1e-9 * scale * dx);
  }
}

TEST_CASE("uniform-strain energy matches the continuum closed form") {
  const double dx = 50.0;
  const ElementMatrix K = element_stiffness(kRock, dx);
  StructuredGrid g(1, 1, 1, dx, Vec3::Zero());
  const auto nodes = g.element_nodes(0);

  std::vector<Eigen::Matrix3d> strains;
  strains.push_back(Eigen::Vector3d(1e-4, 0, 0).asDiagonal());
  strains.push_back(
      (Eigen::Matrix3d() << 0, 5e-5, 0, 5e-5, 0, 0, 0, 0, 0).finished());
  strains.push_back((Eigen::Matrix3d() << 1e-4, 2e-5, 0, 2e-5, -3e-5, 4e-5, 0,
                     4e-5, 7e-5)
                        .finished());
  for (const auto& eps : strains) {
    Eigen::Matrix<double, 24, 1> u;
    for (int a = 0; a < 8; ++a)
      u.segment<3>(3 * a) = eps * g.node_coord(nodes[size_t(a)]);
    const double energy = 0.5 * u.dot(K * u);
    const double tr = eps.trace();
    const double expected = 0.5 *
                            (kRock.lambda * tr * tr +
                             2.0 * kRock.mu * eps.squaredNorm()) *
                            dx * dx * dx;
    CHECK(energy == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("internal force matches a dense-matrix reference") {
  auto g = build_grid(Vec3(400, 400, 400), 100.0);  // 4^3 elements
  Connectivity conn(&g, g.num_nodes());
  StiffnessOperator K(conn, {kRock});
  const Eigen::MatrixXd Kd = dense_stiffness(K);
  CHECK((Kd - Kd.transpose()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  const VectorXd u = random_vector(3 * g.num_nodes(), 42, 0.01);
  const VectorXd f = K.apply(u);
  const VectorXd f_ref = Kd * u;
  CHECK((f - f_ref).norm() < 1e-10 * f_ref.norm());
}

TEST_CASE("one explicit step matches a dense reference computation") {
  auto g = build_grid(Vec3(300, 300, 300), 100.0);
  Connectivity conn(&g, g.num_nodes());
  StiffnessOperator K(conn, {kRock});
  const LumpedMass mass = assemble_lumped_mass(conn, {kRock});
  const Eigen::MatrixXd Kd = dense_stiffness(K);
  const double dt = cfl_timestep(g, {kRock});

  SimulationState s(g.num_nodes(), dt);
  s.u = random_vector(s.u.size(), 1, 0.01);
  s.v = random_vector(s.u.size(), 2, 0.1);
  s.a = random_vector(s.u.size(), 3, 1.0);

  // dense predictor-corrector reference, written out independently
  VectorXd u_ref = s.u, v_ref = s.v, a_ref = s.a;
  const VectorXd v_star = v_ref + dt * a_ref;
  u_ref += dt * v_star;
  VectorXd a_new(u_ref.size());
  for (std::int64_t i = 0; i < g.num_nodes(); ++i)
    a_new.segment<3>(3 * i) =
        -mass.inv_m[i] * (Kd * u_ref).segment<3>(3 * i);
  v_ref = v_star + 0.5 * dt * (a_new - a_ref);

  predict(s, {});
  const VectorXd f_int = K.apply(s.u);
  const VectorXd zero = VectorXd::Zero(s.u.size());
  correct(s, f_int, zero, zero, mass, {});

  CHECK((s.u - u_ref).norm() < 1e-10 * u_ref.norm());
  CHECK((s.v - v_ref).norm() < 1e-10 * v_ref.norm());
  CHECK((s.a - a_new).norm() < 1e-10 * a_new.norm());
  CHECK(s.t == doctest::Approx(dt));
  CHECK(s.step == 1);
}

TEST_CASE("lumped mass: total and per-node values") {
  auto g = build_grid(Vec3(300, 200, 300), 100.0);
  Connectivity conn(&g, g.num_nodes());
  const LumpedMass mass = assemble_lumped_mass(conn, {kRock});
  const double cell = kRock.rho * 100.0 * 100.0 * 100.0;
  CHECK(mass.m.sum() == doctest::Approx(cell * g.num_elements()));
  CHECK(mass.m[g.node_index(0, 0, 0)] == doctest::Approx(cell / 8));
  CHECK(mass.m[g.node_index(1, 1, 1)] == doctest::Approx(cell));
}

TEST_CASE("CFL timestep uses the fastest region") {
  auto g = build_grid(Vec3(300, 200, 300), 100.0);
  auto slow = ElasticMaterial::from_wavespeeds(2670, 4800, 2771);
  CHECK(cfl_timestep(g, {slow, kRock}) ==
        doctest::Approx(0.4 * 100.0 / 6000.0));
  CHECK_THROWS_AS(cfl_timestep(g, {kRock}, 1.5), std::invalid_argument);
}

TEST_CASE("explicit scheme stays stable and damps unresolved modes") {
  auto g = build_grid(Vec3(400, 300, 400), 100.0);
  Connectivity conn(&g, g.num_nodes());
  StiffnessOperator K(conn, {kRock});
  const LumpedMass mass = assemble_lumped_mass(conn, {kRock});
  const double dt = cfl_timestep(g, {kRock});

  SimulationState s(g.num_nodes(), dt);
  s.u = random_vector(s.u.size(), 7, 0.01);
  // consistent start: a0 = -M^-1 K u0
  const VectorXd f0 = K.apply(s.u);
  for (std::int64_t i = 0; i < g.num_nodes(); ++i)
    s.a.segment<3>(3 * i) = -mass.inv_m[i] * f0.segment<3>(3 * i);

  const VectorXd zero = VectorXd::Zero(s.u.size());
  auto energy = [&]() {
    double e = 0.5 * s.u.dot(K.apply(s.u));
    for (std::int64_t i = 0; i < g.num_nodes(); ++i)
      e += 0.5 * mass.m[i] * s.v.segment<3>(3 * i).squaredNorm();
    return e;
  };

  // the displacement predictor uses the full predictor velocity, so each
  // mode of frequency w loses energy by a factor 1 - (w dt)^2 / 2 per step:
  // random (broadband) data must decay markedly and never grow
  const double e0 = energy();
  double e_prev = e0;
  for (int n = 0; n < 200; ++n) {
    predict(s, {});
    correct(s, K.apply(s.u), zero, zero, mass, {});
    const double e = energy();
    CHECK(e < 1.05 * e_prev);  // no sustained growth step to step
    CHECK(e < 1.01 * e0);
    e_prev = e;
    check_stability(s);
  }
  CHECK(e_prev < 0.9 * e0);
}

TEST_CASE("time loop blows up past the CFL limit and the detector fires") {
  auto g = build_grid(Vec3(300, 300, 300), 100.0);
  Connectivity conn(&g, g.num_nodes());
  StiffnessOperator K(conn, {kRock});
  const LumpedMass mass = assemble_lumped_mass(conn, {kRock});

  SimulationState s(g.num_nodes(), 1.05 * 100.0 / 6000.0);
  s.u = random_vector(s.u.size(), 11, 1e-6);
  const VectorXd zero = VectorXd::Zero(s.u.size());
  bool blew_up = false;
  for (int n = 0; n < 3000 && !blew_up; ++n) {
    predict(s, {});
    correct(s, K.apply(s.u), zero, zero, mass, {});
    try {
      check_stability(s);
    } catch (const InstabilityError&) {
      blew_up = true;
    }
  }
  CHECK(blew_up);
}

TEST_CASE("Dirichlet dofs stay pinned through predict and correct") {
  auto g = build_grid(Vec3(200, 200, 200), 100.0);
  Connectivity conn(&g, g.num_nodes());
  StiffnessOperator K(conn, {kRock});
  const LumpedMass mass = assemble_lumped_mass(conn, {kRock});

  std::vector<DirichletBC> bcs;
  for (auto id : g.plane_node_set(0)) bcs.push_back({3 * id + 1, 0.0});

  SimulationState s(g.num_nodes(), cfl_timestep(g, {kRock}));
  s.v = random_vector(s.u.size(), 5, 0.1);
  const VectorXd zero = VectorXd::Zero(s.u.size());
  for (int n = 0; n < 20; ++n) {
    predict(s, bcs);
    correct(s, K.apply(s.u), zero, zero, mass, bcs);
  }
  for (const auto& bc : bcs) {
    CHECK(s.u[bc.dof] == 0.0);
    CHECK(s.v[bc.dof] == 0.0);
  }
}
