#include "doctest.h"
#include "hsbi/grid.hpp"

using namespace hsbi;

TEST_CASE("wavespeeds round-trip through Lame parameters") {
  auto m = ElasticMaterial::from_wavespeeds(2670.0, 6000.0, 3464.0);
  CHECK(m.cp() == doctest::Approx(6000.0).epsilon(1e-12));
  CHECK(m.cs() == doctest::Approx(3464.0).epsilon(1e-12));
  CHECK(m.mu == doctest::Approx(2670.0 * 3464.0 * 3464.0));
  auto [cp, cs] = derive_wavespeeds(m);
  CHECK(cp == doctest::Approx(6000.0));
  CHECK(cs == doctest::Approx(3464.0));
}

TEST_CASE("material validation rejects unphysical parameters") {
  CHECK_THROWS_AS(ElasticMaterial::from_lame(-1.0, 1e9, 1e9),
                  std::invalid_argument);
  CHECK_THROWS_AS(ElasticMaterial::from_lame(2670.0, 0.0, 1e9),
                  std::invalid_argument);
  // lambda so negative the bulk modulus vanishes
  CHECK_THROWS_AS(ElasticMaterial::from_lame(2670.0, 1e9, -1e9),
                  std::invalid_argument);
}

TEST_CASE("spectral admissibility is 2,3,5-smoothness") {
  for (int n : {1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 60, 120, 360, 480})
    CHECK(spectral_admissible(n));
  for (int n : {7, 11, 13, 14, 22, 26, 77, 119, 0, -4})
    CHECK_FALSE(spectral_admissible(n));
}

TEST_CASE("build_grid enforces commensurate extents and admissible sizes") {
  auto g = build_grid(Vec3(1200, 400, 600), 100.0, Vec3(-600, 0, -300));
  CHECK(g.n1() == 12);
  CHECK(g.n2() == 4);
  CHECK(g.n3() == 6);
  CHECK(g.num_nodes() == 13 * 5 * 7);
  CHECK_THROWS_AS(build_grid(Vec3(1250, 400, 600), 100.0),
                  std::invalid_argument);
  // N1 = 7 is not 2,3,5-smooth
  CHECK_THROWS_AS(build_grid(Vec3(700, 400, 600), 100.0),
                  std::invalid_argument);
}

TEST_CASE("node indexing round-trips and coordinates are affine") {
  StructuredGrid g(4, 3, 5, 2.0, Vec3(1, 2, 3));
  for (std::int64_t n = 0; n < g.num_nodes(); ++n) {
    auto [i, j, k] = g.node_ijk(n);
    CHECK(g.node_index(i, j, k) == n);
    CHECK((g.node_coord(n) - (Vec3(1, 2, 3) + 2.0 * Vec3(i, j, k))).norm() ==
          doctest::Approx(0.0));
  }
  for (std::int64_t e = 0; e < g.num_elements(); ++e) {
    auto [i, j, k] = g.element_ijk(e);
    CHECK(g.element_index(i, j, k) == e);
  }
}

TEST_CASE("element corner order is x1-fastest, then x3, then x2") {
  StructuredGrid g(3, 3, 3, 1.0, Vec3::Zero());
  const auto n = g.element_nodes(g.element_index(1, 1, 1));
  int c = 0;
  for (int dj = 0; dj <= 1; ++dj)
    for (int dk = 0; dk <= 1; ++dk)
      for (int di = 0; di <= 1; ++di)
        CHECK(n[size_t(c++)] == g.node_index(1 + di, 1 + dj, 1 + dk));
}

TEST_CASE("region assignment by element center, later boxes win") {
  auto g = build_grid(Vec3(400, 200, 400), 100.0);
  std::vector<RegionSpec> boxes;
  boxes.push_back({Vec3(0, 0, 0), Vec3(400, 200, 400), 1});
  boxes.push_back({Vec3(100, 0, 100), Vec3(300, 200, 300), 2});
  assign_regions(g, boxes, 3);
  CHECK(g.element_region(g.element_index(0, 0, 0)) == 1);
  CHECK(g.element_region(g.element_index(1, 0, 1)) == 2);
  CHECK(g.element_region(g.element_index(3, 1, 3)) == 1);

  std::vector<RegionSpec> bad;
  bad.push_back({Vec3(-100, 0, 0), Vec3(100, 100, 100), 1});
  CHECK_THROWS_AS(assign_regions(g, bad, 3), std::invalid_argument);
  std::vector<RegionSpec> bad_mat;
  bad_mat.push_back({Vec3(0, 0, 0), Vec3(100, 100, 100), 7});
  CHECK_THROWS_AS(assign_regions(g, bad_mat, 3), std::invalid_argument);
}

TEST_CASE("plane node set covers one constant-x2 plane") {
  StructuredGrid g(2, 3, 2, 1.0, Vec3::Zero());
  auto ids = g.plane_node_set(2);
  CHECK(std::int64_t(ids.size()) == g.plane_nodes());
  for (auto id : ids) CHECK(g.node_ijk(id)[1] == 2);
  CHECK_THROWS_AS(g.plane_node_set(4), std::out_of_range);
}
