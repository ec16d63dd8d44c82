#include "hsbi/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hsbi {

StructuredGrid::StructuredGrid(int n1, int n2, int n3, double dx, Vec3 origin)
    : n1_(n1), n2_(n2), n3_(n3), dx_(dx), origin_(std::move(origin)) {
  if (n1 < 1 || n2 < 1 || n3 < 1)
    throw std::invalid_argument("grid: element counts must be >= 1");
  if (!(dx > 0.0)) throw std::invalid_argument("grid: dx must be > 0");
  regions_.assign(size_t(num_elements()), 0);
}

std::vector<std::int64_t> StructuredGrid::plane_node_set(int j2) const {
  if (j2 < 0 || j2 > n2_) throw std::out_of_range("grid: plane index");
  std::vector<std::int64_t> ids;
  ids.reserve(size_t(plane_nodes()));
  for (int k = 0; k <= n3_; ++k)
    for (int i = 0; i <= n1_; ++i) ids.push_back(node_index(i, j2, k));
  return ids;
}

bool spectral_admissible(int n) {
  if (n < 1) return false;
  for (int p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

static int count_of(double extent, double dx, const char* axis) {
  double r = extent / dx;
  int n = int(std::lround(r));
  if (n < 1 || std::abs(r - n) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument(std::string("build_grid: extent along ") +
                                axis + " is not a positive multiple of dx");
  return n;
}

StructuredGrid build_grid(const Vec3& extents, double dx, Vec3 origin) {
  int n1 = count_of(extents[0], dx, "x1");
  int n2 = count_of(extents[1], dx, "x2");
  int n3 = count_of(extents[2], dx, "x3");
  if (!spectral_admissible(n1) || !spectral_admissible(n3))
    throw std::invalid_argument(
        "build_grid: N1 and N3 must factor into 2, 3 and 5 "
        "(spectral transform admissibility)");
  return StructuredGrid(n1, n2, n3, dx, std::move(origin));
}

void assign_regions(StructuredGrid& grid, const std::vector<RegionSpec>& regions,
                    int num_materials) {
  const Vec3 lo = grid.origin();
  const Vec3 hi = grid.origin() +
                  grid.dx() * Vec3(grid.n1(), grid.n2(), grid.n3());
  const double tol = 1e-9 * grid.dx();
  for (const auto& r : regions) {
    if (r.material < 0 || r.material >= num_materials)
      throw std::invalid_argument("assign_regions: invalid material index");
    for (int a = 0; a < 3; ++a)
      if (r.lo[a] < lo[a] - tol || r.hi[a] > hi[a] + tol)
        throw std::invalid_argument("assign_regions: box outside strip");
  }
  auto& reg = grid.regions();
  for (std::int64_t e = 0; e < grid.num_elements(); ++e) {
    const Vec3 c = grid.element_center(e);
    for (const auto& r : regions) {
      bool in = true;
      for (int a = 0; a < 3; ++a)
        if (c[a] < r.lo[a] || c[a] > r.hi[a]) in = false;
      if (in) reg[size_t(e)] = r.material;
    }
  }
}

}  // namespace hsbi
