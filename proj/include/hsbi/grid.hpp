#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "hsbi/materials.hpp"

namespace hsbi {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box assigning a material region. Later entries in a region
/// list override earlier ones where boxes overlap.
struct RegionSpec {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  int material = 0;
};

/// Regular hexahedral mesh of the virtual strip. Cubic elements, spacing dx
/// on all three axes. Node i of axis a sits at origin[a] + i*dx.
///
/// Node index = j2*(N1+1)*(N3+1) + k3*(N1+1) + i1 (x2-major so that
/// constant-x2 planes are contiguous). Element index likewise with
/// N1, N3 in place of N1+1, N3+1.
class StructuredGrid {
 public:
  StructuredGrid() = default;
  StructuredGrid(int n1, int n2, int n3, double dx, Vec3 origin);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  double dx() const { return dx_; }
  const Vec3& origin() const { return origin_; }

  std::int64_t num_nodes() const {
    return std::int64_t(n1_ + 1) * (n2_ + 1) * (n3_ + 1);
  }
  std::int64_t num_elements() const {
    return std::int64_t(n1_) * n2_ * n3_;
  }

  std::int64_t node_index(int i1, int j2, int k3) const {
    return std::int64_t(j2) * plane_nodes() + std::int64_t(k3) * (n1_ + 1) + i1;
  }
  std::array<int, 3> node_ijk(std::int64_t idx) const {
    int j2 = int(idx / plane_nodes());
    std::int64_t r = idx % plane_nodes();
    return {int(r % (n1_ + 1)), j2, int(r / (n1_ + 1))};
  }
  Vec3 node_coord(std::int64_t idx) const {
    auto [i, j, k] = node_ijk(idx);
    return origin_ + dx_ * Vec3(i, j, k);
  }
  std::int64_t plane_nodes() const {
    return std::int64_t(n1_ + 1) * (n3_ + 1);
  }

  std::int64_t element_index(int i1, int j2, int k3) const {
    return (std::int64_t(j2) * n3_ + k3) * n1_ + i1;
  }
  std::array<int, 3> element_ijk(std::int64_t e) const {
    int i1 = int(e % n1_);
    std::int64_t r = e / n1_;
    return {i1, int(r / n3_), int(r % n3_)};
  }
  Vec3 element_center(std::int64_t e) const {
    auto [i, j, k] = element_ijk(e);
    return origin_ + dx_ * (Vec3(i, j, k) + Vec3::Constant(0.5));
  }

  /// Corner node ids of element e, in the standard trilinear-hex local order
  /// (x1 fastest, then x3, then x2).
  std::array<std::int64_t, 8> element_nodes(std::int64_t e) const {
    auto [i, j, k] = element_ijk(e);
    std::array<std::int64_t, 8> n;
    int c = 0;
    for (int dj = 0; dj <= 1; ++dj)
      for (int dk = 0; dk <= 1; ++dk)
        for (int di = 0; di <= 1; ++di)
          n[c++] = node_index(i + di, j + dj, k + dk);
    return n;
  }

  int element_region(std::int64_t e) const { return regions_[size_t(e)]; }
  std::vector<int>& regions() { return regions_; }
  const std::vector<int>& regions() const { return regions_; }

  /// Node ids of the plane x2 = origin2 + j2*dx.
  std::vector<std::int64_t> plane_node_set(int j2) const;

 private:
  int n1_ = 0, n2_ = 0, n3_ = 0;
  double dx_ = 0.0;
  Vec3 origin_ = Vec3::Zero();
  std::vector<int> regions_;  // per element
};

/// True when n factors entirely into 2, 3 and 5 (spectral-transform
/// admissible boundary size).
bool spectral_admissible(int n);

/// Build the strip mesh from physical extents (must be positive multiples
/// of dx). N1 and N3 must be spectral admissible; N2 >= 2.
StructuredGrid build_grid(const Vec3& extents, double dx,
                          Vec3 origin = Vec3::Zero());

/// Assign material regions by element-center containment; boxes must lie
/// within the strip, later boxes win, elements outside all boxes keep
/// material 0.
void assign_regions(StructuredGrid& grid, const std::vector<RegionSpec>& regions,
                    int num_materials);

}  // namespace hsbi
