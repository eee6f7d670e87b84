#pragma once

#include <string>
#include <vector>

#include "taskgen/collision.hpp"
#include "taskgen/types.hpp"

namespace taskgen {

/// Voxel grid of signed distances (m, positive outside obstacles). Values are
/// exact at cell centers; trilinear interpolation elsewhere is conservative
/// within sqrt(3)/2 * cell_size because exact distance fields are 1-Lipschitz.
struct SdfGrid {
  Vector3 origin = Vector3::Zero();   // center of cell (0,0,0)
  double cell_size = 0.05;
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  std::vector<double> values;         // x-major: idx = (z*ny + y)*nx + x

  double at_cell(int x, int y, int z) const {
    return values[(size_t(z) * dims.y() + y) * dims.x() + x];
  }

  /// Trilinearly interpolated value; queries outside the grid are clamped to
  /// the border cells (their value remains a conservative lower bound only
  /// inside the grid; callers keep queries within the padded scene box).
  double sample(const Vector3& p) const;

  /// Central-difference gradient of the interpolated field.
  Vector3 gradient(const Vector3& p) const;

  void validate() const;
};

/// Posed geometry, the unit the SDF builder and collision sweeps consume.
struct PosedGeom {
  CollisionGeom geom;
  Transform pose = Transform::Identity();  // owning link's world pose
  std::string link;
};

/// Builds an SDF over the union of the given geoms, padded by `padding`
/// around their joint bounding box. Each cell holds the exact distance from
/// the cell center to the nearest geom. An empty geom set yields an
/// all-positive grid at a large sentinel distance.
SdfGrid build_sdf_from_geoms(const std::vector<PosedGeom>& geoms,
                             double cell_size, double padding = 0.5);

constexpr double kSdfEmptySentinel = 1e6;

}  // namespace taskgen
