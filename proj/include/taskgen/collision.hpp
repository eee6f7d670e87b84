#pragma once

#include <memory>
#include <vector>

#include "taskgen/geometry.hpp"
#include "taskgen/types.hpp"

namespace taskgen {

/// Faces of a convex polytope, enumerated once at construction.
struct ConvexMeshData {
  std::vector<Vector3> vertices;             // local frame
  std::vector<std::vector<int>> faces;       // CCW w.r.t. outward normal
  std::vector<Vector3> face_normals;         // outward, unit
  std::vector<double> face_offsets;          // n.x + d = 0 on the face plane
};

/// Convex collision primitive with a pose local to its owning link.
struct CollisionGeom {
  enum class Shape { Box, Cylinder, ConvexMesh };

  Shape shape = Shape::Box;
  Vector3 box_extents = Vector3::Ones();     // full side lengths (m)
  double cyl_radius = 0.0;                   // m
  double cyl_length = 0.0;                   // full length along local z (m)
  std::shared_ptr<const ConvexMeshData> mesh;
  Transform local_pose = Transform::Identity();

  static CollisionGeom make_box(const Vector3& extents,
                                const Transform& pose = Transform::Identity());
  static CollisionGeom make_cylinder(double radius, double length,
                                     const Transform& pose = Transform::Identity());
  /// Builds the face structure from a convex vertex cloud. Throws
  /// Error(Validation) if fewer than 4 non-coplanar vertices.
  static CollisionGeom make_mesh(std::vector<Vector3> vertices,
                                 const Transform& pose = Transform::Identity());

  /// Farthest point of the geom in direction `dir`, both in the geom frame.
  Vector3 support_local(const Vector3& dir) const;

  void validate() const;
};

struct Aabb {
  Vector3 min = Vector3::Constant(std::numeric_limits<double>::infinity());
  Vector3 max = Vector3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vector3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  bool overlaps(const Aabb& o, double margin = 0.0) const {
    return (min.array() - margin <= o.max.array()).all() &&
           (o.min.array() - margin <= max.array()).all();
  }
};

Aabb geom_aabb(const CollisionGeom& g, const Transform& world_pose);

struct DistanceResult {
  double distance = 0.0;    // > 0 separated, <= 0 touching/penetrating
  Vector3 point_on_a = Vector3::Zero();  // world
  Vector3 point_on_b = Vector3::Zero();  // world
  Vector3 normal = Vector3::UnitZ();     // from a toward b (world)
};

/// Signed distance between two posed convex geoms: GJK for separation, EPA
/// for penetration depth. Symmetric in its arguments.
DistanceResult primitive_distance_full(const CollisionGeom& a, const Transform& pose_a,
                                       const CollisionGeom& b, const Transform& pose_b);

inline double primitive_distance(const CollisionGeom& a, const Transform& pose_a,
                                 const CollisionGeom& b, const Transform& pose_b) {
  return primitive_distance_full(a, pose_a, b, pose_b).distance;
}

/// Exact signed distance from a world point to a posed geom (negative inside).
double point_geom_distance(const Vector3& p, const CollisionGeom& g,
                           const Transform& world_pose);

}  // namespace taskgen
