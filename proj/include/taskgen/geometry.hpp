#pragma once

#include <array>
#include <vector>

#include "taskgen/types.hpp"

namespace taskgen {

constexpr double kPlaneCoplanarTol = 1e-6;   // m
constexpr double kUnitNormTol = 1e-9;

/// Projects a point onto the plane n.x + d = 0 along n. Expression-friendly;
/// works with any 3-vector expression of a real scalar.
template <typename DerivedU, typename DerivedN>
Eigen::Matrix<typename DerivedU::Scalar, 3, 1> project_point(
    const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedN>& n,
    typename DerivedU::Scalar d) {
  return u - (n.dot(u) + d) * n;
}

/// Shoelace area of a planar polygon given in an orthonormal 2D frame.
template <typename Scalar>
Scalar shoelace_area(const std::vector<Eigen::Matrix<Scalar, 2, 1>>& poly) {
  Scalar twice = Scalar(0);
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return twice / Scalar(2);
}

/// Oriented plane with a polygonal outline: normal n, offset d (n.x + d = 0),
/// and outline vertices ordered counter-clockwise w.r.t. n.
struct SurfacePlane {
  Vector3 normal = Vector3::UnitZ();
  double offset = 0.0;
  std::vector<Vector3> outline;

  double signed_distance(const Vector3& p) const {
    return normal.dot(p) + offset;
  }

  /// Area of the outline polygon (m^2).
  double area() const;

  /// Arithmetic mean of the outline vertices.
  Vector3 vertex_mean() const;

  /// Area-weighted centroid of the outline polygon.
  Vector3 centroid() const;

  /// Orthonormal in-plane axes; deterministic in the normal.
  void frame(Vector3& e1, Vector3& e2) const;

  Vector2 to_plane_coords(const Vector3& p) const;
  Vector3 from_plane_coords(const Vector2& p) const;

  /// Checks unit normal, coplanar outline, and simple polygon with >= 3
  /// vertices; throws Error(Validation) otherwise.
  void validate() const;

  /// Builds a plane from an outline. The normal comes from Newell's formula;
  /// vertex order is flipped if needed so the outline is CCW w.r.t. it. If
  /// `want_normal` is given, the plane is oriented to match it instead.
  static SurfacePlane from_outline(std::vector<Vector3> outline);
  static SurfacePlane from_outline(std::vector<Vector3> outline,
                                   const Vector3& want_normal);
};

/// u' = u - (n.u + d) n for every input point.
std::vector<Vector3> project_onto_plane(const std::vector<Vector3>& points,
                                        const SurfacePlane& plane);

/// Exact area of the intersection of two coplanar simple polygons.
/// Non-convex inputs are triangulated first (ear clipping) and the clipped
/// triangle-pair areas summed. Throws Error(Domain) if not coplanar.
double polygon_intersection_area(const SurfacePlane& a, const SurfacePlane& b);

/// A(U_s intersect proj(U_o)) / A(U_o). Throws Error(Domain) on a degenerate
/// (zero-area) object outline. Result clamped to [0, 1].
double contact_ratio(const SurfacePlane& object_bottom,
                     const SurfacePlane& support);

/// True iff p lies inside or on the boundary of the outline polygon.
/// Throws Error(Domain) if p is more than 1e-6 m off the plane.
bool point_in_polygon(const Vector3& p, const SurfacePlane& poly);

// 2D helpers shared with the sampler and goal generator.
using Polygon2 = std::vector<Vector2>;

double polygon_area_2d(const Polygon2& poly);
bool point_in_polygon_2d(const Vector2& p, const Polygon2& poly);
/// Fan/ear-clipping triangulation of a simple polygon (indices into poly).
std::vector<std::array<int, 3>> triangulate(const Polygon2& poly);
/// Sutherland-Hodgman clip of `subject` against a convex `clip` polygon
/// (both CCW). Returns the clipped polygon, possibly empty.
Polygon2 clip_convex(const Polygon2& subject, const Polygon2& clip);
/// Andrew's monotone chain; returns CCW hull of a 2D point set.
Polygon2 convex_hull_2d(std::vector<Vector2> points);
/// Distance from p to the polygon boundary (positive inside and outside).
double distance_to_boundary_2d(const Vector2& p, const Polygon2& poly);

}  // namespace taskgen
