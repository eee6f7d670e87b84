#include "taskgen/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace taskgen {

namespace {

Vector3 newell_normal(const std::vector<Vector3>& outline) {
  Vector3 n = Vector3::Zero();
  const size_t m = outline.size();
  for (size_t i = 0; i < m; ++i) {
    const Vector3& p = outline[i];
    const Vector3& q = outline[(i + 1) % m];
    n.x() += (p.y() - q.y()) * (p.z() + q.z());
    n.y() += (p.z() - q.z()) * (p.x() + q.x());
    n.z() += (p.x() - q.x()) * (p.y() + q.y());
  }
  return n;
}

bool segments_intersect(const Vector2& a, const Vector2& b, const Vector2& c,
                        const Vector2& d) {
  auto cross = [](const Vector2& u, const Vector2& v) {
    return u.x() * v.y() - u.y() * v.x();
  };
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool is_simple(const Polygon2& poly) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (share a vertex).
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j],
                             poly[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

Polygon2 ensure_ccw(Polygon2 poly) {
  if (shoelace_area(poly) < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

double point_segment_distance_2d(const Vector2& p, const Vector2& a,
                                 const Vector2& b) {
  const Vector2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

double SurfacePlane::area() const {
  Vector3 e1, e2;
  frame(e1, e2);
  Polygon2 poly;
  poly.reserve(outline.size());
  for (const auto& u : outline) poly.push_back(to_plane_coords(u));
  return std::abs(shoelace_area(poly));
}

Vector3 SurfacePlane::vertex_mean() const {
  Vector3 m = Vector3::Zero();
  for (const auto& u : outline) m += u;
  return outline.empty() ? m : Vector3(m / double(outline.size()));
}

Vector3 SurfacePlane::centroid() const {
  Vector3 e1, e2;
  frame(e1, e2);
  Polygon2 poly;
  for (const auto& u : outline) poly.push_back(to_plane_coords(u));
  const size_t n = poly.size();
  double twice_area = 0.0;
  Vector2 c = Vector2::Zero();
  for (size_t i = 0; i < n; ++i) {
    const Vector2& p = poly[i];
    const Vector2& q = poly[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    twice_area += w;
    c += w * (p + q);
  }
  if (std::abs(twice_area) < 1e-18) return vertex_mean();
  c /= 3.0 * twice_area;
  return from_plane_coords(c);
}

void SurfacePlane::frame(Vector3& e1, Vector3& e2) const {
  // Pick the world axis least aligned with the normal, deterministically.
  int k = 0;
  double best = std::abs(normal.x());
  if (std::abs(normal.y()) < best) { best = std::abs(normal.y()); k = 1; }
  if (std::abs(normal.z()) < best) { k = 2; }
  Vector3 axis = Vector3::Zero();
  axis[k] = 1.0;
  e1 = (axis - axis.dot(normal) * normal).normalized();
  e2 = normal.cross(e1);
}

Vector2 SurfacePlane::to_plane_coords(const Vector3& p) const {
  Vector3 e1, e2;
  frame(e1, e2);
  const Vector3 origin = -offset * normal;  // closest plane point to 0
  const Vector3 v = p - origin;
  return Vector2(e1.dot(v), e2.dot(v));
}

Vector3 SurfacePlane::from_plane_coords(const Vector2& p) const {
  Vector3 e1, e2;
  frame(e1, e2);
  const Vector3 origin = -offset * normal;
  return origin + p.x() * e1 + p.y() * e2;
}

void SurfacePlane::validate() const {
  if (std::abs(normal.norm() - 1.0) > kUnitNormTol) {
    throw Error(ErrorCode::Validation, "plane normal is not unit length");
  }
  if (outline.size() < 3) {
    throw Error(ErrorCode::Validation, "plane outline has fewer than 3 vertices");
  }
  for (const auto& u : outline) {
    if (std::abs(signed_distance(u)) > kPlaneCoplanarTol) {
      throw Error(ErrorCode::Validation, "plane outline vertex is off-plane");
    }
  }
  Polygon2 poly;
  for (const auto& u : outline) poly.push_back(to_plane_coords(u));
  if (!is_simple(poly)) {
    throw Error(ErrorCode::Validation, "plane outline is self-intersecting");
  }
}

SurfacePlane SurfacePlane::from_outline(std::vector<Vector3> outline) {
  if (outline.size() < 3) {
    throw Error(ErrorCode::Validation, "outline needs at least 3 vertices");
  }
  Vector3 n = newell_normal(outline);
  if (n.norm() < 1e-12) {
    throw Error(ErrorCode::Validation, "outline is degenerate");
  }
  n.normalize();
  SurfacePlane plane;
  plane.normal = n;
  plane.offset = -n.dot(outline[0]);
  plane.outline = std::move(outline);
  return plane;
}

SurfacePlane SurfacePlane::from_outline(std::vector<Vector3> outline,
                                        const Vector3& want_normal) {
  SurfacePlane plane = from_outline(std::move(outline));
  if (plane.normal.dot(want_normal) < 0) {
    plane.normal = -plane.normal;
    plane.offset = -plane.offset;
    std::reverse(plane.outline.begin(), plane.outline.end());
  }
  return plane;
}

std::vector<Vector3> project_onto_plane(const std::vector<Vector3>& points,
                                        const SurfacePlane& plane) {
  std::vector<Vector3> out;
  out.reserve(points.size());
  for (const auto& u : points) {
    out.push_back(project_point(u, plane.normal, plane.offset));
  }
  return out;
}

double polygon_area_2d(const Polygon2& poly) {
  return std::abs(shoelace_area(poly));
}

bool point_in_polygon_2d(const Vector2& p, const Polygon2& poly) {
  const size_t n = poly.size();
  // Boundary counts as inside.
  for (size_t i = 0; i < n; ++i) {
    if (point_segment_distance_2d(p, poly[i], poly[(i + 1) % n]) <= 1e-9) {
      return true;
    }
  }
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vector2& a = poly[i];
    const Vector2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross =
          a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::vector<std::array<int, 3>> triangulate(const Polygon2& poly_in) {
  Polygon2 poly = poly_in;
  std::vector<int> idx(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) idx[i] = int(i);
  const bool flip = shoelace_area(poly) < 0;
  if (flip) {
    std::reverse(poly.begin(), poly.end());
    std::reverse(idx.begin(), idx.end());
  }

  auto cross = [](const Vector2& o, const Vector2& a, const Vector2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };

  std::vector<std::array<int, 3>> tris;
  std::vector<int> v(idx);
  std::vector<Vector2> pts(poly);
  int guard = int(v.size()) * int(v.size()) + 8;
  while (v.size() > 3 && guard-- > 0) {
    bool clipped = false;
    const int m = int(v.size());
    for (int i = 0; i < m; ++i) {
      const int i0 = (i + m - 1) % m;
      const int i1 = i;
      const int i2 = (i + 1) % m;
      const Vector2& a = pts[i0];
      const Vector2& b = pts[i1];
      const Vector2& c = pts[i2];
      if (cross(a, b, c) <= 1e-15) continue;  // reflex or collinear ear tip
      bool contains = false;
      for (int k = 0; k < m; ++k) {
        if (k == i0 || k == i1 || k == i2) continue;
        const Vector2& q = pts[k];
        if (cross(a, b, q) >= -1e-15 && cross(b, c, q) >= -1e-15 &&
            cross(c, a, q) >= -1e-15) {
          contains = true;
          break;
        }
      }
      if (contains) continue;
      tris.push_back({v[i0], v[i1], v[i2]});
      v.erase(v.begin() + i1);
      pts.erase(pts.begin() + i1);
      clipped = true;
      break;
    }
    if (!clipped) break;  // numerically stuck; remaining region ~ degenerate
  }
  if (v.size() == 3) tris.push_back({v[0], v[1], v[2]});
  return tris;
}

Polygon2 clip_convex(const Polygon2& subject, const Polygon2& clip) {
  Polygon2 out = subject;
  const size_t n = clip.size();
  for (size_t i = 0; i < n && !out.empty(); ++i) {
    const Vector2& c1 = clip[i];
    const Vector2& c2 = clip[(i + 1) % n];
    Polygon2 input;
    input.swap(out);
    auto side = [&](const Vector2& p) {
      return (c2.x() - c1.x()) * (p.y() - c1.y()) -
             (c2.y() - c1.y()) * (p.x() - c1.x());
    };
    auto intersect = [&](const Vector2& a, const Vector2& b) {
      const Vector2 dc = c2 - c1;
      const Vector2 dp = b - a;
      const double den = dc.x() * dp.y() - dc.y() * dp.x();
      if (std::abs(den) < 1e-18) return b;
      const double t =
          (dc.x() * (a.y() - c1.y()) - dc.y() * (a.x() - c1.x())) / den;
      return Vector2(a + t * dp);
    };
    const size_t m = input.size();
    for (size_t j = 0; j < m; ++j) {
      const Vector2& cur = input[j];
      const Vector2& prev = input[(j + m - 1) % m];
      const bool cur_in = side(cur) >= 0;
      const bool prev_in = side(prev) >= 0;
      if (cur_in) {
        if (!prev_in) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (prev_in) {
        out.push_back(intersect(prev, cur));
      }
    }
  }
  return out;
}

Polygon2 convex_hull_2d(std::vector<Vector2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vector2& a, const Vector2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vector2& a, const Vector2& b) {
                          return (a - b).norm() < 1e-12;
                        }),
            pts.end());
  const size_t n = pts.size();
  if (n < 3) return pts;
  auto cross = [](const Vector2& o, const Vector2& a, const Vector2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vector2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = n - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

double distance_to_boundary_2d(const Vector2& p, const Polygon2& poly) {
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    best = std::min(best,
                    point_segment_distance_2d(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

double polygon_intersection_area(const SurfacePlane& a, const SurfacePlane& b) {
  if (std::abs(std::abs(a.normal.dot(b.normal)) - 1.0) > 1e-6) {
    throw Error(ErrorCode::Domain, "polygons are not coplanar (normals differ)");
  }
  for (const auto& u : b.outline) {
    if (std::abs(a.signed_distance(u)) > kPlaneCoplanarTol) {
      throw Error(ErrorCode::Domain, "polygons are not coplanar");
    }
  }

  Polygon2 pa, pb;
  for (const auto& u : a.outline) pa.push_back(a.to_plane_coords(u));
  for (const auto& u : b.outline) pb.push_back(a.to_plane_coords(u));
  pa = ensure_ccw(pa);
  pb = ensure_ccw(pb);

  const auto tris_a = triangulate(pa);
  const auto tris_b = triangulate(pb);
  double total = 0.0;
  for (const auto& ta : tris_a) {
    const Polygon2 tri_a = {pa[ta[0]], pa[ta[1]], pa[ta[2]]};
    for (const auto& tb : tris_b) {
      const Polygon2 tri_b = {pb[tb[0]], pb[tb[1]], pb[tb[2]]};
      const Polygon2 clipped = clip_convex(tri_a, tri_b);
      if (clipped.size() >= 3) total += std::abs(shoelace_area(clipped));
    }
  }
  return total;
}

double contact_ratio(const SurfacePlane& object_bottom,
                     const SurfacePlane& support) {
  const double object_area = object_bottom.area();
  if (object_area < 1e-12) {
    throw Error(ErrorCode::Domain, "object outline has zero area");
  }
  std::vector<Vector3> projected =
      project_onto_plane(object_bottom.outline, support);
  // The projection can collapse when the bottom is near-perpendicular to the
  // support; a degenerate projection simply contributes zero overlap.
  Vector3 n = newell_normal(projected);
  if (n.norm() < 1e-12) return 0.0;

  SurfacePlane proj;
  proj.normal = support.normal;
  proj.offset = support.offset;
  proj.outline = std::move(projected);
  const double inter = polygon_intersection_area(support, proj);
  return std::clamp(inter / object_area, 0.0, 1.0);
}

bool point_in_polygon(const Vector3& p, const SurfacePlane& poly) {
  if (std::abs(poly.signed_distance(p)) > kPlaneCoplanarTol) {
    throw Error(ErrorCode::Domain, "point is off the polygon's plane");
  }
  Polygon2 poly2;
  for (const auto& u : poly.outline) poly2.push_back(poly.to_plane_coords(u));
  return point_in_polygon_2d(poly.to_plane_coords(p), poly2);
}

}  // namespace taskgen
