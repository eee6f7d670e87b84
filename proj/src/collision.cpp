#include "taskgen/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace taskgen {

namespace {

constexpr double kGjkTol = 1e-12;
constexpr int kGjkMaxIter = 128;
constexpr int kEpaMaxIter = 128;

struct SupportPoint {
  Vector3 v;   // minkowski difference point: pa - pb
  Vector3 pa;  // support on A (world)
  Vector3 pb;  // support on B (world)
};

SupportPoint support(const CollisionGeom& a, const Transform& pa,
                     const CollisionGeom& b, const Transform& pb,
                     const Vector3& dir) {
  const Vector3 da = pa.linear().transpose() * dir;
  const Vector3 db = pb.linear().transpose() * (-dir);
  SupportPoint s;
  s.pa = pa * a.support_local(da);
  s.pb = pb * b.support_local(db);
  s.v = s.pa - s.pb;
  return s;
}

// Closest point to the origin on a simplex of 1..4 support points. Reduces
// the simplex to the minimal face containing the closest point and returns
// the barycentric weights of that face. Returns true if the origin is
// enclosed (tetrahedron case only).
bool closest_on_simplex(std::vector<SupportPoint>& w, Vector3& closest,
                        std::vector<double>& lambdas) {
  auto closest_segment = [](const Vector3& a, const Vector3& b, double& t) {
    const Vector3 ab = b - a;
    const double denom = ab.squaredNorm();
    t = denom > 0 ? std::clamp(-a.dot(ab) / denom, 0.0, 1.0) : 0.0;
    return Vector3(a + t * ab);
  };

  // Closest point to origin on triangle abc with barycentrics (Ericson).
  auto closest_triangle = [&](const Vector3& a, const Vector3& b,
                              const Vector3& c, double& u, double& v,
                              double& s) {
    const Vector3 ab = b - a, ac = c - a, ap = -a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) { u = 1; v = 0; s = 0; return a; }
    const Vector3 bp = -b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) { u = 0; v = 1; s = 0; return b; }
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
      const double t = d1 / (d1 - d3);
      u = 1 - t; v = t; s = 0;
      return Vector3(a + t * ab);
    }
    const Vector3 cp = -c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) { u = 0; v = 0; s = 1; return c; }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
      const double t = d2 / (d2 - d6);
      u = 1 - t; v = 0; s = t;
      return Vector3(a + t * ac);
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
      const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
      u = 0; v = 1 - t; s = t;
      return Vector3(b + t * (c - b));
    }
    const double denom = 1.0 / (va + vb + vc);
    v = vb * denom;
    s = vc * denom;
    u = 1 - v - s;
    return Vector3(a + ab * v + ac * s);
  };

  switch (w.size()) {
    case 1: {
      closest = w[0].v;
      lambdas = {1.0};
      return false;
    }
    case 2: {
      double t;
      closest = closest_segment(w[0].v, w[1].v, t);
      if (t <= 0) { w = {w[0]}; lambdas = {1.0}; }
      else if (t >= 1) { w = {w[1]}; lambdas = {1.0}; }
      else lambdas = {1 - t, t};
      return false;
    }
    case 3: {
      double u, v, s;
      closest = closest_triangle(w[0].v, w[1].v, w[2].v, u, v, s);
      std::vector<SupportPoint> keep;
      std::vector<double> lk;
      const double bary[3] = {u, v, s};
      for (int i = 0; i < 3; ++i) {
        if (bary[i] > 1e-14) { keep.push_back(w[i]); lk.push_back(bary[i]); }
      }
      if (keep.empty()) { keep.push_back(w[0]); lk.push_back(1.0); }
      w = keep;
      lambdas = lk;
      return false;
    }
    default: {  // tetrahedron
      // Test origin against the four faces; recurse on the closest face the
      // origin lies outside of. Inside all faces means enclosure.
      const int faces[4][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
      double best = std::numeric_limits<double>::infinity();
      std::vector<SupportPoint> best_w;
      std::vector<double> best_l;
      Vector3 best_closest = Vector3::Zero();
      bool outside_any = false;
      for (const auto& f : faces) {
        const Vector3& a = w[f[0]].v;
        const Vector3& b = w[f[1]].v;
        const Vector3& c = w[f[2]].v;
        const Vector3 n = (b - a).cross(c - a);
        const int other = 6 - f[0] - f[1] - f[2];
        const double side_origin = n.dot(-a);
        const double side_other = n.dot(w[other].v - a);
        // Origin outside this face if it is on the opposite side of the
        // fourth vertex.
        if (side_origin * side_other < 0 || std::abs(side_other) < 1e-18) {
          outside_any = true;
          double u, v, s;
          const Vector3 cp = closest_triangle(a, b, c, u, v, s);
          const double d2 = cp.squaredNorm();
          if (d2 < best) {
            best = d2;
            best_closest = cp;
            best_w.clear();
            best_l.clear();
            const double bary[3] = {u, v, s};
            for (int i = 0; i < 3; ++i) {
              if (bary[i] > 1e-14) {
                best_w.push_back(w[f[i]]);
                best_l.push_back(bary[i]);
              }
            }
            if (best_w.empty()) { best_w.push_back(w[f[0]]); best_l.push_back(1.0); }
          }
        }
      }
      if (!outside_any) return true;  // origin enclosed
      w = best_w;
      lambdas = best_l;
      closest = best_closest;
      return false;
    }
  }
}

struct GjkResult {
  bool intersecting = false;
  double distance = 0.0;
  Vector3 point_a = Vector3::Zero();
  Vector3 point_b = Vector3::Zero();
  std::vector<SupportPoint> simplex;
};

GjkResult gjk(const CollisionGeom& a, const Transform& pa,
              const CollisionGeom& b, const Transform& pb) {
  GjkResult res;
  Vector3 d0 = pb.translation() - pa.translation();
  if (d0.squaredNorm() < 1e-18) d0 = Vector3::UnitX();
  std::vector<SupportPoint> w = {support(a, pa, b, pb, d0)};
  Vector3 v = w[0].v;
  std::vector<double> lambdas = {1.0};

  for (int iter = 0; iter < kGjkMaxIter; ++iter) {
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 < kGjkTol) {
      res.intersecting = true;
      res.simplex = w;
      return res;
    }
    const SupportPoint s = support(a, pa, b, pb, -v);
    // Termination: no further progress toward the origin.
    if (vnorm2 - v.dot(s.v) <= kGjkTol * std::max(1.0, vnorm2)) break;
    bool dup = false;
    for (const auto& e : w) {
      if ((e.v - s.v).squaredNorm() < 1e-24) { dup = true; break; }
    }
    if (dup) break;
    w.push_back(s);
    if (closest_on_simplex(w, v, lambdas)) {
      res.intersecting = true;
      res.simplex = w;
      return res;
    }
  }

  res.distance = v.norm();
  res.point_a = Vector3::Zero();
  res.point_b = Vector3::Zero();
  for (size_t i = 0; i < w.size(); ++i) {
    res.point_a += lambdas[i] * w[i].pa;
    res.point_b += lambdas[i] * w[i].pb;
  }
  res.simplex = w;
  return res;
}

struct EpaFace {
  int a = 0, b = 0, c = 0;
  Vector3 normal = Vector3::UnitZ();
  double dist = 0.0;
};

void epa_face(const std::vector<SupportPoint>& verts, EpaFace& f) {
  const Vector3& pa = verts[f.a].v;
  const Vector3& pb = verts[f.b].v;
  const Vector3& pc = verts[f.c].v;
  Vector3 n = (pb - pa).cross(pc - pa);
  const double len = n.norm();
  if (len < 1e-18) {
    f.normal = Vector3::UnitZ();
    f.dist = std::numeric_limits<double>::infinity();
    return;
  }
  n /= len;
  double d = n.dot(pa);
  if (d < 0) {  // orient outward (origin inside the polytope)
    n = -n;
    d = -d;
    std::swap(f.b, f.c);
  }
  f.normal = n;
  f.dist = d;
}

// Expanding polytope algorithm; returns penetration depth (positive) and the
// contact normal pointing from B toward A's exterior (i.e. the direction A
// must move to resolve).
bool epa(const CollisionGeom& a, const Transform& pa, const CollisionGeom& b,
         const Transform& pb, std::vector<SupportPoint> simplex, double& depth,
         Vector3& normal, Vector3& witness_a, Vector3& witness_b) {
  // Grow the simplex to a tetrahedron if GJK terminated early.
  const Vector3 probes[6] = {Vector3::UnitX(),  -Vector3::UnitX(),
                             Vector3::UnitY(),  -Vector3::UnitY(),
                             Vector3::UnitZ(),  -Vector3::UnitZ()};
  for (int i = 0; simplex.size() < 4 && i < 6; ++i) {
    const SupportPoint s = support(a, pa, b, pb, probes[i]);
    bool dup = false;
    for (const auto& e : simplex) {
      if ((e.v - s.v).squaredNorm() < 1e-20) { dup = true; break; }
    }
    if (!dup) simplex.push_back(s);
  }
  if (simplex.size() < 4) return false;
  // Ensure non-degenerate tetrahedron.
  {
    const Vector3 ab = simplex[1].v - simplex[0].v;
    const Vector3 ac = simplex[2].v - simplex[0].v;
    const Vector3 ad = simplex[3].v - simplex[0].v;
    if (std::abs(ab.cross(ac).dot(ad)) < 1e-20) return false;
  }

  std::vector<SupportPoint> verts = simplex;
  std::vector<EpaFace> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  for (auto& f : faces) epa_face(verts, f);

  for (int iter = 0; iter < kEpaMaxIter; ++iter) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < faces.size(); ++i) {
      if (faces[i].dist < best_dist) {
        best_dist = faces[i].dist;
        best = int(i);
      }
    }
    if (best < 0) return false;
    const EpaFace f = faces[best];
    const SupportPoint s = support(a, pa, b, pb, f.normal);
    const double grow = f.normal.dot(s.v) - f.dist;
    if (grow < 1e-9) {
      depth = f.dist;
      normal = f.normal;
      // Witnesses from the barycentric projection of the origin onto the face.
      const Vector3& p0 = verts[f.a].v;
      const Vector3& p1 = verts[f.b].v;
      const Vector3& p2 = verts[f.c].v;
      const Vector3 proj = f.normal * f.dist;
      const Vector3 v0 = p1 - p0, v1 = p2 - p0, v2 = proj - p0;
      const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
      const double d20 = v2.dot(v0), d21 = v2.dot(v1);
      const double den = d00 * d11 - d01 * d01;
      double bv = 0, bw = 0;
      if (std::abs(den) > 1e-18) {
        bv = (d11 * d20 - d01 * d21) / den;
        bw = (d00 * d21 - d01 * d20) / den;
      }
      const double bu = 1.0 - bv - bw;
      witness_a = bu * verts[f.a].pa + bv * verts[f.b].pa + bw * verts[f.c].pa;
      witness_b = bu * verts[f.a].pb + bv * verts[f.b].pb + bw * verts[f.c].pb;
      return true;
    }
    // Remove faces visible from s and re-triangulate the hole.
    const int new_idx = int(verts.size());
    verts.push_back(s);
    std::vector<std::pair<int, int>> border;
    std::vector<EpaFace> kept;
    for (const auto& face : faces) {
      if (face.normal.dot(s.v - verts[face.a].v) > 1e-12) {
        auto add_edge = [&](int u, int v) {
          for (size_t k = 0; k < border.size(); ++k) {
            if (border[k].first == v && border[k].second == u) {
              border.erase(border.begin() + k);
              return;
            }
          }
          border.emplace_back(u, v);
        };
        add_edge(face.a, face.b);
        add_edge(face.b, face.c);
        add_edge(face.c, face.a);
      } else {
        kept.push_back(face);
      }
    }
    if (border.empty()) return false;
    for (const auto& e : border) {
      EpaFace nf{e.first, e.second, new_idx, Vector3::UnitZ(), 0.0};
      epa_face(verts, nf);
      kept.push_back(nf);
    }
    faces.swap(kept);
  }
  return false;
}

}  // namespace

CollisionGeom CollisionGeom::make_box(const Vector3& extents,
                                      const Transform& pose) {
  CollisionGeom g;
  g.shape = Shape::Box;
  g.box_extents = extents;
  g.local_pose = pose;
  g.validate();
  return g;
}

CollisionGeom CollisionGeom::make_cylinder(double radius, double length,
                                           const Transform& pose) {
  CollisionGeom g;
  g.shape = Shape::Cylinder;
  g.cyl_radius = radius;
  g.cyl_length = length;
  g.local_pose = pose;
  g.validate();
  return g;
}

CollisionGeom CollisionGeom::make_mesh(std::vector<Vector3> vertices,
                                       const Transform& pose) {
  CollisionGeom g;
  g.shape = Shape::ConvexMesh;
  g.local_pose = pose;

  auto data = std::make_shared<ConvexMeshData>();
  data->vertices = std::move(vertices);
  const auto& pts = data->vertices;
  const int n = int(pts.size());
  if (n < 4) {
    throw Error(ErrorCode::Validation, "convex mesh needs at least 4 vertices");
  }

  // Brute-force supporting-plane enumeration; fine for the small convex
  // parts this pipeline works with.
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.norm());
  const double tol = std::max(1e-9, 1e-9 * scale);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Vector3 nrm = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        if (nrm.norm() < 1e-14) continue;
        nrm.normalize();
        double d = -nrm.dot(pts[i]);
        int pos = 0, neg = 0;
        for (const auto& p : pts) {
          const double s = nrm.dot(p) + d;
          if (s > tol) ++pos;
          else if (s < -tol) ++neg;
        }
        if (pos > 0 && neg > 0) continue;  // not a supporting plane
        if (pos > 0) { nrm = -nrm; d = -d; }
        bool known = false;
        for (size_t f = 0; f < data->face_normals.size(); ++f) {
          if (data->face_normals[f].dot(nrm) > 1.0 - 1e-9 &&
              std::abs(data->face_offsets[f] - d) < tol * 10) {
            known = true;
            break;
          }
        }
        if (known) continue;
        // Collect coplanar vertices and order them CCW about the normal.
        std::vector<int> on_face;
        for (int p = 0; p < n; ++p) {
          if (std::abs(nrm.dot(pts[p]) + d) <= tol * 10) on_face.push_back(p);
        }
        if (on_face.size() < 3) continue;
        Vector3 c = Vector3::Zero();
        for (int p : on_face) c += pts[p];
        c /= double(on_face.size());
        Vector3 e1 = (pts[on_face[0]] - c).normalized();
        Vector3 e2 = nrm.cross(e1);
        std::sort(on_face.begin(), on_face.end(), [&](int u, int v) {
          const Vector3 du = pts[u] - c, dv = pts[v] - c;
          return std::atan2(e2.dot(du), e1.dot(du)) <
                 std::atan2(e2.dot(dv), e1.dot(dv));
        });
        data->faces.push_back(on_face);
        data->face_normals.push_back(nrm);
        data->face_offsets.push_back(d);
      }
    }
  }
  if (data->faces.size() < 4) {
    throw Error(ErrorCode::Validation, "convex mesh vertices are coplanar");
  }
  g.mesh = data;
  return g;
}

Vector3 CollisionGeom::support_local(const Vector3& dir) const {
  switch (shape) {
    case Shape::Box: {
      const Vector3 h = 0.5 * box_extents;
      return Vector3(dir.x() >= 0 ? h.x() : -h.x(),
                     dir.y() >= 0 ? h.y() : -h.y(),
                     dir.z() >= 0 ? h.z() : -h.z());
    }
    case Shape::Cylinder: {
      const double hz = 0.5 * cyl_length;
      const double r2 = dir.head<2>().norm();
      Vector3 s(0, 0, dir.z() >= 0 ? hz : -hz);
      if (r2 > 1e-12) s.head<2>() = (cyl_radius / r2) * dir.head<2>();
      else s.x() = cyl_radius;  // any boundary point; pick deterministic
      return s;
    }
    case Shape::ConvexMesh: {
      double best = -std::numeric_limits<double>::infinity();
      int arg = 0;
      for (size_t i = 0; i < mesh->vertices.size(); ++i) {
        const double s = dir.dot(mesh->vertices[i]);
        if (s > best) { best = s; arg = int(i); }
      }
      return mesh->vertices[arg];
    }
  }
  return Vector3::Zero();
}

void CollisionGeom::validate() const {
  switch (shape) {
    case Shape::Box:
      if ((box_extents.array() <= 0).any()) {
        throw Error(ErrorCode::Validation, "box extents must be positive");
      }
      break;
    case Shape::Cylinder:
      if (cyl_radius <= 0 || cyl_length <= 0) {
        throw Error(ErrorCode::Validation, "cylinder radius/length must be positive");
      }
      break;
    case Shape::ConvexMesh:
      if (!mesh || mesh->vertices.size() < 4) {
        throw Error(ErrorCode::Validation, "convex mesh needs at least 4 vertices");
      }
      break;
  }
}

Aabb geom_aabb(const CollisionGeom& g, const Transform& world_pose) {
  const Transform pose = world_pose * g.local_pose;
  Aabb box;
  switch (g.shape) {
    case CollisionGeom::Shape::Box: {
      const Vector3 h = 0.5 * g.box_extents;
      for (int i = 0; i < 8; ++i) {
        const Vector3 corner((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                             (i & 4) ? h.z() : -h.z());
        box.extend(pose * corner);
      }
      break;
    }
    case CollisionGeom::Shape::Cylinder: {
      // Tight bound: |R e_z| scaled semi-axes.
      const Vector3 axis = pose.linear().col(2);
      const double hz = 0.5 * g.cyl_length;
      const Vector3 e = (Vector3::Ones() - axis.cwiseAbs2()).cwiseMax(0.0)
                            .cwiseSqrt() * g.cyl_radius +
                        axis.cwiseAbs() * hz;
      box.extend(pose.translation() - e);
      box.extend(pose.translation() + e);
      break;
    }
    case CollisionGeom::Shape::ConvexMesh: {
      for (const auto& v : g.mesh->vertices) box.extend(pose * v);
      break;
    }
  }
  return box;
}

DistanceResult primitive_distance_full(const CollisionGeom& a, const Transform& pose_a,
                                       const CollisionGeom& b, const Transform& pose_b) {
  const Transform wa = pose_a * a.local_pose;
  const Transform wb = pose_b * b.local_pose;
  GjkResult g = gjk(a, wa, b, wb);
  DistanceResult res;
  if (!g.intersecting) {
    res.distance = g.distance;
    res.point_on_a = g.point_a;
    res.point_on_b = g.point_b;
    const Vector3 diff = g.point_b - g.point_a;
    res.normal = diff.norm() > 1e-12 ? diff.normalized() : Vector3::UnitZ();
    return res;
  }
  double depth = 0.0;
  Vector3 n = Vector3::UnitZ(), wa_pt = wa.translation(), wb_pt = wb.translation();
  if (epa(a, wa, b, wb, g.simplex, depth, n, wa_pt, wb_pt)) {
    res.distance = -depth;
    res.point_on_a = wa_pt;
    res.point_on_b = wb_pt;
    res.normal = -n;  // push direction from a toward b
  } else {
    res.distance = 0.0;  // touching within tolerance
  }
  return res;
}

double point_geom_distance(const Vector3& p, const CollisionGeom& g,
                           const Transform& world_pose) {
  const Transform pose = world_pose * g.local_pose;
  const Vector3 q = pose.inverse() * p;
  switch (g.shape) {
    case CollisionGeom::Shape::Box: {
      const Vector3 h = 0.5 * g.box_extents;
      const Vector3 d = q.cwiseAbs() - h;
      const double outside = d.cwiseMax(0.0).norm();
      const double inside = std::min(d.maxCoeff(), 0.0);
      return outside + inside;
    }
    case CollisionGeom::Shape::Cylinder: {
      const double dr = q.head<2>().norm() - g.cyl_radius;
      const double dz = std::abs(q.z()) - 0.5 * g.cyl_length;
      const double outside =
          std::hypot(std::max(dr, 0.0), std::max(dz, 0.0));
      const double inside = std::min(std::max(dr, dz), 0.0);
      return outside + inside;
    }
    case CollisionGeom::Shape::ConvexMesh: {
      const auto& m = *g.mesh;
      double max_plane = -std::numeric_limits<double>::infinity();
      for (size_t f = 0; f < m.faces.size(); ++f) {
        max_plane = std::max(max_plane, m.face_normals[f].dot(q) + m.face_offsets[f]);
      }
      if (max_plane <= 0) return max_plane;  // inside
      // Outside: closest point over the face polygons.
      double best = std::numeric_limits<double>::infinity();
      for (size_t f = 0; f < m.faces.size(); ++f) {
        const auto& face = m.faces[f];
        const Vector3& n = m.face_normals[f];
        const double s = n.dot(q) + m.face_offsets[f];
        const Vector3 proj = q - s * n;
        // In-face test via edge half-planes.
        bool in_face = true;
        const size_t fn = face.size();
        for (size_t e = 0; e < fn; ++e) {
          const Vector3& va = m.vertices[face[e]];
          const Vector3& vb = m.vertices[face[(e + 1) % fn]];
          if ((vb - va).cross(proj - va).dot(n) < -1e-12) {
            in_face = false;
            break;
          }
        }
        if (in_face && s >= 0) {
          best = std::min(best, s);
        } else {
          for (size_t e = 0; e < fn; ++e) {
            const Vector3& va = m.vertices[face[e]];
            const Vector3& vb = m.vertices[face[(e + 1) % fn]];
            const Vector3 ab = vb - va;
            const double len2 = ab.squaredNorm();
            const double t =
                len2 > 0 ? std::clamp((q - va).dot(ab) / len2, 0.0, 1.0) : 0.0;
            best = std::min(best, (q - (va + t * ab)).norm());
          }
        }
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace taskgen
