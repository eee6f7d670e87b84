#include "taskgen/support.hpp"

#include <algorithm>
#include <cmath>

namespace taskgen {

namespace {

constexpr int kCylinderFaceSides = 16;

void append_box_faces(const Vector3& extents, const Transform& pose,
                      std::vector<SurfacePlane>& out) {
  const Vector3 h = 0.5 * extents;
  // Six faces; outlines CCW w.r.t. the outward normal.
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      const int u = (axis + 1) % 3;
      const int v = (axis + 2) % 3;
      std::vector<Vector3> corners(4);
      for (int k = 0; k < 4; ++k) {
        Vector3 c;
        c[axis] = sign * h[axis];
        // CCW about +axis; mirror for the -axis face.
        const int uu = (k == 1 || k == 2) ? 1 : -1;
        const int vv = (k >= 2) ? 1 : -1;
        c[u] = (sign > 0 ? uu : -uu) * h[u];
        c[v] = vv * h[v];
        corners[k] = pose * c;
      }
      Vector3 n = Vector3::Zero();
      n[axis] = sign;
      out.push_back(SurfacePlane::from_outline(corners, pose.linear() * n));
    }
  }
}

void append_cylinder_faces(double radius, double length, const Transform& pose,
                           std::vector<SurfacePlane>& out) {
  const double hz = 0.5 * length;
  for (int sign = -1; sign <= 1; sign += 2) {
    std::vector<Vector3> ring(kCylinderFaceSides);
    for (int k = 0; k < kCylinderFaceSides; ++k) {
      // CCW when viewed along the outward normal.
      const double ang = 2.0 * M_PI * (sign > 0 ? k : kCylinderFaceSides - k) /
                         kCylinderFaceSides;
      ring[k] = pose * Vector3(radius * std::cos(ang), radius * std::sin(ang),
                               sign * hz);
    }
    out.push_back(SurfacePlane::from_outline(
        ring, pose.linear() * Vector3(0, 0, double(sign))));
  }
}

void append_mesh_faces(const ConvexMeshData& mesh, const Transform& pose,
                       std::vector<SurfacePlane>& out) {
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    std::vector<Vector3> outline;
    outline.reserve(mesh.faces[f].size());
    for (int idx : mesh.faces[f]) outline.push_back(pose * mesh.vertices[idx]);
    out.push_back(SurfacePlane::from_outline(
        outline, pose.linear() * mesh.face_normals[f]));
  }
}

}  // namespace

void SupportQuery::validate() const {
  if (distance_threshold <= 0) {
    throw Error(ErrorCode::Validation, "theta_d must be positive");
  }
  if (alignment_threshold <= 0 || alignment_threshold > 1) {
    throw Error(ErrorCode::Validation, "theta_a must be in (0, 1]");
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::Validation, "candidate set is empty");
  }
}

std::vector<SurfacePlane> geom_faces(const CollisionGeom& g,
                                     const Transform& world_pose) {
  std::vector<SurfacePlane> out;
  const Transform pose = world_pose * g.local_pose;
  switch (g.shape) {
    case CollisionGeom::Shape::Box:
      append_box_faces(g.box_extents, pose, out);
      break;
    case CollisionGeom::Shape::Cylinder:
      append_cylinder_faces(g.cyl_radius, g.cyl_length, pose, out);
      break;
    case CollisionGeom::Shape::ConvexMesh:
      append_mesh_faces(*g.mesh, pose, out);
      break;
  }
  return out;
}

std::vector<SurfacePlane> extract_planes(const SceneModel& scene,
                                         double min_axis_alignment) {
  std::vector<SurfacePlane> out;
  for (const auto& pg : scene.collision_geoms()) {
    for (auto& face : geom_faces(pg.geom, pg.pose)) {
      if (std::abs(face.normal.z()) >= min_axis_alignment) {
        out.push_back(std::move(face));
      }
    }
  }
  return out;
}

double mean_abs_distance(const SurfacePlane& object_bottom,
                         const SurfacePlane& candidate) {
  double sum = 0.0;
  for (const auto& u : object_bottom.outline) {
    sum += std::abs(candidate.signed_distance(u));
  }
  return sum / double(object_bottom.outline.size());
}

double mean_signed_distance(const SurfacePlane& object_bottom,
                            const SurfacePlane& candidate) {
  double sum = 0.0;
  for (const auto& u : object_bottom.outline) {
    sum += candidate.signed_distance(u);
  }
  return sum / double(object_bottom.outline.size());
}

std::vector<SurfacePlane> filter_support_planes(const SupportQuery& q) {
  q.validate();
  std::vector<SurfacePlane> out;
  for (const auto& cand : q.candidates) {
    if (mean_abs_distance(q.object_bottom, cand) > q.distance_threshold) continue;
    if (std::abs(cand.normal.dot(q.object_bottom.normal)) <
        q.alignment_threshold) {
      continue;
    }
    out.push_back(cand);
  }
  return out;
}

SurfacePlane calc_support_plane(const SupportQuery& q) {
  const auto filtered = filter_support_planes(q);
  if (filtered.empty()) {
    throw Error(ErrorCode::NoSupport,
                "no candidate plane satisfies the distance and alignment bounds");
  }
  int best = 0;
  double best_ratio = -1.0, best_dist = 0.0, best_area = 0.0;
  for (size_t i = 0; i < filtered.size(); ++i) {
    const double ratio = contact_ratio(q.object_bottom, filtered[i]);
    const double dist = std::abs(mean_signed_distance(q.object_bottom, filtered[i]));
    const double area = filtered[i].area();
    bool better = false;
    if (ratio > best_ratio + 1e-12) better = true;
    else if (std::abs(ratio - best_ratio) <= 1e-12) {
      if (dist < best_dist - 1e-12) better = true;
      else if (std::abs(dist - best_dist) <= 1e-12 && area > best_area + 1e-12) {
        better = true;
      }
    }
    if (better || i == 0) {
      best = int(i);
      best_ratio = ratio;
      best_dist = dist;
      best_area = area;
    }
  }
  return filtered[best];
}

SurfacePlane object_bottom_face(const SceneModel& scene,
                                const std::string& link, SurfacePlane* local) {
  const Link* l = scene.find_link(link);
  if (!l) throw Error(ErrorCode::Domain, "unknown link: " + link);
  if (l->collision_geoms.empty()) {
    throw Error(ErrorCode::Domain, "link has no collision geometry: " + link);
  }
  const Transform pose = scene.link_pose(link);

  double best_down = 1.0;
  double best_area = -1.0;
  const SurfacePlane* best_world = nullptr;
  int best_geom = -1, best_face = -1;

  std::vector<std::vector<SurfacePlane>> all_faces;
  for (const auto& g : l->collision_geoms) {
    all_faces.push_back(geom_faces(g, pose));
  }
  for (size_t gi = 0; gi < all_faces.size(); ++gi) {
    for (size_t fi = 0; fi < all_faces[gi].size(); ++fi) {
      const SurfacePlane& face = all_faces[gi][fi];
      const double down = face.normal.z();
      const double area = face.area();
      // Most downward-facing; among near-ties the largest area wins.
      if (down < best_down - 1e-9 ||
          (down < best_down + 1e-9 && area > best_area)) {
        best_down = down;
        best_area = area;
        best_world = &face;
        best_geom = int(gi);
        best_face = int(fi);
      }
    }
  }
  if (!best_world || best_down > -0.5) {
    throw Error(ErrorCode::Domain,
                "link has no downward-facing planar bottom: " + link);
  }
  if (local) {
    const auto local_faces =
        geom_faces(l->collision_geoms[best_geom], Transform::Identity());
    *local = local_faces[best_face];
  }
  return *best_world;
}

}  // namespace taskgen
