#pragma once

#include <vector>

#include "taskgen/geometry.hpp"
#include "taskgen/model.hpp"

namespace taskgen {

/// Inputs of the supporting-plane search: the object's bottom outline, the
/// candidate set, and the distance/alignment thresholds.
struct SupportQuery {
  SurfacePlane object_bottom;            // pi_o
  std::vector<SurfacePlane> candidates;  // the set Pi
  double distance_threshold = 0.02;      // theta_d (m)
  double alignment_threshold = 0.97;     // theta_a (cos angle)

  void validate() const;
};

/// Every flat face of every collision primitive in the scene, as world-frame
/// planes with polygon outlines. Boxes contribute 6 rectangles, cylinders
/// their two disk faces as regular 16-gons, convex meshes their hull faces.
/// `min_axis_alignment` > 0 keeps only faces with |n.z| at or above it
/// (candidate pruning for support queries; 0 keeps everything).
std::vector<SurfacePlane> extract_planes(const SceneModel& scene,
                                         double min_axis_alignment = 0.0);

/// Faces of a single posed geom (same conventions as extract_planes).
std::vector<SurfacePlane> geom_faces(const CollisionGeom& g,
                                     const Transform& world_pose);

/// Mean absolute plane distance over the object's outline vertices:
/// (1/|U_o|) * sum |n_s.u + d_s|.
double mean_abs_distance(const SurfacePlane& object_bottom,
                         const SurfacePlane& candidate);
/// Same sum without the absolute value (used by the tie-break).
double mean_signed_distance(const SurfacePlane& object_bottom,
                            const SurfacePlane& candidate);

/// Retains candidates passing the distance bound (mean absolute distance at
/// most theta_d) and the alignment bound (|n_s . n_o| at least theta_a).
std::vector<SurfacePlane> filter_support_planes(const SupportQuery& q);

/// The filtered candidate maximizing the contact ratio; ties broken by
/// smaller |mean signed distance|, then by larger candidate area. Throws
/// Error(NoSupport) when the filter leaves nothing.
SurfacePlane calc_support_plane(const SupportQuery& q);

/// The object link's bottom face: the largest face whose world normal points
/// most downward. Returned in world frame; `local` (optional) receives the
/// same face in the link frame.
SurfacePlane object_bottom_face(const SceneModel& scene,
                                const std::string& link,
                                SurfacePlane* local = nullptr);

}  // namespace taskgen
