#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "taskgen/model.hpp"
#include "taskgen/rng.hpp"
#include "taskgen/support.hpp"

namespace taskgen {

/// One physically consistent object placement: bottom coplanar with the
/// support, full footprint containment, yaw-only rotation about the support
/// normal.
struct PlacementSample {
  Transform pose = Transform::Identity();  // object frame -> world
  SurfacePlane support;
  std::string support_link;
  uint64_t seed = 0;
};

struct SamplerOptions {
  int attempt_budget = 100000;
  /// Candidate pruning for the support search: keep faces with |n.z| >= this.
  double min_axis_alignment = 0.5;
  /// Placements may rest on geometry; deeper penetration is a collision.
  double penetration_tol = 1e-6;
};

/// Draws `n` object poses on the identified supporting plane: uniform over
/// the support polygon (fan triangulation + barycentric draw) x uniform yaw,
/// rejecting samples whose projected footprint leaves the polygon or whose
/// placed geometry penetrates the scene. Deterministic given `seed`. Throws
/// Error(NoSupport) when no plane qualifies and Error(Saturation), naming the
/// dominant failing constraint, when the attempt budget runs out.
std::vector<PlacementSample> sample_poses(const std::string& object_link,
                                          const SceneModel& scene, int n,
                                          uint64_t seed,
                                          double distance_threshold,
                                          double alignment_threshold,
                                          const SamplerOptions& opts = {});

/// Samples a collision-free base pose with the base footprint on the floor
/// polygon, within `radius` of `near`. The arm is held at `arm_config`
/// (zeros by default) for the collision check.
PlanarBasePose sample_base_pose(const RobotModel& robot, const SceneModel& scene,
                                const Vector3& near, double radius,
                                uint64_t seed,
                                const VectorX& arm_config = VectorX(),
                                const SamplerOptions& opts = {});

/// The floor: the largest near-horizontal upward face within 5 cm of the
/// lowest one.
SurfacePlane find_floor_plane(const SceneModel& scene);

}  // namespace taskgen
