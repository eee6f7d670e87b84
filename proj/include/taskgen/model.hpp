#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taskgen/collision.hpp"
#include "taskgen/sdf.hpp"
#include "taskgen/types.hpp"

namespace taskgen {

struct Link {
  std::string name;
  std::vector<CollisionGeom> collision_geoms;
  std::vector<CollisionGeom> visual_geoms;
  std::optional<double> mass;  // kg
};

enum class JointKind { Revolute, Prismatic, Fixed, PlanarVirtual };

struct Joint {
  std::string name;
  JointKind kind = JointKind::Fixed;
  std::string parent;
  std::string child;
  Transform origin = Transform::Identity();
  Vector3 axis = Vector3::UnitZ();
  double lower = 0.0;  // rad or m; unused for fixed
  double upper = 0.0;

  bool is_fixed() const { return kind == JointKind::Fixed; }
};

/// Kinematic tree parsed from the scene description. Immutable after
/// construction; safe to share across task workers.
struct SceneModel {
  std::vector<Link> links;
  std::vector<Joint> joints;
  std::string root;
  std::map<std::string, std::string> room_labels;     // link -> room tag
  std::map<std::string, std::string> display_labels;  // link -> phrase
  std::vector<std::string> warnings;                  // unsupported tags etc.

  const Link* find_link(const std::string& name) const;
  const Joint* parent_joint(const std::string& link) const;
  int link_index(const std::string& name) const;

  /// World pose of every link with all joints at zero.
  std::map<std::string, Transform> link_poses() const;
  Transform link_pose(const std::string& name) const;

  /// All collision geoms posed in world, except the named links.
  std::vector<PosedGeom> collision_geoms(
      const std::vector<std::string>& exclude_links = {}) const;

  /// Copy of this scene with `link` moved to `world_pose` (its parent joint
  /// origin is rewritten; the tree structure is unchanged).
  SceneModel with_link_pose(const std::string& link,
                            const Transform& world_pose) const;

  void validate() const;
};

/// Mobile manipulator: three planar-virtual base joints (x, y, theta)
/// followed by the arm chain, plus any fixed attachments (gripper bodies).
struct RobotModel {
  std::vector<Link> links;
  std::vector<Joint> joints;        // full tree incl. fixed attachments
  std::string root;
  std::vector<std::string> base_joints;  // exactly x, y, theta joint names
  std::vector<std::string> arm_chain;    // actuated arm joint names, in order
  std::string ee_frame;
  Vector2 gripper_aperture = Vector2(0.0, 0.0);  // [min, max] m
  std::vector<std::string> warnings;

  int dof() const { return 3 + int(arm_chain.size()); }

  const Link* find_link(const std::string& name) const;
  const Joint* find_joint(const std::string& name) const;

  /// Links rigidly attached at or below the end-effector frame (the set whose
  /// collisions with a grasp target are ignored).
  std::vector<std::string> ee_links() const;

  void validate() const;
};

/// Wraps SDF construction for a scene: grid over every collision geom except
/// the excluded links. Exactness/conservativeness contract in sdf.hpp.
SdfGrid build_sdf(const SceneModel& scene,
                  const std::vector<std::string>& exclude_links,
                  double cell_size);

}  // namespace taskgen
