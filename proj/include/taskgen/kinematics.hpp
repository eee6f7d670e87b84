#pragma once

#include <optional>
#include <string>
#include <vector>

#include "taskgen/model.hpp"
#include "taskgen/rng.hpp"
#include "taskgen/types.hpp"

namespace taskgen {

/// One collision body carried by the chain: a geometry rigidly attached to
/// the frame after actuated joint `joint_index` (-1 for the root frame) by
/// `fixed_offset`.
struct ChainBody {
  std::string link;
  CollisionGeom geom;
  int joint_index = -1;
  Transform fixed_offset = Transform::Identity();
  bool is_attached_object = false;
};

struct ChainJoint {
  std::string name;
  JointKind kind = JointKind::Revolute;
  bool translational = false;   // planar-virtual x/y and prismatic move linearly
  Vector3 axis = Vector3::UnitZ();
  Transform origin = Transform::Identity();  // frame of joint i in frame i-1
  double lower = 0.0;
  double upper = 0.0;
};

/// Serial chain of the unified system: three planar base joints, the arm
/// joints, and the bodies of every robot link (plus the grasped object when
/// attached) expressed relative to the actuated joints.
struct VkcChain {
  std::vector<ChainJoint> joints;
  std::vector<ChainBody> bodies;
  Transform ee_offset = Transform::Identity();  // ee frame after last joint
  int ee_joint_index = -1;
  std::vector<std::string> ee_link_names;   // gripper bodies (grasp-exempt)
  std::optional<Transform> grasp_transform; // ee -> object, when attached
  std::string attached_link;

  int dof() const { return int(joints.size()); }

  VectorX lower_limits() const;
  VectorX upper_limits() const;
  VectorX clamp(const VectorX& q) const;
  bool within_limits(const VectorX& q, double tol = 1e-9) const;

  /// True for parent/child body pairs (their geoms may touch by design).
  bool adjacent_bodies(int body_a, int body_b) const;
};

/// Builds the unified chain. When `attached_link` is given, that link's
/// collision geoms (taken from the scene) follow the end-effector through
/// `grasp_transform` (ee frame -> object frame).
VkcChain assemble_vkc(const RobotModel& robot);
VkcChain assemble_vkc(const RobotModel& robot, const SceneModel& scene,
                      const std::string& attached_link,
                      const Transform& grasp_transform);

/// World poses of every joint frame (post-motion) for configuration q.
/// poses[i] maps frame of joint i to world.
std::vector<Transform> chain_frames(const VkcChain& chain, const VectorX& q);

/// End-effector world pose.
Transform forward_kinematics(const VkcChain& chain, const VectorX& q);

/// World pose of chain body `body_index`.
Transform body_pose(const VkcChain& chain, const std::vector<Transform>& frames,
                    int body_index);

/// Geometric Jacobian (6 x dof: linear on top, angular below) of a frame
/// rigidly attached after `joint_index` at world point `p`.
MatrixX point_jacobian(const VkcChain& chain, const std::vector<Transform>& frames,
                       int joint_index, const Vector3& p);

/// Geometric Jacobian of the end-effector frame.
MatrixX jacobian(const VkcChain& chain, const VectorX& q);

struct IkOptions {
  int max_iterations = 150;
  int restarts = 20;
  double position_tol = 1e-4;  // solve tighter than callers require
  double rotation_tol = 1e-3;
  double damping = 1e-3;
};

/// Damped-least-squares IK with seeded random restarts. Returns the solution
/// configuration or nullopt; always within joint limits.
std::optional<VectorX> solve_ik(const VkcChain& chain, const Transform& target,
                                const VectorX& q_init, Rng& rng,
                                const IkOptions& opts = {});

}  // namespace taskgen
