#include "taskgen/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace taskgen {

namespace {

Transform joint_motion(const ChainJoint& j, double q) {
  Transform t = Transform::Identity();
  if (j.translational) {
    t.translation() = j.axis * q;
  } else {
    t.linear() = Eigen::AngleAxisd(q, j.axis).toRotationMatrix();
  }
  return t;
}

bool is_translational(const Joint& j) {
  if (j.kind == JointKind::Prismatic) return true;
  if (j.kind == JointKind::PlanarVirtual) {
    // Planar-virtual x/y translate, theta rotates.
    return !j.axis.isApprox(Vector3::UnitZ(), 1e-9);
  }
  return false;
}

VkcChain assemble(const RobotModel& robot, const SceneModel* scene,
                  const std::string& attached_link,
                  const Transform& grasp_transform) {
  robot.validate();

  std::vector<std::string> serial = robot.base_joints;
  serial.insert(serial.end(), robot.arm_chain.begin(), robot.arm_chain.end());
  std::map<std::string, int> serial_index;
  for (size_t i = 0; i < serial.size(); ++i) serial_index[serial[i]] = int(i);

  VkcChain chain;
  chain.joints.resize(serial.size());
  chain.ee_link_names = robot.ee_links();

  // Walk the robot tree accumulating fixed offsets between actuated joints.
  struct State {
    int joint_index;
    Transform offset;  // from frame of joint_index to the link frame
  };
  std::map<std::string, State> states;
  states[robot.root] = {-1, Transform::Identity()};
  std::vector<std::string> frontier = {robot.root};
  int ee_joint = -1;
  Transform ee_offset = Transform::Identity();
  bool ee_found = false;

  while (!frontier.empty()) {
    const std::string link = frontier.back();
    frontier.pop_back();
    const State st = states.at(link);
    if (link == robot.ee_frame) {
      ee_joint = st.joint_index;
      ee_offset = st.offset;
      ee_found = true;
    }
    for (const auto& j : robot.joints) {
      if (j.parent != link) continue;
      auto it = serial_index.find(j.name);
      if (it != serial_index.end()) {
        const int idx = it->second;
        if (idx != st.joint_index + 1) {
          throw Error(ErrorCode::Structure,
                      "actuated joints do not form a serial chain at " + j.name);
        }
        ChainJoint cj;
        cj.name = j.name;
        cj.kind = j.kind;
        cj.translational = is_translational(j);
        cj.axis = j.axis;
        cj.origin = st.offset * j.origin;
        cj.lower = j.lower;
        cj.upper = j.upper;
        chain.joints[idx] = cj;
        states[j.child] = {idx, Transform::Identity()};
      } else {
        if (!j.is_fixed()) {
          throw Error(ErrorCode::Structure,
                      "actuated joint outside the base/arm chain: " + j.name);
        }
        states[j.child] = {st.joint_index, st.offset * j.origin};
      }
      frontier.push_back(j.child);
    }
  }
  if (!ee_found) {
    throw Error(ErrorCode::Validation,
                "end-effector frame unreachable: " + robot.ee_frame);
  }
  chain.ee_joint_index = ee_joint;
  chain.ee_offset = ee_offset;

  for (const auto& link : robot.links) {
    const State st = states.at(link.name);
    for (const auto& g : link.collision_geoms) {
      ChainBody body;
      body.link = link.name;
      body.geom = g;
      body.joint_index = st.joint_index;
      body.fixed_offset = st.offset;
      chain.bodies.push_back(body);
    }
  }

  if (!attached_link.empty()) {
    if (!scene) {
      throw Error(ErrorCode::Domain, "attached object requires a scene");
    }
    const Link* obj = scene->find_link(attached_link);
    if (!obj) {
      throw Error(ErrorCode::Domain, "attached link not in scene: " + attached_link);
    }
    chain.grasp_transform = grasp_transform;
    chain.attached_link = attached_link;
    for (const auto& g : obj->collision_geoms) {
      ChainBody body;
      body.link = attached_link;
      body.geom = g;
      body.joint_index = chain.ee_joint_index;
      body.fixed_offset = ee_offset * grasp_transform;
      body.is_attached_object = true;
      chain.bodies.push_back(body);
    }
  }
  return chain;
}

}  // namespace

VectorX VkcChain::lower_limits() const {
  VectorX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints[i].lower;
  return v;
}

VectorX VkcChain::upper_limits() const {
  VectorX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints[i].upper;
  return v;
}

VectorX VkcChain::clamp(const VectorX& q) const {
  return q.cwiseMax(lower_limits()).cwiseMin(upper_limits());
}

bool VkcChain::within_limits(const VectorX& q, double tol) const {
  for (int i = 0; i < dof(); ++i) {
    if (q[i] < joints[i].lower - tol || q[i] > joints[i].upper + tol) {
      return false;
    }
  }
  return true;
}

bool VkcChain::adjacent_bodies(int body_a, int body_b) const {
  // Bodies rigid to the same actuated joint cannot move relative to each
  // other; neighbours across one joint are allowed to touch by design.
  const int ja = bodies[body_a].joint_index;
  const int jb = bodies[body_b].joint_index;
  return std::abs(ja - jb) <= 1;
}

VkcChain assemble_vkc(const RobotModel& robot) {
  return assemble(robot, nullptr, "", Transform::Identity());
}

VkcChain assemble_vkc(const RobotModel& robot, const SceneModel& scene,
                      const std::string& attached_link,
                      const Transform& grasp_transform) {
  return assemble(robot, &scene, attached_link, grasp_transform);
}

std::vector<Transform> chain_frames(const VkcChain& chain, const VectorX& q) {
  if (q.size() != chain.dof()) {
    throw Error(ErrorCode::Domain,
                "configuration size " + std::to_string(q.size()) +
                    " does not match chain dof " + std::to_string(chain.dof()));
  }
  std::vector<Transform> frames(chain.dof());
  Transform acc = Transform::Identity();
  for (int i = 0; i < chain.dof(); ++i) {
    acc = acc * chain.joints[i].origin * joint_motion(chain.joints[i], q[i]);
    frames[i] = acc;
  }
  return frames;
}

Transform forward_kinematics(const VkcChain& chain, const VectorX& q) {
  const auto frames = chain_frames(chain, q);
  const Transform base = chain.ee_joint_index >= 0
                             ? frames[chain.ee_joint_index]
                             : Transform::Identity();
  return base * chain.ee_offset;
}

Transform body_pose(const VkcChain& chain, const std::vector<Transform>& frames,
                    int body_index) {
  const ChainBody& b = chain.bodies[body_index];
  const Transform base =
      b.joint_index >= 0 ? frames[b.joint_index] : Transform::Identity();
  return base * b.fixed_offset;
}

MatrixX point_jacobian(const VkcChain& chain, const std::vector<Transform>& frames,
                       int joint_index, const Vector3& p) {
  MatrixX jac = MatrixX::Zero(6, chain.dof());
  for (int k = 0; k <= joint_index && k < chain.dof(); ++k) {
    const Vector3 axis_w = frames[k].linear() * chain.joints[k].axis;
    if (chain.joints[k].translational) {
      jac.block<3, 1>(0, k) = axis_w;
    } else {
      const Vector3 pk = frames[k].translation();
      jac.block<3, 1>(0, k) = axis_w.cross(p - pk);
      jac.block<3, 1>(3, k) = axis_w;
    }
  }
  return jac;
}

MatrixX jacobian(const VkcChain& chain, const VectorX& q) {
  const auto frames = chain_frames(chain, q);
  const Transform ee = (chain.ee_joint_index >= 0
                            ? frames[chain.ee_joint_index]
                            : Transform::Identity()) *
                       chain.ee_offset;
  return point_jacobian(chain, frames, chain.ee_joint_index, ee.translation());
}

std::optional<VectorX> solve_ik(const VkcChain& chain, const Transform& target,
                                const VectorX& q_init, Rng& rng,
                                const IkOptions& opts) {
  const VectorX lo = chain.lower_limits();
  const VectorX hi = chain.upper_limits();

  auto attempt = [&](VectorX q) -> std::optional<VectorX> {
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Transform ee = forward_kinematics(chain, q);
      Vector6 err;
      err.head<3>() = target.translation() - ee.translation();
      err.tail<3>() = rotation_error(target.linear(), ee.linear());
      if (err.head<3>().norm() <= opts.position_tol &&
          err.tail<3>().norm() <= opts.rotation_tol) {
        return q;
      }
      const MatrixX jac = jacobian(chain, q);
      const MatrixX jjt = jac * jac.transpose() +
                          opts.damping * opts.damping * MatrixX::Identity(6, 6);
      VectorX dq = jac.transpose() * jjt.ldlt().solve(err);
      const double step = dq.norm();
      if (step < 1e-12) break;  // stalled
      if (step > 0.5) dq *= 0.5 / step;
      q = chain.clamp(q + dq);
    }
    return std::nullopt;
  };

  if (auto sol = attempt(q_init)) return sol;

  for (int r = 1; r < opts.restarts; ++r) {
    VectorX q(chain.dof());
    for (int i = 0; i < chain.dof(); ++i) {
      // Base translations restart near the target; everything else anywhere
      // within its limits.
      if (i < 2 && chain.joints[i].translational) {
        const double center = target.translation()[i];
        q[i] = std::clamp(center + rng.uniform(-1.5, 1.5), lo[i], hi[i]);
      } else {
        q[i] = rng.uniform(lo[i], hi[i]);
      }
    }
    if (auto sol = attempt(q)) return sol;
  }
  return std::nullopt;
}

}  // namespace taskgen
