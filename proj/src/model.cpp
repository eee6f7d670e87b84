#include "taskgen/model.hpp"

#include <algorithm>
#include <set>

namespace taskgen {

namespace {

// Shared tree validation: unique names, resolvable joints, single root,
// acyclic, full reachability.
void validate_tree(const std::vector<Link>& links,
                   const std::vector<Joint>& joints, const std::string& root) {
  std::set<std::string> names;
  for (const auto& l : links) {
    if (!names.insert(l.name).second) {
      throw Error(ErrorCode::Validation, "duplicate link name: " + l.name);
    }
  }
  std::map<std::string, int> parent_count;
  for (const auto& j : joints) {
    if (!names.count(j.parent)) {
      throw Error(ErrorCode::Validation,
                  "joint " + j.name + " parent does not exist: " + j.parent);
    }
    if (!names.count(j.child)) {
      throw Error(ErrorCode::Validation,
                  "joint " + j.name + " child does not exist: " + j.child);
    }
    if (++parent_count[j.child] > 1) {
      throw Error(ErrorCode::Structure,
                  "link has more than one parent joint: " + j.child);
    }
    if (!j.is_fixed()) {
      if (std::abs(j.axis.norm() - 1.0) > kUnitNormTol) {
        throw Error(ErrorCode::Validation,
                    "joint axis is not unit length: " + j.name);
      }
      if (j.lower > j.upper) {
        throw Error(ErrorCode::Validation,
                    "joint lower limit exceeds upper: " + j.name);
      }
    }
  }
  if (!names.count(root)) {
    throw Error(ErrorCode::Validation, "root link does not exist: " + root);
  }
  if (parent_count.count(root)) {
    throw Error(ErrorCode::Structure, "root link has a parent joint");
  }
  // Reachability from root covers all links (also rules out cycles since
  // every non-root link has exactly one parent).
  std::set<std::string> reached = {root};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& j : joints) {
      if (reached.count(j.parent) && !reached.count(j.child)) {
        reached.insert(j.child);
        grew = true;
      }
    }
  }
  if (reached.size() != names.size()) {
    throw Error(ErrorCode::Structure,
                "joint graph is not a single tree rooted at " + root);
  }
}

std::map<std::string, Transform> tree_poses(const std::vector<Joint>& joints,
                                            const std::string& root) {
  std::map<std::string, Transform> poses;
  poses[root] = Transform::Identity();
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& j : joints) {
      auto it = poses.find(j.parent);
      if (it != poses.end() && !poses.count(j.child)) {
        poses[j.child] = it->second * j.origin;  // all joints at zero
        grew = true;
      }
    }
  }
  return poses;
}

}  // namespace

const Link* SceneModel::find_link(const std::string& name) const {
  for (const auto& l : links) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

const Joint* SceneModel::parent_joint(const std::string& link) const {
  for (const auto& j : joints) {
    if (j.child == link) return &j;
  }
  return nullptr;
}

int SceneModel::link_index(const std::string& name) const {
  for (size_t i = 0; i < links.size(); ++i) {
    if (links[i].name == name) return int(i);
  }
  return -1;
}

std::map<std::string, Transform> SceneModel::link_poses() const {
  return tree_poses(joints, root);
}

Transform SceneModel::link_pose(const std::string& name) const {
  const auto poses = link_poses();
  auto it = poses.find(name);
  if (it == poses.end()) {
    throw Error(ErrorCode::Domain, "unknown link: " + name);
  }
  return it->second;
}

std::vector<PosedGeom> SceneModel::collision_geoms(
    const std::vector<std::string>& exclude_links) const {
  const auto poses = link_poses();
  std::vector<PosedGeom> out;
  for (const auto& l : links) {
    if (std::find(exclude_links.begin(), exclude_links.end(), l.name) !=
        exclude_links.end()) {
      continue;
    }
    const Transform pose = poses.at(l.name);
    for (const auto& g : l.collision_geoms) {
      out.push_back({g, pose, l.name});
    }
  }
  return out;
}

SceneModel SceneModel::with_link_pose(const std::string& link,
                                      const Transform& world_pose) const {
  const Joint* pj = parent_joint(link);
  if (!pj) {
    throw Error(ErrorCode::Domain, "cannot move the root link: " + link);
  }
  SceneModel out = *this;
  const Transform parent_world = link_pose(pj->parent);
  for (auto& j : out.joints) {
    if (j.name == pj->name) {
      j.origin = parent_world.inverse() * world_pose;
      break;
    }
  }
  return out;
}

void SceneModel::validate() const {
  validate_tree(links, joints, root);
}

const Link* RobotModel::find_link(const std::string& name) const {
  for (const auto& l : links) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

const Joint* RobotModel::find_joint(const std::string& name) const {
  for (const auto& j : joints) {
    if (j.name == name) return &j;
  }
  return nullptr;
}

std::vector<std::string> RobotModel::ee_links() const {
  std::vector<std::string> out = {ee_frame};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& j : joints) {
      if (std::find(out.begin(), out.end(), j.parent) != out.end() &&
          std::find(out.begin(), out.end(), j.child) == out.end()) {
        out.push_back(j.child);
        grew = true;
      }
    }
  }
  return out;
}

void RobotModel::validate() const {
  validate_tree(links, joints, root);
  if (base_joints.size() != 3) {
    throw Error(ErrorCode::Validation,
                "robot base must contribute exactly 3 planar-virtual joints");
  }
  for (const auto& name : base_joints) {
    const Joint* j = find_joint(name);
    if (!j || j->kind != JointKind::PlanarVirtual) {
      throw Error(ErrorCode::Validation,
                  "base joint is not planar-virtual: " + name);
    }
  }
  for (const auto& name : arm_chain) {
    const Joint* j = find_joint(name);
    if (!j) {
      throw Error(ErrorCode::Validation, "arm joint does not exist: " + name);
    }
    if (j->kind == JointKind::Fixed) {
      throw Error(ErrorCode::Validation, "arm chain contains a fixed joint: " + name);
    }
  }
  if (!find_link(ee_frame)) {
    throw Error(ErrorCode::Validation, "end-effector frame does not exist: " + ee_frame);
  }
  if (gripper_aperture.x() < 0 || gripper_aperture.y() < gripper_aperture.x()) {
    throw Error(ErrorCode::Validation, "gripper aperture range is invalid");
  }
}

SdfGrid build_sdf(const SceneModel& scene,
                  const std::vector<std::string>& exclude_links,
                  double cell_size) {
  return build_sdf_from_geoms(scene.collision_geoms(exclude_links), cell_size);
}

}  // namespace taskgen
