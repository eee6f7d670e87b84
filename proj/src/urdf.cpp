#include "taskgen/urdf.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace taskgen {

namespace {

namespace pt = boost::property_tree;

pt::ptree parse_xml(const std::string& xml_text) {
  std::istringstream in(xml_text);
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::Parse, "XML parse error at line " +
                                      std::to_string(e.line()) + ": " +
                                      e.message());
  }
  return tree;
}

std::string attr(const pt::ptree& node, const std::string& name,
                 const std::string& fallback = "") {
  return node.get<std::string>("<xmlattr>." + name, fallback);
}

bool has_attr(const pt::ptree& node, const std::string& name) {
  return node.get_optional<std::string>("<xmlattr>." + name).has_value();
}

void reject_degree_units(const pt::ptree& node, const std::string& context) {
  const auto units = node.get_optional<std::string>("<xmlattr>.units");
  if (units && *units != "m" && *units != "rad" && *units != "si") {
    throw Error(ErrorCode::Validation,
                context + ": unit '" + *units +
                    "' rejected; angles are radians, lengths meters");
  }
}

std::vector<double> parse_numbers(const std::string& text,
                                  const std::string& context) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) {
    throw Error(ErrorCode::Parse, context + ": cannot parse '" + text + "'");
  }
  return out;
}


double to_double(const std::string& text, const std::string& context) {
  try {
    size_t idx = 0;
    const double v = std::stod(text, &idx);
    if (idx != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, context + ": cannot parse number '" + text + "'");
  }
}

Vector3 parse_vec3(const std::string& text, const std::string& context) {
  const auto v = parse_numbers(text, context);
  if (v.size() != 3) {
    throw Error(ErrorCode::Parse, context + ": expected 3 numbers, got " +
                                      std::to_string(v.size()));
  }
  return Vector3(v[0], v[1], v[2]);
}

Transform parse_origin(const pt::ptree& node, const std::string& context) {
  Transform t = Transform::Identity();
  const auto origin = node.get_child_optional("origin");
  if (!origin) return t;
  reject_degree_units(*origin, context + "/origin");
  if (has_attr(*origin, "xyz")) {
    t.translation() = parse_vec3(attr(*origin, "xyz"), context + "/origin xyz");
  }
  if (has_attr(*origin, "rpy")) {
    const Vector3 rpy = parse_vec3(attr(*origin, "rpy"), context + "/origin rpy");
    t.linear() = (Eigen::AngleAxisd(rpy.z(), Vector3::UnitZ()) *
                  Eigen::AngleAxisd(rpy.y(), Vector3::UnitY()) *
                  Eigen::AngleAxisd(rpy.x(), Vector3::UnitX()))
                     .toRotationMatrix();
  }
  return t;
}

CollisionGeom parse_geometry(const pt::ptree& geom_node, const Transform& pose,
                             const std::string& context,
                             std::vector<std::string>& warnings) {
  for (const auto& [tag, child] : geom_node) {
    if (tag == "<xmlattr>") continue;
    if (tag == "box") {
      const Vector3 size = parse_vec3(attr(child, "size"), context + "/box size");
      return CollisionGeom::make_box(size, pose);
    }
    if (tag == "cylinder") {
      const double r = to_double(attr(child, "radius", "0"), context + "/cylinder radius");
      const double l = to_double(attr(child, "length", "0"), context + "/cylinder length");
      return CollisionGeom::make_cylinder(r, l, pose);
    }
    if (tag == "mesh") {
      if (!has_attr(child, "vertices")) {
        throw Error(ErrorCode::Parse,
                    context + "/mesh: only inline convex vertex lists are "
                              "supported (vertices attribute)");
      }
      const auto nums = parse_numbers(attr(child, "vertices"),
                                      context + "/mesh vertices");
      if (nums.size() % 3 != 0 || nums.size() < 12) {
        throw Error(ErrorCode::Parse,
                    context + "/mesh: vertex list must be 3N numbers, N >= 4");
      }
      std::vector<Vector3> verts;
      for (size_t i = 0; i + 2 < nums.size(); i += 3) {
        verts.emplace_back(nums[i], nums[i + 1], nums[i + 2]);
      }
      return CollisionGeom::make_mesh(std::move(verts), pose);
    }
    warnings.push_back(context + ": unsupported geometry tag '" + tag + "'");
  }
  throw Error(ErrorCode::Parse, context + ": geometry element has no shape");
}

Link parse_link(const pt::ptree& node, std::vector<std::string>& warnings) {
  Link link;
  link.name = attr(node, "name");
  if (link.name.empty()) {
    throw Error(ErrorCode::Parse, "link without a name");
  }
  const std::string ctx = "link " + link.name;
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>") continue;
    if (tag == "collision" || tag == "visual") {
      const Transform pose = parse_origin(child, ctx + "/" + tag);
      const auto geom = child.get_child_optional("geometry");
      if (!geom) {
        throw Error(ErrorCode::Parse, ctx + "/" + tag + ": missing geometry");
      }
      auto parsed = parse_geometry(*geom, pose, ctx + "/" + tag, warnings);
      if (tag == "collision") link.collision_geoms.push_back(parsed);
      else link.visual_geoms.push_back(parsed);
    } else if (tag == "inertial") {
      const auto mass = child.get_child_optional("mass");
      if (mass) link.mass = to_double(attr(*mass, "value", "0"), ctx + "/inertial mass");
    } else {
      warnings.push_back(ctx + ": unsupported tag '" + tag + "' ignored");
    }
  }
  return link;
}

JointKind parse_joint_kind(const std::string& type, const std::string& name) {
  if (type == "revolute" || type == "continuous") return JointKind::Revolute;
  if (type == "prismatic") return JointKind::Prismatic;
  if (type == "fixed") return JointKind::Fixed;
  if (type == "planar-virtual") return JointKind::PlanarVirtual;
  throw Error(ErrorCode::Parse,
              "joint " + name + ": unsupported type '" + type + "'");
}

Joint parse_joint(const pt::ptree& node, std::vector<std::string>& warnings) {
  Joint joint;
  joint.name = attr(node, "name");
  if (joint.name.empty()) {
    throw Error(ErrorCode::Parse, "joint without a name");
  }
  const std::string ctx = "joint " + joint.name;
  joint.kind = parse_joint_kind(attr(node, "type", "fixed"), joint.name);
  joint.origin = parse_origin(node, ctx);

  const auto parent = node.get_child_optional("parent");
  const auto child = node.get_child_optional("child");
  if (!parent || !child) {
    throw Error(ErrorCode::Parse, ctx + ": missing parent or child element");
  }
  joint.parent = attr(*parent, "link");
  joint.child = attr(*child, "link");

  if (const auto axis = node.get_child_optional("axis")) {
    joint.axis = parse_vec3(attr(*axis, "xyz"), ctx + "/axis");
    if (!joint.is_fixed()) {
      const double n = joint.axis.norm();
      if (n < 1e-12) {
        throw Error(ErrorCode::Validation, ctx + ": zero joint axis");
      }
      joint.axis /= n;
    }
  }

  if (const auto limit = node.get_child_optional("limit")) {
    reject_degree_units(*limit, ctx + "/limit");
    if (!has_attr(*limit, "lower") || !has_attr(*limit, "upper")) {
      throw Error(ErrorCode::Validation,
                  ctx + ": limit element needs lower and upper");
    }
    joint.lower = to_double(attr(*limit, "lower"), ctx + "/limit lower");
    joint.upper = to_double(attr(*limit, "upper"), ctx + "/limit upper");
  } else if (!joint.is_fixed()) {
    throw Error(ErrorCode::Validation,
                ctx + ": non-fixed joint is missing limits");
  }

  for (const auto& [tag, sub] : node) {
    if (tag == "<xmlattr>" || tag == "origin" || tag == "parent" ||
        tag == "child" || tag == "axis" || tag == "limit") {
      continue;
    }
    warnings.push_back(ctx + ": unsupported tag '" + tag + "' ignored");
  }
  return joint;
}

std::string find_root(const std::vector<Link>& links,
                      const std::vector<Joint>& joints) {
  std::set<std::string> children;
  for (const auto& j : joints) children.insert(j.child);
  std::vector<std::string> roots;
  for (const auto& l : links) {
    if (!children.count(l.name)) roots.push_back(l.name);
  }
  if (roots.size() != 1) {
    throw Error(ErrorCode::Structure,
                "expected exactly one root link, found " +
                    std::to_string(roots.size()));
  }
  return roots[0];
}

const pt::ptree& robot_element(const pt::ptree& doc) {
  const auto robot = doc.get_child_optional("robot");
  if (!robot) {
    throw Error(ErrorCode::Parse, "document has no <robot> element");
  }
  return *robot;
}

}  // namespace

SceneModel parse_scene(const std::string& xml_text) {
  const pt::ptree doc = parse_xml(xml_text);
  const pt::ptree& robot = robot_element(doc);

  SceneModel scene;
  for (const auto& [tag, node] : robot) {
    if (tag == "<xmlattr>") continue;
    if (tag == "link") {
      Link link = parse_link(node, scene.warnings);
      if (has_attr(node, "room")) {
        scene.room_labels[link.name] = attr(node, "room");
      }
      if (has_attr(node, "label")) {
        scene.display_labels[link.name] = attr(node, "label");
      }
      scene.links.push_back(std::move(link));
    } else if (tag == "joint") {
      scene.joints.push_back(parse_joint(node, scene.warnings));
    } else {
      scene.warnings.push_back("scene: unsupported tag '" + tag + "' ignored");
    }
  }
  if (scene.links.empty()) {
    throw Error(ErrorCode::Validation, "scene has no links");
  }
  scene.root = find_root(scene.links, scene.joints);
  scene.validate();
  return scene;
}

RobotModel parse_robot(const std::string& xml_text) {
  const pt::ptree doc = parse_xml(xml_text);
  const pt::ptree& robot = robot_element(doc);

  RobotModel model;
  std::vector<std::string>& warnings = model.warnings;
  std::vector<std::pair<Joint, std::string>> grouped_joints;  // joint, group

  model.ee_frame = attr(robot, "ee_link");

  for (const auto& [tag, node] : robot) {
    if (tag == "<xmlattr>") continue;
    if (tag == "link") {
      model.links.push_back(parse_link(node, warnings));
    } else if (tag == "joint") {
      grouped_joints.emplace_back(parse_joint(node, warnings),
                                  attr(node, "group"));
    } else if (tag == "gripper") {
      model.gripper_aperture.x() = to_double(attr(node, "aperture_min", "0"), "gripper aperture_min");
      model.gripper_aperture.y() = to_double(attr(node, "aperture_max", "0"), "gripper aperture_max");
    } else {
      warnings.push_back("robot: unsupported tag '" + tag + "' ignored");
    }
  }

  for (auto& [joint, group] : grouped_joints) {
    model.joints.push_back(joint);
  }
  if (model.links.empty()) {
    throw Error(ErrorCode::Validation, "robot has no links");
  }
  model.root = find_root(model.links, model.joints);

  // Base joints: planar-virtual x (axis ex), y (axis ey), theta (axis ez).
  const Joint *bx = nullptr, *by = nullptr, *btheta = nullptr;
  for (const auto& [joint, group] : grouped_joints) {
    if (joint.kind != JointKind::PlanarVirtual) continue;
    const Joint* stored = model.find_joint(joint.name);
    if (joint.axis.isApprox(Vector3::UnitX(), 1e-9)) bx = stored;
    else if (joint.axis.isApprox(Vector3::UnitY(), 1e-9)) by = stored;
    else if (joint.axis.isApprox(Vector3::UnitZ(), 1e-9)) btheta = stored;
    else {
      throw Error(ErrorCode::Validation,
                  "planar-virtual joint axis must be a world axis: " + joint.name);
    }
  }
  if (!bx || !by || !btheta) {
    throw Error(ErrorCode::Validation,
                "robot needs planar-virtual base joints for x, y and theta");
  }
  if (bx->child != by->parent || by->child != btheta->parent) {
    throw Error(ErrorCode::Structure,
                "base joints must chain x -> y -> theta");
  }
  model.base_joints = {bx->name, by->name, btheta->name};

  // Arm chain: joints tagged group="arm", ordered by tree topology starting
  // below the base.
  std::set<std::string> arm_names;
  for (const auto& [joint, group] : grouped_joints) {
    if (group == "arm") {
      if (joint.kind == JointKind::Fixed) {
        throw Error(ErrorCode::Validation,
                    "arm group contains a fixed joint: " + joint.name);
      }
      arm_names.insert(joint.name);
    }
  }
  std::vector<std::string> frontier = {btheta->child};
  while (!frontier.empty()) {
    const std::string link = frontier.back();
    frontier.pop_back();
    for (const auto& j : model.joints) {
      if (j.parent != link) continue;
      if (arm_names.count(j.name)) {
        model.arm_chain.push_back(j.name);
        arm_names.erase(j.name);
      }
      frontier.push_back(j.child);
    }
  }
  if (!arm_names.empty()) {
    throw Error(ErrorCode::Validation,
                "arm joints are not on a chain below the base");
  }

  if (model.ee_frame.empty()) {
    throw Error(ErrorCode::Validation,
                "robot element is missing the ee_link attribute");
  }
  model.validate();
  return model;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open file: " + path);
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace taskgen
