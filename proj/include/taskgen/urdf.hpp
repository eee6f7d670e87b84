#pragma once

#include <string>

#include "taskgen/model.hpp"

namespace taskgen {

/// Parses a URDF-subset scene description. Supported tags: robot, link,
/// joint, origin, axis, limit, collision, visual, inertial, geometry with
/// box/cylinder/mesh (mesh as an inline convex vertex list). Room and
/// display labels ride as `room`/`label` attributes on links. Unsupported
/// tags are skipped and recorded in SceneModel::warnings. Angles are radians
/// and lengths meters; unit annotations naming degrees are rejected.
SceneModel parse_scene(const std::string& xml_text);

/// Parses a robot description: the same subset plus a `group` attribute on
/// joints ("base" for the three planar-virtual joints, "arm" for the
/// actuated chain), an `ee_link` attribute on the robot element, and a
/// `<gripper aperture_min aperture_max>` element.
RobotModel parse_robot(const std::string& xml_text);

std::string read_text_file(const std::string& path);

}  // namespace taskgen
