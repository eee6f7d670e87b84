#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>
#include <vector>

namespace taskgen {

using Vector2 = Eigen::Vector2d;
using Vector3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using VectorX = Eigen::VectorXd;
using Matrix3 = Eigen::Matrix3d;
using MatrixX = Eigen::MatrixXd;
using Quaternion = Eigen::Quaterniond;

/// Rigid transform carrier. Rotations constructed from quaternions are
/// normalized to unit norm; see make_pose().
using Transform = Eigen::Isometry3d;

/// SE(2) pose of the mobile base: x, y in meters, theta in radians.
struct PlanarBasePose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Transform to_transform() const {
    Transform t = Transform::Identity();
    t.translation() = Vector3(x, y, 0.0);
    t.linear() = Eigen::AngleAxisd(theta, Vector3::UnitZ()).toRotationMatrix();
    return t;
  }
};

enum class ErrorCode {
  Parse,        // malformed input text
  Structure,    // e.g. cyclic joint graph
  Validation,   // model violates an invariant
  Domain,       // arguments outside an operation's domain
  NoSupport,    // no supporting plane satisfies the constraints
  Saturation,   // rejection sampling exceeded its attempt budget
  NoGrasp,      // no grasp candidate can be generated
  NoPlacement,  // no placement candidate can be generated
  Exhausted,    // candidate set or check budget exhausted
  NoSeed,       // planner could not seed the trajectory (IK failure)
  Io,           // file/stream failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Structure: return "structure";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::NoSupport: return "no-support";
    case ErrorCode::Saturation: return "saturation";
    case ErrorCode::NoGrasp: return "no-grasp";
    case ErrorCode::NoPlacement: return "no-placement";
    case ErrorCode::Exhausted: return "exhausted";
    case ErrorCode::NoSeed: return "no-seed";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Builds a rigid transform from a quaternion (w,x,y,z) and a translation.
/// The quaternion must be within 1e-9 of unit norm.
inline Transform make_pose(const Quaternion& q, const Vector3& t) {
  if (std::abs(q.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::Validation, "quaternion is not unit norm");
  }
  Transform pose = Transform::Identity();
  pose.linear() = q.normalized().toRotationMatrix();
  pose.translation() = t;
  return pose;
}

/// Geodesic angle between two rotations in [0, pi].
inline double rotation_angle(const Matrix3& a, const Matrix3& b) {
  const double c = ((a.transpose() * b).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Rotation error as an angle-axis 3-vector (log map of b * a^-1).
inline Vector3 rotation_error(const Matrix3& target, const Matrix3& actual) {
  Eigen::AngleAxisd aa(target * actual.transpose());
  return aa.angle() * aa.axis();
}

}  // namespace taskgen
