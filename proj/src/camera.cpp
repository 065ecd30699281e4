#include "monotraj/camera.hpp"

#include <algorithm>
#include <cmath>

#include "monotraj/errors.hpp"

namespace monotraj {

Mat3 CameraIntrinsics::matrix() const {
  return {{fx, skew, cx, 0, fy, cy, 0, 0, 1}};
}

Mat3 CameraIntrinsics::inverse_matrix() const {
  return {{1.0 / fx, -skew / (fx * fy), (skew * cy - cx * fy) / (fx * fy),
           0, 1.0 / fy, -cy / fy,
           0, 0, 1}};
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw InvalidSpec("camera intrinsics: fx and fy must be positive");
  if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(cx) ||
      !std::isfinite(cy) || !std::isfinite(skew))
    throw InvalidSpec("camera intrinsics: non-finite value");
}

void CameraExtrinsics::validate(double tol) const {
  const Mat3 rtr = rotation.transposed() * rotation;
  const Mat3 id = Mat3::identity();
  for (int i = 0; i < 9; ++i) {
    if (std::abs(rtr.m[i] - id.m[i]) > tol)
      throw InvalidSpec("camera extrinsics: rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > tol)
    throw InvalidSpec("camera extrinsics: rotation determinant is not +1");
}

Vec3 world_to_camera(const CameraExtrinsics& extrinsics, const Vec3& p_world) {
  return extrinsics.rotation * p_world + extrinsics.translation;
}

ImagePoint project(const CameraIntrinsics& intrinsics, const Vec3& p_camera) {
  if (!(p_camera.z > 0.0))
    throw NonPositiveDepth("project: point has non-positive depth");
  return {(intrinsics.fx * p_camera.x + intrinsics.skew * p_camera.y) /
              p_camera.z + intrinsics.cx,
          intrinsics.fy * p_camera.y / p_camera.z + intrinsics.cy};
}

CameraRay backproject(const CameraIntrinsics& intrinsics, const ImagePoint& p) {
  return {intrinsics.inverse_matrix() * Vec3{p.u, p.v, 1.0}};
}

double ray_angle(const CameraRay& a, const CameraRay& b) {
  const double na = a.direction.norm();
  const double nb = b.direction.norm();
  if (na < 1e-12 || nb < 1e-12)
    throw ZeroVector("ray_angle: ray has (near-)zero norm");
  const double c = std::clamp(a.direction.dot(b.direction) / (na * nb),
                              -1.0, 1.0);
  return std::acos(c);
}

}  // namespace monotraj
