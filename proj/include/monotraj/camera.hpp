#pragma once

#include "monotraj/geometry.hpp"

namespace monotraj {

/// Pinhole intrinsics in pixels. The assembled matrix is
///   [fx skew cx]
///   [ 0  fy  cy]
///   [ 0   0   1]
/// and is invertible whenever fx > 0 and fy > 0.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double skew = 0.0;

  Mat3 matrix() const;
  Mat3 inverse_matrix() const;  // closed-form upper-triangular inverse
  void validate() const;        // throws InvalidSpec
};

/// World-to-camera transform: p_camera = rotation * p_world + translation.
/// The camera looks down +Z; image x points right, image y points down.
struct CameraExtrinsics {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  // Checks that rotation is orthonormal with determinant +1.
  void validate(double tol = 1e-9) const;  // throws InvalidSpec
};

struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
};

/// Unnormalized direction from the camera origin, camera coordinates.
struct CameraRay {
  Vec3 direction;
};

Vec3 world_to_camera(const CameraExtrinsics& extrinsics, const Vec3& p_world);

// Throws NonPositiveDepth when p_camera.z <= 0.
ImagePoint project(const CameraIntrinsics& intrinsics, const Vec3& p_camera);

// Returns K^-1 * (u, v, 1); any positive multiple projects back onto p.
CameraRay backproject(const CameraIntrinsics& intrinsics, const ImagePoint& p);

// Angle in [0, pi]; cosine clamped to [-1, 1] before arccos so that
// near-parallel rays do not produce NaN. Throws ZeroVector when either
// ray's norm is below 1e-12.
double ray_angle(const CameraRay& a, const CameraRay& b);

}  // namespace monotraj
