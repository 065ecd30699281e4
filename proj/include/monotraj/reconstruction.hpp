#pragma once

#include <map>
#include <vector>

#include "monotraj/camera.hpp"
#include "monotraj/rotation2d.hpp"
#include "monotraj/tracking.hpp"
#include "monotraj/types.hpp"

namespace monotraj {

/// Physical dimensions in millimeters. The width is the longest dimension;
/// metric scale recovery relies on that.
struct DroneSpec {
  DroneClass cls;
  double width_mm = 0.0;
  double depth_mm = 0.0;
  double height_mm = 0.0;

  void validate() const;  // throws InvalidSpec
};

class SpecDatabase {
 public:
  void add(DroneSpec spec);
  bool contains(const DroneClass& cls) const;
  // Throws UnknownClass.
  const DroneSpec& lookup(const DroneClass& cls) const;
  std::vector<DroneClass> classes() const;

 private:
  std::map<DroneClass, DroneSpec> specs_;
};

// The four builtin drone models.
SpecDatabase default_spec_database();

struct TrajectoryPoint3D {
  int frame = 0;
  Vec3 position;           // camera coordinates, mm
  double distance_mm = 0;  // == position.norm()
  double theta_rad = 0;    // endpoint-ray angle the distance was derived from
};

struct Trajectory3D {
  int track_id = 0;
  DroneClass cls;
  std::vector<TrajectoryPoint3D> points;
};

// D = width_mm / (2 tan(theta/2)) with theta the angle between the endpoint
// rays. Exact when the width chord is perpendicular to the viewpoint ray and
// bisected by it. Throws DegenerateAngle when theta <= 1e-9.
double drone_distance(const CameraRay& v1, const CameraRay& v2,
                      double width_mm);

// Places the drone center at distance D along the normalized mean of the two
// endpoint rays. The returned point has frame == 0; callers stamp it.
TrajectoryPoint3D drone_position(const CameraRay& v1, const CameraRay& v2,
                                 double width_mm);

// Per-frame segment endpoints are back-projected and converted to positions.
// Frames missing from `segments`, or whose segment yields a degenerate angle,
// are retried with the width baseline of the track box; frames that still
// fail are omitted. Throws UnknownClass when the track class is not in specs.
Trajectory3D reconstruct_track(const Track& track,
                               const std::map<int, PrincipalSegment>& segments,
                               const CameraIntrinsics& intrinsics,
                               const SpecDatabase& specs);

// Centered moving average over position components (and theta); near the
// sequence ends the window is truncated to the available span, so the output
// has the same length as the input. distance_mm is recomputed as the norm of
// the averaged position. window must be odd and >= 1; window == 1 is the
// identity.
Trajectory3D smooth(const Trajectory3D& traj, int window);

}  // namespace monotraj
