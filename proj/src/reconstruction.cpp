#include "monotraj/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "monotraj/errors.hpp"

namespace monotraj {

void DroneSpec::validate() const {
  if (!(width_mm > 0.0) || !(depth_mm > 0.0) || !(height_mm > 0.0))
    throw InvalidSpec("drone spec '" + cls + "': dimensions must be positive");
  if (width_mm < depth_mm || width_mm < height_mm)
    throw InvalidSpec("drone spec '" + cls +
                      "': width must be the longest dimension");
}

void SpecDatabase::add(DroneSpec spec) {
  spec.validate();
  specs_[spec.cls] = std::move(spec);
}

bool SpecDatabase::contains(const DroneClass& cls) const {
  return specs_.count(cls) != 0;
}

const DroneSpec& SpecDatabase::lookup(const DroneClass& cls) const {
  const auto it = specs_.find(cls);
  if (it == specs_.end())
    throw UnknownClass("no spec for drone class '" + cls + "'");
  return it->second;
}

std::vector<DroneClass> SpecDatabase::classes() const {
  std::vector<DroneClass> out;
  out.reserve(specs_.size());
  for (const auto& [cls, spec] : specs_) out.push_back(cls);
  return out;
}

SpecDatabase default_spec_database() {
  SpecDatabase db;
  db.add({"Air2S", 253.0, 183.0, 77.0});
  db.add({"Mavic3", 347.5, 283.0, 107.7});
  db.add({"Mini3", 245.0, 171.0, 62.0});
  db.add({"Tello", 176.3, 98.0, 41.0});
  return db;
}

double drone_distance(const CameraRay& v1, const CameraRay& v2,
                      double width_mm) {
  if (!(width_mm > 0.0))
    throw InvalidSpec("drone_distance: width must be positive");
  const double theta = ray_angle(v1, v2);
  if (theta <= 1e-9)
    throw DegenerateAngle("drone_distance: segment collapsed, angle ~ 0");
  return width_mm / (2.0 * std::tan(theta / 2.0));
}

TrajectoryPoint3D drone_position(const CameraRay& v1, const CameraRay& v2,
                                 double width_mm) {
  const double distance = drone_distance(v1, v2, width_mm);
  const Vec3 viewpoint = (v1.direction + v2.direction) * 0.5;
  const double n = viewpoint.norm();
  if (n < 1e-12)
    throw DegenerateAngle("drone_position: viewpoint vector is zero");
  TrajectoryPoint3D p;
  p.position = viewpoint * (distance / n);
  p.distance_mm = distance;
  p.theta_rad = ray_angle(v1, v2);
  return p;
}

Trajectory3D reconstruct_track(const Track& track,
                               const std::map<int, PrincipalSegment>& segments,
                               const CameraIntrinsics& intrinsics,
                               const SpecDatabase& specs) {
  const DroneSpec& spec = specs.lookup(track.cls);

  const auto position_from = [&](const PrincipalSegment& seg) {
    return drone_position(backproject(intrinsics, seg.p1),
                          backproject(intrinsics, seg.p2), spec.width_mm);
  };

  Trajectory3D traj;
  traj.track_id = track.id;
  traj.cls = track.cls;
  for (const TrackState& state : track.states) {
    const auto it = segments.find(state.frame);
    TrajectoryPoint3D point;
    bool ok = false;
    if (it != segments.end()) {
      try {
        point = position_from(it->second);
        ok = true;
      } catch (const DegenerateAngle&) {
      }
    }
    if (!ok) {
      // Fall back to the box width so isotropic or missing masks do not
      // leave gaps in the trajectory.
      try {
        point = position_from(baseline_segment(state.box,
                                               SegmentStrategy::Width));
        ok = true;
      } catch (const DegenerateAngle&) {
      }
    }
    if (!ok) continue;
    point.frame = state.frame;
    traj.points.push_back(point);
  }
  return traj;
}

Trajectory3D smooth(const Trajectory3D& traj, int window) {
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("smooth: window must be odd and >= 1");
  if (window == 1) return traj;

  const int n = static_cast<int>(traj.points.size());
  const int half = (window - 1) / 2;
  Trajectory3D out;
  out.track_id = traj.track_id;
  out.cls = traj.cls;
  out.points.resize(traj.points.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    Vec3 sum{};
    double theta_sum = 0.0;
    for (int j = lo; j <= hi; ++j) {
      sum = sum + traj.points[j].position;
      theta_sum += traj.points[j].theta_rad;
    }
    const double count = hi - lo + 1;
    TrajectoryPoint3D& p = out.points[i];
    p.frame = traj.points[i].frame;
    p.position = sum / count;
    p.distance_mm = p.position.norm();
    p.theta_rad = theta_sum / count;
  }
  return out;
}

}  // namespace monotraj
