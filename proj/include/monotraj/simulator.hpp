#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "monotraj/camera.hpp"
#include "monotraj/reconstruction.hpp"
#include "monotraj/rotation2d.hpp"
#include "monotraj/types.hpp"

namespace monotraj {

enum class MotionKind { LinearAxis, Linear3d, Nonlinear, NonlinearRotating };

std::string to_string(MotionKind kind);
MotionKind motion_kind_from_string(const std::string& s);

/// Linear kinds interpolate start->end at constant velocity. Nonlinear kinds
/// follow a Catmull-Rom cubic through control_points, reparameterized with a
/// sinusoidal speed profile so per-frame displacement is non-constant.
/// Rotating kinds accumulate yaw/pitch/roll at the given per-frame rates.
struct MotionSpec {
  MotionKind kind = MotionKind::Linear3d;
  char axis = 'x';  // LinearAxis only
  Vec3 start{};
  Vec3 end{};
  std::vector<Vec3> control_points;  // nonlinear kinds, >= 2
  double yaw_rate = 0.0;    // rad/frame, about the vertical (camera y)
  double pitch_rate = 0.0;  // rad/frame, about camera x
  double roll_rate = 0.0;   // rad/frame, about the optical axis (in-image)
  int frames = 0;
};

struct DronePose {
  int frame = 0;
  Vec3 position;  // camera coordinates, mm
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

struct ScenarioDrone {
  DroneClass cls;
  MotionSpec motion;
};

struct ScenarioConfig {
  std::string name;
  CameraIntrinsics intrinsics;
  ImageSize image_size{640, 480};
  int fps = 30;  // metadata only; all computation is frame-indexed
  std::vector<ScenarioDrone> drones;
  std::uint64_t rng_seed = 0;
};

struct RenderedDrone {
  ForegroundMask mask;
  BoundingBox box;  // tight box of the mask pixels; meaningful iff visible
  bool visible = false;
};

struct RenderedFrame {
  int frame = 0;
  std::vector<RenderedDrone> drones;
};

// Throws InvalidSpec on frames < 2, fewer than 2 control points for the
// nonlinear kinds, or a linear-axis spec whose endpoints differ off-axis.
std::vector<DronePose> generate_poses(const MotionSpec& spec);

/// Projects the drone body as an oriented cuboid (width x depth x height,
/// width along body-x, height along body-y, depth along the optical axis at
/// zero rotation; rotation order Ry(yaw)*Rx(pitch)*Rz(roll)). The mask is the
/// filled convex hull of the 8 projected corners, rasterized at integer pixel
/// centers with boundary pixels counting as foreground. visible is false when
/// any corner is at non-positive depth or the hull misses the image.
RenderedDrone render_drone(const CameraIntrinsics& intrinsics,
                           ImageSize image_size, const DronePose& pose,
                           const DroneSpec& spec);

// All drones of one frame. Poses indexed per drone, same order as config.
RenderedFrame render_frame(const ScenarioConfig& config,
                           const std::vector<std::vector<DronePose>>& poses,
                           int frame, const SpecDatabase& specs);

/// Writes camera.json, config.json, gt_boxes.csv, gt_trajectory.csv and
/// masks/frame{F}_id{I}.pgm under out_dir. Byte-deterministic for a given
/// config. Throws IoFailure with path context.
void generate_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir,
                       const SpecDatabase& specs = default_spec_database());

const std::vector<std::string>& builtin_scenario_names();

// Throws InvalidSpec on unknown name.
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace monotraj
