#include "monotraj/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "monotraj/errors.hpp"
#include "monotraj/io.hpp"

namespace monotraj {

std::string to_string(MotionKind kind) {
  switch (kind) {
    case MotionKind::LinearAxis: return "linear-axis";
    case MotionKind::Linear3d: return "linear-3d";
    case MotionKind::Nonlinear: return "nonlinear";
    case MotionKind::NonlinearRotating: return "nonlinear-rotating";
  }
  return "unknown";
}

MotionKind motion_kind_from_string(const std::string& s) {
  if (s == "linear-axis") return MotionKind::LinearAxis;
  if (s == "linear-3d") return MotionKind::Linear3d;
  if (s == "nonlinear") return MotionKind::Nonlinear;
  if (s == "nonlinear-rotating") return MotionKind::NonlinearRotating;
  throw ParseError("unknown motion kind: '" + s + "'");
}

namespace {

bool is_nonlinear(MotionKind kind) {
  return kind == MotionKind::Nonlinear ||
         kind == MotionKind::NonlinearRotating;
}

// Catmull-Rom evaluation at global parameter u in [0, 1]; endpoint tangents
// come from mirrored phantom points.
Vec3 catmull_rom(const std::vector<Vec3>& pts, double u) {
  const int n = static_cast<int>(pts.size());
  const double scaled = u * (n - 1);
  int seg = std::min(static_cast<int>(scaled), n - 2);
  const double t = scaled - seg;

  const auto at = [&](int i) -> Vec3 {
    if (i < 0) return pts[0] * 2.0 - pts[1];
    if (i >= n) return pts[n - 1] * 2.0 - pts[n - 2];
    return pts[i];
  };
  const Vec3 p0 = at(seg - 1), p1 = at(seg), p2 = at(seg + 1), p3 = at(seg + 2);

  const double t2 = t * t, t3 = t2 * t;
  return (p1 * 2.0 + (p2 - p0) * t +
          (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * t2 +
          ((p1 - p2) * 3.0 + p3 - p0) * t3) *
         0.5;
}

// Monotone time warp with sinusoidally varying rate; t in [0, 1].
double speed_profile(double t) {
  constexpr double kAmplitude = 0.35;
  return t - kAmplitude * std::sin(2.0 * std::numbers::pi * t) /
                 (2.0 * std::numbers::pi);
}

void validate_motion(const MotionSpec& spec) {
  if (spec.frames < 2) throw InvalidSpec("motion: frames must be >= 2");
  if (is_nonlinear(spec.kind)) {
    if (spec.control_points.size() < 2)
      throw InvalidSpec("motion: nonlinear kinds need >= 2 control points");
    for (const auto& p : spec.control_points)
      if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
        throw InvalidSpec("motion: non-finite control point");
  } else {
    if (!std::isfinite(spec.start.x + spec.start.y + spec.start.z) ||
        !std::isfinite(spec.end.x + spec.end.y + spec.end.z))
      throw InvalidSpec("motion: non-finite endpoint");
    if (spec.kind == MotionKind::LinearAxis) {
      const Vec3 d = spec.end - spec.start;
      const bool ok = (spec.axis == 'x' && d.y == 0.0 && d.z == 0.0) ||
                      (spec.axis == 'y' && d.x == 0.0 && d.z == 0.0) ||
                      (spec.axis == 'z' && d.x == 0.0 && d.y == 0.0);
      if (!ok)
        throw InvalidSpec("motion: linear-axis endpoints differ off-axis");
    }
  }
}

// Convex hull via Andrew's monotone chain; input size is tiny (8 corners).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) return pts;

  const auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

std::vector<DronePose> generate_poses(const MotionSpec& spec) {
  validate_motion(spec);
  std::vector<DronePose> poses;
  poses.reserve(spec.frames);
  for (int f = 0; f < spec.frames; ++f) {
    const double t = static_cast<double>(f) / (spec.frames - 1);
    DronePose pose;
    pose.frame = f;
    if (is_nonlinear(spec.kind)) {
      pose.position = catmull_rom(spec.control_points, speed_profile(t));
    } else {
      pose.position = spec.start + (spec.end - spec.start) * t;
    }
    pose.yaw = f * spec.yaw_rate;
    pose.pitch = f * spec.pitch_rate;
    pose.roll = f * spec.roll_rate;
    poses.push_back(pose);
  }
  return poses;
}

RenderedDrone render_drone(const CameraIntrinsics& intrinsics,
                           ImageSize image_size, const DronePose& pose,
                           const DroneSpec& spec) {
  RenderedDrone out;
  out.mask = ForegroundMask(image_size.width, image_size.height);
  out.visible = false;

  const Mat3 rot = rotation_y(pose.yaw) * rotation_x(pose.pitch) *
                   rotation_z(pose.roll);
  const double hw = spec.width_mm / 2.0;
  const double hh = spec.height_mm / 2.0;
  const double hd = spec.depth_mm / 2.0;

  std::vector<Vec2> projected;
  projected.reserve(8);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) {
        const Vec3 corner =
            pose.position + rot * Vec3{sx * hw, sy * hh, sz * hd};
        // A corner at or behind the camera plane cannot be rendered.
        if (corner.z <= 1e-9) return out;
        const ImagePoint p = project(intrinsics, corner);
        projected.push_back({p.u, p.v});
      }

  const std::vector<Vec2> hull = convex_hull(projected);
  if (hull.size() < 3) return out;

  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -min_y;
  for (const auto& p : hull) {
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }

  // Scanline fill at integer pixel centers; a center exactly on the hull
  // boundary counts as foreground.
  constexpr double kEps = 1e-9;
  int px_min_x = image_size.width, px_max_x = -1;
  int px_min_y = image_size.height, px_max_y = -1;
  const int y_begin = std::max(0, static_cast<int>(std::ceil(min_y - kEps)));
  const int y_end = std::min(image_size.height - 1,
                             static_cast<int>(std::floor(max_y + kEps)));
  const int nh = static_cast<int>(hull.size());
  for (int y = y_begin; y <= y_end; ++y) {
    double xl = std::numeric_limits<double>::infinity();
    double xr = -xl;
    for (int i = 0; i < nh; ++i) {
      const Vec2& a = hull[i];
      const Vec2& b = hull[(i + 1) % nh];
      const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
      if (y < lo - kEps || y > hi + kEps) continue;
      if (a.y == b.y) {
        xl = std::min({xl, a.x, b.x});
        xr = std::max({xr, a.x, b.x});
        continue;
      }
      const double t = std::clamp((y - a.y) / (b.y - a.y), 0.0, 1.0);
      const double x = a.x + t * (b.x - a.x);
      xl = std::min(xl, x);
      xr = std::max(xr, x);
    }
    if (xl > xr) continue;
    const int x0 = std::max(0, static_cast<int>(std::ceil(xl - kEps)));
    const int x1 = std::min(image_size.width - 1,
                            static_cast<int>(std::floor(xr + kEps)));
    for (int x = x0; x <= x1; ++x) out.mask.set(x, y);
    if (x0 <= x1) {
      px_min_x = std::min(px_min_x, x0);
      px_max_x = std::max(px_max_x, x1);
      px_min_y = std::min(px_min_y, y);
      px_max_y = std::max(px_max_y, y);
    }
  }

  if (px_max_x < 0) return out;  // hull misses the image entirely

  // Tight box of the mask, treating pixels as unit squares: a run of pixels
  // from px_min to px_max spans px_max - px_min + 1.
  out.box.cx = (px_min_x + px_max_x) / 2.0;
  out.box.cy = (px_min_y + px_max_y) / 2.0;
  out.box.w = px_max_x - px_min_x + 1;
  out.box.h = px_max_y - px_min_y + 1;
  out.visible = true;
  return out;
}

RenderedFrame render_frame(const ScenarioConfig& config,
                           const std::vector<std::vector<DronePose>>& poses,
                           int frame, const SpecDatabase& specs) {
  RenderedFrame out;
  out.frame = frame;
  for (std::size_t i = 0; i < config.drones.size(); ++i) {
    if (frame < static_cast<int>(poses[i].size())) {
      out.drones.push_back(render_drone(config.intrinsics, config.image_size,
                                        poses[i][frame],
                                        specs.lookup(config.drones[i].cls)));
    } else {
      RenderedDrone gone;
      gone.mask = ForegroundMask(config.image_size.width,
                                 config.image_size.height);
      out.drones.push_back(std::move(gone));
    }
  }
  return out;
}

void generate_scenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir,
                       const SpecDatabase& specs) {
  if (config.drones.empty())
    throw InvalidSpec("scenario '" + config.name + "': no drones configured");
  for (const auto& d : config.drones) specs.lookup(d.cls);
  config.intrinsics.validate();

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "masks", ec);
  if (ec)
    throw IoFailure("cannot create directory: " + (out_dir / "masks").string() +
                    " (" + ec.message() + ")");

  std::vector<std::vector<DronePose>> poses;
  int max_frames = 0;
  for (const auto& d : config.drones) {
    poses.push_back(generate_poses(d.motion));
    max_frames = std::max(max_frames, d.motion.frames);
  }

  std::vector<TrackedBox> gt_boxes;
  std::vector<Trajectory3D> gt_trajectories(config.drones.size());
  for (std::size_t i = 0; i < config.drones.size(); ++i) {
    gt_trajectories[i].track_id = static_cast<int>(i);
    gt_trajectories[i].cls = config.drones[i].cls;
  }

  for (int frame = 0; frame < max_frames; ++frame) {
    for (std::size_t i = 0; i < config.drones.size(); ++i) {
      if (frame >= static_cast<int>(poses[i].size())) continue;
      const DronePose& pose = poses[i][frame];
      const RenderedDrone rendered =
          render_drone(config.intrinsics, config.image_size, pose,
                       specs.lookup(config.drones[i].cls));

      TrajectoryPoint3D gt_point;
      gt_point.frame = frame;
      gt_point.position = pose.position;
      gt_point.distance_mm = pose.position.norm();
      gt_trajectories[i].points.push_back(gt_point);

      if (!rendered.visible) continue;
      const int id = static_cast<int>(i);
      gt_boxes.push_back({frame, id, config.drones[i].cls, rendered.box});
      write_pgm(out_dir / "masks" / mask_filename(frame, id), rendered.mask);
    }
  }

  write_camera_json(out_dir / "camera.json", config.intrinsics,
                    CameraExtrinsics{});
  write_gt_boxes_csv(out_dir / "gt_boxes.csv", gt_boxes);
  write_gt_trajectory_csv(out_dir / "gt_trajectory.csv", gt_trajectories);
  // Config snapshot last, as the scenario manifest.
  write_scenario_config_json(out_dir / "config.json", config);
}

namespace {

// One shared camera for the builtin scenarios: a long lens keeps the drones
// near the optical axis, where the width chord dominates the projected hull
// and the known-width distance model is accurate.
CameraIntrinsics builtin_intrinsics() { return {8000.0, 8000.0, 320.0, 240.0}; }

MotionSpec linear_axis(char axis, Vec3 start, Vec3 end, int frames) {
  MotionSpec m;
  m.kind = MotionKind::LinearAxis;
  m.axis = axis;
  m.start = start;
  m.end = end;
  m.frames = frames;
  return m;
}

MotionSpec linear3d(Vec3 start, Vec3 end, int frames) {
  MotionSpec m;
  m.kind = MotionKind::Linear3d;
  m.start = start;
  m.end = end;
  m.frames = frames;
  return m;
}

MotionSpec nonlinear(std::vector<Vec3> pts, int frames) {
  MotionSpec m;
  m.kind = MotionKind::Nonlinear;
  m.control_points = std::move(pts);
  m.frames = frames;
  return m;
}

MotionSpec nonlinear_rotating(std::vector<Vec3> pts, int frames,
                              double yaw_rate, double roll_rate) {
  MotionSpec m;
  m.kind = MotionKind::NonlinearRotating;
  m.control_points = std::move(pts);
  m.frames = frames;
  m.yaw_rate = yaw_rate;
  m.roll_rate = roll_rate;
  return m;
}

}  // namespace

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {
      "seq01", "seq02", "seq03", "seq04", "seq05",
      "seq06", "seq07", "seq08", "seq09"};
  return names;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig config;
  config.name = name;
  config.intrinsics = builtin_intrinsics();
  config.rng_seed = 1;

  if (name == "seq01") {
    // Single drone, constant velocity along x.
    config.drones = {{"Air2S", linear_axis('x', {-375, -150, 30000},
                                           {375, -150, 30000}, 180)}};
  } else if (name == "seq02") {
    config.drones = {{"Air2S", linear_axis('y', {150, -220, 30000},
                                           {150, 220, 30000}, 180)}};
  } else if (name == "seq03") {
    config.drones = {{"Air2S", linear_axis('z', {0, 0, 24000},
                                           {0, 0, 40000}, 180)}};
  } else if (name == "seq04") {
    // Two drones crossing, constant velocity in all axes.
    config.drones = {
        {"Air2S", linear3d({-300, -150, 26000}, {300, 150, 34000}, 180)},
        {"Tello", linear3d({250, -120, 30000}, {-250, 130, 25000}, 180)}};
  } else if (name == "seq05") {
    config.drones = {
        {"Mavic3", linear3d({-350, 120, 32000}, {350, -140, 38000}, 180)},
        {"Mini3", linear3d({300, 170, 26000}, {-300, -170, 30000}, 180)}};
  } else if (name == "seq06") {
    config.drones = {{"Air2S", nonlinear({{-320, -120, 26000},
                                          {-100, 140, 31000},
                                          {150, -140, 35000},
                                          {320, 120, 28000}},
                                         300)}};
  } else if (name == "seq07") {
    config.drones = {{"Mini3", nonlinear({{-300, 150, 25000},
                                          {0, -150, 30000},
                                          {200, 100, 35000},
                                          {-250, -100, 32000}},
                                         300)}};
  } else if (name == "seq08") {
    // One full in-image rotation over the sequence, plus a slow yaw.
    config.drones = {{"Air2S", nonlinear_rotating({{-300, -100, 28000},
                                                   {0, 130, 32000},
                                                   {300, -130, 30000},
                                                   {-200, 80, 26000}},
                                                  810, 5e-5,
                                                  2.0 * std::numbers::pi /
                                                      810.0)}};
  } else if (name == "seq09") {
    config.drones = {
        {"Tello", nonlinear_rotating({{-250, -120, 24000},
                                      {0, 100, 28000},
                                      {250, -80, 26000}},
                                     300, 1e-4, std::numbers::pi / 300.0)},
        {"Mavic3", nonlinear_rotating({{300, 100, 34000},
                                       {0, -120, 30000},
                                       {-300, 60, 36000}},
                                      300, -1e-4, -std::numbers::pi / 300.0)}};
  } else {
    throw InvalidSpec("unknown builtin scenario: '" + name + "'");
  }
  return config;
}

}  // namespace monotraj
