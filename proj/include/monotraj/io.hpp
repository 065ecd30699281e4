#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "monotraj/camera.hpp"
#include "monotraj/reconstruction.hpp"
#include "monotraj/rotation2d.hpp"
#include "monotraj/tracking.hpp"

namespace monotraj {

struct ScenarioConfig;  // simulator.hpp

/// One row of a per-identity box file (ground-truth boxes or track output).
struct TrackedBox {
  int frame = 0;
  int id = 0;
  DroneClass cls;
  BoundingBox box;
};

// --- masks: binary PGM (P5), 8-bit, 0 = background, 255 = foreground ---
void write_pgm(const std::filesystem::path& path, const ForegroundMask& mask);
ForegroundMask read_pgm(const std::filesystem::path& path);
std::string mask_filename(int frame, int id);  // "frame{F}_id{I}.pgm"

// --- camera file: JSON with fx, fy, cx, cy, skew, rotation, translation ---
void write_camera_json(const std::filesystem::path& path,
                       const CameraIntrinsics& intrinsics,
                       const CameraExtrinsics& extrinsics);
std::pair<CameraIntrinsics, CameraExtrinsics> read_camera_json(
    const std::filesystem::path& path);

// --- spec database: JSON map class -> {width_mm, depth_mm, height_mm} ---
SpecDatabase read_spec_database_json(const std::filesystem::path& path);
void write_spec_database_json(const std::filesystem::path& path,
                              const SpecDatabase& db);

// --- CSV files; headers are part of the format ---
// header: frame,cx,cy,w,h,class,score
void write_detections_csv(const std::filesystem::path& path,
                          std::span<const Detection> detections);
std::vector<Detection> read_detections_csv(const std::filesystem::path& path);

// header: frame,id,cx,cy,w,h,class
void write_tracks_csv(const std::filesystem::path& path,
                      std::span<const Track> tracks);
std::vector<Track> read_tracks_csv(const std::filesystem::path& path);

// header: frame,id,class,cx,cy,w,h
void write_gt_boxes_csv(const std::filesystem::path& path,
                        std::span<const TrackedBox> rows);
std::vector<TrackedBox> read_gt_boxes_csv(const std::filesystem::path& path);

// header: frame,id,class,x_mm,y_mm,z_mm (ground truth, 6 columns)
void write_gt_trajectory_csv(const std::filesystem::path& path,
                             std::span<const Trajectory3D> trajectories);
// header: frame,id,class,x_mm,y_mm,z_mm,distance_mm,theta_rad (8 columns)
void write_trajectories_csv(const std::filesystem::path& path,
                            std::span<const Trajectory3D> trajectories);
// Accepts either the 6- or 8-column form; returns one trajectory per id,
// sorted by id, frames ascending.
std::vector<Trajectory3D> read_trajectories_csv(
    const std::filesystem::path& path);

// --- scenario config snapshot ---
void write_scenario_config_json(const std::filesystem::path& path,
                                const ScenarioConfig& config);
ScenarioConfig read_scenario_config_json(const std::filesystem::path& path);

}  // namespace monotraj
