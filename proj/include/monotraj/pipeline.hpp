#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "monotraj/camera.hpp"
#include "monotraj/io.hpp"
#include "monotraj/reconstruction.hpp"
#include "monotraj/tracking.hpp"
#include "monotraj/types.hpp"

namespace monotraj {

/// A scenario directory loaded into memory (masks stay on disk and are read
/// per frame during reconstruction).
struct Dataset {
  std::filesystem::path dir;
  std::string name;  // scenario name from config.json, else the dir name
  CameraIntrinsics intrinsics;
  CameraExtrinsics extrinsics;
  ImageSize image_size{640, 480};
  std::vector<TrackedBox> gt_boxes;
  std::vector<Trajectory3D> gt_trajectories;
};

// Requires camera.json, gt_boxes.csv and gt_trajectory.csv in dir; reads the
// image size from config.json when present.
Dataset load_dataset(const std::filesystem::path& dir);

struct ReconstructionOptions {
  SegmentStrategy strategy = SegmentStrategy::Pca;
  int window = 5;
  DiagonalDirection diagonal = DiagonalDirection::TopLeftToBottomRight;
  // false: trust ground-truth identities (isolates the 3D geometry).
  // true: run detection association, optionally degraded by `noise`.
  bool use_tracker = false;
  AssociationParams association;
  std::optional<DetectorNoiseModel> noise;
};

std::vector<Track> tracks_from_gt_boxes(std::span<const TrackedBox> rows);
std::vector<Detection> detections_from_gt_boxes(
    std::span<const TrackedBox> rows);

// Full per-track pipeline: segment estimation (per strategy), back-projection,
// known-width distance recovery, smoothing. PCA segments that fail
// (degenerate or isotropic masks) fall back to the width baseline inside
// reconstruct_track.
std::vector<Trajectory3D> reconstruct_dataset(
    const Dataset& dataset, const ReconstructionOptions& options,
    const SpecDatabase& specs = default_spec_database());

}  // namespace monotraj
