#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "monotraj/geometry.hpp"
#include "monotraj/types.hpp"

namespace monotraj {

struct Detection {
  int frame = 0;
  BoundingBox box;
  DroneClass cls;
  double score = 1.0;
};

struct TrackState {
  int frame = 0;
  BoundingBox box;
};

/// One identity over its lifetime; frames strictly increasing, at most one
/// state per frame.
struct Track {
  int id = 0;
  DroneClass cls;
  std::vector<TrackState> states;
};

struct AssociationParams {
  double iou_threshold = 0.5;
  int max_gap = 10;  // frames a track survives without a match
};

/// Synthetic detector degradation: per-box misses, additive normal jitter on
/// centers, multiplicative log-normal jitter on sizes, Poisson-count spurious
/// boxes per frame. Fully reproducible from rng_seed.
struct DetectorNoiseModel {
  double miss_rate = 0.0;
  double fp_rate_per_frame = 0.0;
  double center_jitter_sigma = 0.0;   // px
  double size_jitter_sigma = 0.0;     // relative
  std::uint64_t rng_seed = 0;
};

// Intersection area over union area; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

// Greedy best-IoU tracking-by-detection. Detections must be sorted by frame.
// A match requires iou >= threshold and equal class; unmatched detections
// start new tracks; a track lapses after max_gap frames without a match.
// Deterministic: ties broken by higher IoU, then lower track id, then input
// order of the detections.
std::vector<Track> associate(std::span<const Detection> detections,
                             const AssociationParams& params = {});

// Applies the noise model to ground-truth detections. The spurious-box
// positions are uniform over the image; their classes cycle deterministically
// through the distinct classes present in `gt`.
std::vector<Detection> simulate_detector(std::span<const Detection> gt,
                                         const DetectorNoiseModel& noise,
                                         ImageSize image_size);

}  // namespace monotraj
