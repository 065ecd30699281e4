#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "monotraj/reconstruction.hpp"
#include "monotraj/tracking.hpp"
#include "monotraj/types.hpp"

namespace monotraj {

struct MotaReport {
  double mota = 0.0;  // 1 - (fn + fp + id_switches) / gt_count
  long fn = 0;
  long fp = 0;
  long id_switches = 0;
  long gt_count = 0;
};

struct TrajectoryErrorReport {
  double mae_mm = 0.0;
  double rmse_mm = 0.0;
  long matched_frames = 0;
};

// CLEAR-MOT accuracy. Per frame, ground-truth and predicted boxes are matched
// greedily by descending IoU above the threshold; unmatched ground truth
// counts as FN, unmatched predictions as FP, and a matched ground-truth track
// whose predicted id differs from its most recent matched id counts one
// identity switch. Throws EmptyGroundTruth when gt has no states.
MotaReport mota(std::span<const Track> gt, std::span<const Track> pred,
                double iou_threshold = 0.5);

// Euclidean position error over the frames both trajectories share.
// Throws NoOverlap when there is no common frame.
TrajectoryErrorReport trajectory_error(const Trajectory3D& gt,
                                       const Trajectory3D& pred);

struct StrategyScores {
  double mae_mm = 0.0;       // smoothed trajectory vs ground truth
  double rmse_mm = 0.0;
  double raw_mae_mm = 0.0;   // unsmoothed, for reference
  double raw_rmse_mm = 0.0;
};

struct SequenceScores {
  std::string name;
  double mean_gt_distance_mm = 0.0;
  std::map<SegmentStrategy, StrategyScores> strategies;
};

struct ComparisonReport {
  int window = 5;
  std::vector<SequenceScores> sequences;
  std::map<SegmentStrategy, StrategyScores> average;  // mean of sequence rows
};

// Runs the ground-truth-box reconstruction pipeline once per strategy on each
// sequence directory and scores it against the stored ground truth. Per-frame
// errors are pooled across tracks within a sequence. jobs > 1 evaluates
// sequences in parallel; the report order always follows sequence_dirs.
ComparisonReport compare_strategies(
    const std::vector<std::filesystem::path>& sequence_dirs,
    const std::vector<SegmentStrategy>& strategies, int window,
    const SpecDatabase& specs = default_spec_database(), int jobs = 1);

std::string comparison_report_json(const ComparisonReport& report);

}  // namespace monotraj
