#include "monotraj/pipeline.hpp"

#include <algorithm>
#include <map>

#include "monotraj/errors.hpp"
#include "monotraj/rotation2d.hpp"
#include "monotraj/simulator.hpp"

namespace monotraj {

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  ds.dir = dir;
  ds.name = dir.filename().string();
  std::tie(ds.intrinsics, ds.extrinsics) = read_camera_json(dir / "camera.json");
  ds.gt_boxes = read_gt_boxes_csv(dir / "gt_boxes.csv");
  ds.gt_trajectories = read_trajectories_csv(dir / "gt_trajectory.csv");
  if (std::filesystem::exists(dir / "config.json")) {
    const ScenarioConfig config = read_scenario_config_json(dir / "config.json");
    ds.image_size = config.image_size;
    ds.name = config.name;
  }
  return ds;
}

std::vector<Track> tracks_from_gt_boxes(std::span<const TrackedBox> rows) {
  std::map<int, Track> by_id;
  for (const auto& r : rows) {
    Track& t = by_id[r.id];
    t.id = r.id;
    t.cls = r.cls;
    t.states.push_back({r.frame, r.box});
  }
  std::vector<Track> tracks;
  for (auto& [id, t] : by_id) {
    std::sort(t.states.begin(), t.states.end(),
              [](const TrackState& a, const TrackState& b) {
                return a.frame < b.frame;
              });
    tracks.push_back(std::move(t));
  }
  return tracks;
}

std::vector<Detection> detections_from_gt_boxes(
    std::span<const TrackedBox> rows) {
  std::vector<Detection> dets;
  dets.reserve(rows.size());
  for (const auto& r : rows) dets.push_back({r.frame, r.box, r.cls, 1.0});
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.frame < b.frame;
                   });
  return dets;
}

namespace {

// With tracker identities the mask files are still keyed by ground-truth id;
// pick the ground-truth box with the best overlap in that frame.
std::optional<int> mask_id_for(const Dataset& ds, int frame,
                               const BoundingBox& box, bool use_tracker,
                               int track_id) {
  if (!use_tracker) return track_id;
  double best = 0.1;
  std::optional<int> best_id;
  for (const auto& r : ds.gt_boxes) {
    if (r.frame != frame) continue;
    const double score = iou(r.box, box);
    if (score > best) {
      best = score;
      best_id = r.id;
    }
  }
  return best_id;
}

}  // namespace

std::vector<Trajectory3D> reconstruct_dataset(
    const Dataset& dataset, const ReconstructionOptions& options,
    const SpecDatabase& specs) {
  std::vector<Track> tracks;
  if (options.use_tracker) {
    auto detections = detections_from_gt_boxes(dataset.gt_boxes);
    if (options.noise)
      detections = simulate_detector(detections, *options.noise,
                                     dataset.image_size);
    tracks = associate(detections, options.association);
  } else {
    tracks = tracks_from_gt_boxes(dataset.gt_boxes);
  }

  std::vector<Trajectory3D> trajectories;
  trajectories.reserve(tracks.size());
  for (const Track& track : tracks) {
    std::map<int, PrincipalSegment> segments;
    for (const TrackState& state : track.states) {
      if (options.strategy == SegmentStrategy::Pca) {
        const auto id = mask_id_for(dataset, state.frame, state.box,
                                    options.use_tracker, track.id);
        if (!id) continue;  // no mask: reconstruct_track falls back to width
        const auto path =
            dataset.dir / "masks" / mask_filename(state.frame, *id);
        try {
          segments.emplace(state.frame,
                           estimate_principal_segment(read_pgm(path),
                                                      state.box));
        } catch (const DegenerateMask&) {
        } catch (const IsotropicMask&) {
        }
      } else {
        segments.emplace(state.frame,
                         baseline_segment(state.box, options.strategy,
                                          options.diagonal));
      }
    }
    trajectories.push_back(
        smooth(reconstruct_track(track, segments, dataset.intrinsics, specs),
               options.window));
  }
  return trajectories;
}

}  // namespace monotraj
