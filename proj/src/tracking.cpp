#include "monotraj/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "monotraj/rng.hpp"

namespace monotraj {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.area() + b.area() - inter);
}

namespace {

struct ActiveTrack {
  int index;       // into the result vector
  int last_frame;
  BoundingBox last_box;
  DroneClass cls;
};

}  // namespace

std::vector<Track> associate(std::span<const Detection> detections,
                             const AssociationParams& params) {
  std::vector<Track> tracks;
  std::vector<ActiveTrack> active;

  std::size_t i = 0;
  int prev_frame = detections.empty() ? 0 : detections.front().frame;
  while (i < detections.size()) {
    const int frame = detections[i].frame;
    if (frame < prev_frame)
      throw std::invalid_argument("associate: detections not sorted by frame");
    prev_frame = frame;

    std::size_t j = i;
    while (j < detections.size() && detections[j].frame == frame) ++j;
    const std::span<const Detection> frame_dets = detections.subspan(i, j - i);

    // Retire tracks that have been unmatched for too long.
    std::erase_if(active, [&](const ActiveTrack& t) {
      return frame - t.last_frame > params.max_gap;
    });

    // Candidate pairs: equal class, IoU above threshold.
    struct Candidate {
      double iou;
      int track_id;
      std::size_t det;
      std::size_t active_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t d = 0; d < frame_dets.size(); ++d) {
        if (active[a].cls != frame_dets[d].cls) continue;
        const double score = iou(active[a].last_box, frame_dets[d].box);
        if (score >= params.iou_threshold)
          candidates.push_back({score, tracks[active[a].index].id, d, a});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) {
                if (x.iou != y.iou) return x.iou > y.iou;
                if (x.track_id != y.track_id) return x.track_id < y.track_id;
                return x.det < y.det;
              });

    std::vector<bool> track_used(active.size(), false);
    std::vector<bool> det_used(frame_dets.size(), false);
    for (const auto& c : candidates) {
      if (track_used[c.active_idx] || det_used[c.det]) continue;
      track_used[c.active_idx] = true;
      det_used[c.det] = true;
      ActiveTrack& t = active[c.active_idx];
      tracks[t.index].states.push_back({frame, frame_dets[c.det].box});
      t.last_frame = frame;
      t.last_box = frame_dets[c.det].box;
    }

    // Unmatched detections start new tracks, in input order.
    for (std::size_t d = 0; d < frame_dets.size(); ++d) {
      if (det_used[d]) continue;
      const int id = static_cast<int>(tracks.size());
      tracks.push_back({id, frame_dets[d].cls, {{frame, frame_dets[d].box}}});
      active.push_back({id, frame, frame_dets[d].box, frame_dets[d].cls});
    }

    i = j;
  }
  return tracks;
}

std::vector<Detection> simulate_detector(std::span<const Detection> gt,
                                         const DetectorNoiseModel& noise,
                                         ImageSize image_size) {
  std::vector<Detection> out;
  if (gt.empty()) return out;

  // Group ground truth by frame, preserving input order within a frame.
  std::map<int, std::vector<const Detection*>> by_frame;
  std::set<DroneClass> class_set;
  for (const auto& d : gt) {
    by_frame[d.frame].push_back(&d);
    class_set.insert(d.cls);
  }
  const std::vector<DroneClass> classes(class_set.begin(), class_set.end());

  Rng rng(noise.rng_seed);
  const int first = by_frame.begin()->first;
  const int last = by_frame.rbegin()->first;
  for (int frame = first; frame <= last; ++frame) {
    if (auto it = by_frame.find(frame); it != by_frame.end()) {
      for (const Detection* d : it->second) {
        if (rng.uniform() < noise.miss_rate) continue;
        Detection jittered = *d;
        jittered.box.cx += rng.normal(0.0, noise.center_jitter_sigma);
        jittered.box.cy += rng.normal(0.0, noise.center_jitter_sigma);
        const double scale = std::exp(rng.normal(0.0, noise.size_jitter_sigma));
        jittered.box.w *= scale;
        jittered.box.h *= scale;
        out.push_back(jittered);
      }
    }
    const int spurious = rng.poisson(noise.fp_rate_per_frame);
    for (int s = 0; s < spurious; ++s) {
      Detection fp;
      fp.frame = frame;
      fp.box.cx = rng.uniform(0.0, image_size.width);
      fp.box.cy = rng.uniform(0.0, image_size.height);
      fp.box.w = rng.uniform(8.0, 64.0);
      fp.box.h = rng.uniform(8.0, 64.0);
      fp.cls = classes[rng.uniform_int(static_cast<int>(classes.size()))];
      fp.score = rng.uniform(0.0, 1.0);
      out.push_back(fp);
    }
  }
  return out;
}

}  // namespace monotraj
