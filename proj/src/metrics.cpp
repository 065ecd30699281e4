#include "monotraj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>

#include <json.hpp>

#include "monotraj/errors.hpp"
#include "monotraj/pipeline.hpp"

namespace monotraj {

MotaReport mota(std::span<const Track> gt, std::span<const Track> pred,
                double iou_threshold) {
  struct Entry {
    int id;
    const BoundingBox* box;
  };
  std::map<int, std::vector<Entry>> gt_frames;
  std::map<int, std::vector<Entry>> pred_frames;
  long gt_count = 0;
  for (const auto& t : gt)
    for (const auto& s : t.states) {
      gt_frames[s.frame].push_back({t.id, &s.box});
      ++gt_count;
    }
  for (const auto& t : pred)
    for (const auto& s : t.states) pred_frames[s.frame].push_back({t.id, &s.box});

  if (gt_count == 0)
    throw EmptyGroundTruth("mota: ground truth has no objects");

  MotaReport report;
  report.gt_count = gt_count;
  std::map<int, int> last_matched;  // gt id -> most recent matched pred id

  std::vector<int> frames;
  for (const auto& [f, _] : gt_frames) frames.push_back(f);
  for (const auto& [f, _] : pred_frames)
    if (!gt_frames.count(f)) frames.push_back(f);
  std::sort(frames.begin(), frames.end());

  for (const int frame : frames) {
    static const std::vector<Entry> kNone;
    const auto& gts =
        gt_frames.count(frame) ? gt_frames[frame] : kNone;
    const auto& preds =
        pred_frames.count(frame) ? pred_frames[frame] : kNone;

    struct Candidate {
      double iou;
      std::size_t g, p;
    };
    std::vector<Candidate> candidates;
    for (std::size_t g = 0; g < gts.size(); ++g)
      for (std::size_t p = 0; p < preds.size(); ++p) {
        const double score = iou(*gts[g].box, *preds[p].box);
        if (score >= iou_threshold) candidates.push_back({score, g, p});
      }
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) {
                if (a.iou != b.iou) return a.iou > b.iou;
                if (gts[a.g].id != gts[b.g].id)
                  return gts[a.g].id < gts[b.g].id;
                return preds[a.p].id < preds[b.p].id;
              });

    std::vector<bool> g_used(gts.size(), false), p_used(preds.size(), false);
    for (const auto& c : candidates) {
      if (g_used[c.g] || p_used[c.p]) continue;
      g_used[c.g] = true;
      p_used[c.p] = true;
      const int gt_id = gts[c.g].id;
      const int pred_id = preds[c.p].id;
      if (const auto it = last_matched.find(gt_id);
          it != last_matched.end() && it->second != pred_id)
        ++report.id_switches;
      last_matched[gt_id] = pred_id;
    }
    for (std::size_t g = 0; g < gts.size(); ++g)
      if (!g_used[g]) ++report.fn;
    for (std::size_t p = 0; p < preds.size(); ++p)
      if (!p_used[p]) ++report.fp;
  }

  report.mota = 1.0 - static_cast<double>(report.fn + report.fp +
                                          report.id_switches) /
                          report.gt_count;
  return report;
}

TrajectoryErrorReport trajectory_error(const Trajectory3D& gt,
                                       const Trajectory3D& pred) {
  std::map<int, const Vec3*> pred_by_frame;
  for (const auto& p : pred.points) pred_by_frame[p.frame] = &p.position;

  double abs_sum = 0.0, sq_sum = 0.0;
  long n = 0;
  for (const auto& g : gt.points) {
    const auto it = pred_by_frame.find(g.frame);
    if (it == pred_by_frame.end()) continue;
    const double e = (g.position - *it->second).norm();
    abs_sum += e;
    sq_sum += e * e;
    ++n;
  }
  if (n == 0) throw NoOverlap("trajectory_error: no common frames");
  return {abs_sum / n, std::sqrt(sq_sum / n), n};
}

namespace {

struct ErrorPool {
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  long n = 0;

  void add(const Trajectory3D& gt, const Trajectory3D& pred) {
    std::map<int, const Vec3*> by_frame;
    for (const auto& p : pred.points) by_frame[p.frame] = &p.position;
    for (const auto& g : gt.points) {
      if (const auto it = by_frame.find(g.frame); it != by_frame.end()) {
        const double e = (g.position - *it->second).norm();
        abs_sum += e;
        sq_sum += e * e;
        ++n;
      }
    }
  }
  double mae() const { return n ? abs_sum / n : 0.0; }
  double rmse() const { return n ? std::sqrt(sq_sum / n) : 0.0; }
};

SequenceScores score_sequence(const std::filesystem::path& dir,
                              const std::vector<SegmentStrategy>& strategies,
                              int window, const SpecDatabase& specs) {
  const Dataset dataset = load_dataset(dir);

  SequenceScores seq;
  seq.name = dataset.name;

  double dist_sum = 0.0;
  long dist_n = 0;
  for (const auto& t : dataset.gt_trajectories)
    for (const auto& p : t.points) {
      dist_sum += p.position.norm();
      ++dist_n;
    }
  seq.mean_gt_distance_mm = dist_n ? dist_sum / dist_n : 0.0;

  for (const SegmentStrategy strategy : strategies) {
    ReconstructionOptions options;
    options.strategy = strategy;
    options.window = 1;  // raw; smoothing applied below
    const auto raw = reconstruct_dataset(dataset, options, specs);

    std::map<int, const Trajectory3D*> raw_by_id;
    for (const auto& t : raw) raw_by_id[t.track_id] = &t;

    ErrorPool raw_pool, smooth_pool;
    for (const auto& gt : dataset.gt_trajectories) {
      const auto it = raw_by_id.find(gt.track_id);
      if (it == raw_by_id.end())
        throw NoOverlap("sequence " + seq.name + ": no reconstruction for id " +
                        std::to_string(gt.track_id));
      raw_pool.add(gt, *it->second);
      smooth_pool.add(gt, smooth(*it->second, window));
    }
    if (raw_pool.n == 0)
      throw NoOverlap("sequence " + seq.name + ": no common frames");

    seq.strategies[strategy] = {smooth_pool.mae(), smooth_pool.rmse(),
                                raw_pool.mae(), raw_pool.rmse()};
  }
  return seq;
}

}  // namespace

ComparisonReport compare_strategies(
    const std::vector<std::filesystem::path>& sequence_dirs,
    const std::vector<SegmentStrategy>& strategies, int window,
    const SpecDatabase& specs, int jobs) {
  ComparisonReport report;
  report.window = window;
  report.sequences.resize(sequence_dirs.size());

  if (jobs <= 1) {
    for (std::size_t i = 0; i < sequence_dirs.size(); ++i)
      report.sequences[i] =
          score_sequence(sequence_dirs[i], strategies, window, specs);
  } else {
    // Bounded fan-out; results land at their input index, so the merge order
    // never depends on completion order.
    std::vector<std::future<SequenceScores>> futures(sequence_dirs.size());
    std::size_t next = 0, running_from = 0;
    while (running_from < sequence_dirs.size()) {
      while (next < sequence_dirs.size() &&
             next - running_from < static_cast<std::size_t>(jobs)) {
        futures[next] = std::async(std::launch::async, score_sequence,
                                   sequence_dirs[next], strategies, window,
                                   std::cref(specs));
        ++next;
      }
      report.sequences[running_from] = futures[running_from].get();
      ++running_from;
    }
  }

  for (const SegmentStrategy s : strategies) {
    StrategyScores avg;
    for (const auto& seq : report.sequences) {
      const StrategyScores& scores = seq.strategies.at(s);
      avg.mae_mm += scores.mae_mm;
      avg.rmse_mm += scores.rmse_mm;
      avg.raw_mae_mm += scores.raw_mae_mm;
      avg.raw_rmse_mm += scores.raw_rmse_mm;
    }
    const double n = static_cast<double>(report.sequences.size());
    if (n > 0) {
      avg.mae_mm /= n;
      avg.rmse_mm /= n;
      avg.raw_mae_mm /= n;
      avg.raw_rmse_mm /= n;
    }
    report.average[s] = avg;
  }
  return report;
}

std::string comparison_report_json(const ComparisonReport& report) {
  using OrderedJson = nlohmann::ordered_json;
  const auto scores_json = [](const StrategyScores& s) {
    return OrderedJson{{"mae_mm", s.mae_mm},
                       {"rmse_mm", s.rmse_mm},
                       {"raw_mae_mm", s.raw_mae_mm},
                       {"raw_rmse_mm", s.raw_rmse_mm}};
  };
  OrderedJson j;
  j["window"] = report.window;
  j["note"] =
      "mae_mm/rmse_mm are computed on smoothed trajectories; raw_* on the "
      "unsmoothed reconstruction. Frame errors are pooled across tracks "
      "within a sequence.";
  j["sequences"] = OrderedJson::array();
  for (const auto& seq : report.sequences) {
    OrderedJson s;
    s["name"] = seq.name;
    s["mean_gt_distance_mm"] = seq.mean_gt_distance_mm;
    s["strategies"] = OrderedJson::object();
    for (const auto& [strategy, scores] : seq.strategies)
      s["strategies"][to_string(strategy)] = scores_json(scores);
    j["sequences"].push_back(std::move(s));
  }
  j["average"] = OrderedJson::object();
  for (const auto& [strategy, scores] : report.average)
    j["average"][to_string(strategy)] = scores_json(scores);
  return j.dump(2) + "\n";
}

}  // namespace monotraj
