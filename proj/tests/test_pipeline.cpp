#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "monotraj/errors.hpp"
#include "monotraj/pipeline.hpp"
#include "monotraj/simulator.hpp"
#include "test_support.hpp"

using namespace monotraj;

namespace {

// A short two-drone scenario with one drone rotating in the image plane, so
// the pca and width strategies disagree measurably.
ScenarioConfig mini_scenario() {
  ScenarioConfig config;
  config.name = "mini";
  config.intrinsics = {8000, 8000, 320, 240};
  MotionSpec a;
  a.kind = MotionKind::NonlinearRotating;
  a.control_points = {{-200, -80, 24000}, {0, 40, 26000}, {200, -40, 28000}};
  a.frames = 30;
  a.yaw_rate = 1e-4;
  a.roll_rate = 0.05;
  MotionSpec b;
  b.kind = MotionKind::Linear3d;
  b.start = {150, 100, 30000};
  b.end = {-150, -60, 27000};
  b.frames = 30;
  config.drones = {{"Air2S", a}, {"Tello", b}};
  return config;
}

}  // namespace

TEST_CASE("tracks_from_gt_boxes groups rows by id and sorts frames") {
  std::vector<TrackedBox> rows = {{2, 1, "Tello", {1, 1, 2, 2}},
                                  {0, 0, "Air2S", {5, 5, 2, 2}},
                                  {1, 1, "Tello", {1, 1, 2, 2}},
                                  {1, 0, "Air2S", {6, 5, 2, 2}}};
  const auto tracks = tracks_from_gt_boxes(rows);
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].id == 0);
  CHECK(tracks[0].cls == "Air2S");
  REQUIRE(tracks[0].states.size() == 2);
  CHECK(tracks[0].states[0].frame == 0);
  CHECK(tracks[0].states[1].frame == 1);
  CHECK(tracks[1].states[0].frame == 1);
  CHECK(tracks[1].states[1].frame == 2);
}

TEST_CASE("detections_from_gt_boxes sorts by frame") {
  std::vector<TrackedBox> rows = {{3, 0, "Air2S", {1, 1, 2, 2}},
                                  {1, 1, "Tello", {9, 9, 2, 2}},
                                  {1, 0, "Air2S", {5, 5, 2, 2}}};
  const auto dets = detections_from_gt_boxes(rows);
  REQUIRE(dets.size() == 3);
  CHECK(dets[0].frame == 1);
  CHECK(dets[0].cls == "Tello");  // input order kept within a frame
  CHECK(dets[1].frame == 1);
  CHECK(dets[2].frame == 3);
}

TEST_CASE("reconstruct_dataset end to end on a scenario directory") {
  const auto dir = testsupport::fresh_dir("pipe_ds");
  generate_scenario(mini_scenario(), dir);
  const Dataset dataset = load_dataset(dir);
  CHECK(dataset.image_size.width == 640);
  CHECK(dataset.gt_trajectories.size() == 2);

  SUBCASE("ground-truth-box mode reconstructs every visible frame") {
    ReconstructionOptions options;
    options.strategy = SegmentStrategy::Pca;
    options.window = 5;
    const auto trajs = reconstruct_dataset(dataset, options);
    REQUIRE(trajs.size() == 2);
    for (const auto& t : trajs) CHECK(t.points.size() == 30);
    // Both drones sit 24-30 m out; reconstruction should land in that range.
    for (const auto& t : trajs)
      for (const auto& p : t.points) {
        CHECK(p.position.z > 20000);
        CHECK(p.position.z < 35000);
      }
  }

  SUBCASE("pca and width land on different trajectories when rolling") {
    ReconstructionOptions options;
    options.window = 1;
    options.strategy = SegmentStrategy::Pca;
    const auto pca = reconstruct_dataset(dataset, options);
    options.strategy = SegmentStrategy::Width;
    const auto width = reconstruct_dataset(dataset, options);
    double max_diff = 0;
    for (std::size_t i = 0; i < pca[0].points.size(); ++i)
      max_diff = std::max(max_diff, (pca[0].points[i].position -
                                     width[0].points[i].position)
                                        .norm());
    CHECK(max_diff > 100.0);  // rolled frames diverge by many mm
  }

  SUBCASE("tracker mode with exact detections matches gt-box mode") {
    ReconstructionOptions gt_mode;
    gt_mode.strategy = SegmentStrategy::Width;
    gt_mode.window = 1;
    ReconstructionOptions tracker_mode = gt_mode;
    tracker_mode.use_tracker = true;
    const auto a = reconstruct_dataset(dataset, gt_mode);
    const auto b = reconstruct_dataset(dataset, tracker_mode);
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
      REQUIRE(a[t].points.size() == b[t].points.size());
      for (std::size_t i = 0; i < a[t].points.size(); ++i)
        CHECK((a[t].points[i].position - b[t].points[i].position).norm() <
              1e-9);
    }
  }

  SUBCASE("noisy tracker mode is reproducible from its seed") {
    ReconstructionOptions options;
    options.strategy = SegmentStrategy::Width;
    options.use_tracker = true;
    DetectorNoiseModel noise;
    noise.center_jitter_sigma = 1.0;
    noise.rng_seed = 5;
    options.noise = noise;
    const auto a = reconstruct_dataset(dataset, options);
    const auto b = reconstruct_dataset(dataset, options);
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t)
      for (std::size_t i = 0; i < a[t].points.size(); ++i)
        CHECK(a[t].points[i].position.z == b[t].points[i].position.z);
  }

  SUBCASE("a missing mask file is an IO failure in gt mode") {
    std::filesystem::remove(dir / "masks" / mask_filename(4, 0));
    ReconstructionOptions options;
    options.strategy = SegmentStrategy::Pca;
    CHECK_THROWS_AS(reconstruct_dataset(dataset, options), IoFailure);
  }

  std::filesystem::remove_all(dir);
}

TEST_CASE("load_dataset reports missing inputs") {
  const auto dir = testsupport::fresh_dir("pipe_missing");
  CHECK_THROWS_AS(load_dataset(dir), IoFailure);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown class in the dataset surfaces as UnknownClass") {
  const auto dir = testsupport::fresh_dir("pipe_unknown");
  generate_scenario(mini_scenario(), dir);
  Dataset dataset = load_dataset(dir);
  for (auto& r : dataset.gt_boxes) r.cls = "Phantom4";
  ReconstructionOptions options;
  options.strategy = SegmentStrategy::Width;
  CHECK_THROWS_AS(reconstruct_dataset(dataset, options), UnknownClass);
  std::filesystem::remove_all(dir);
}
