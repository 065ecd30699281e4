// Command-line front end: simulate scenarios, reconstruct 3D trajectories
// from a scenario directory, evaluate them against ground truth, and plot
// results as SVG.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monotraj/errors.hpp"
#include "monotraj/io.hpp"
#include "monotraj/metrics.hpp"
#include "monotraj/pipeline.hpp"
#include "monotraj/simulator.hpp"
#include "monotraj/svg.hpp"

namespace fs = std::filesystem;
using namespace monotraj;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

SpecDatabase resolve_spec_database(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv("MONOTRAJ_SPEC_DB")) path = env;
  }
  if (path.empty()) return default_spec_database();
  return read_spec_database_json(path);
}

void require_odd_window(int window) {
  if (window < 1 || window % 2 == 0)
    throw InvalidSpec("--window must be an odd integer >= 1, got " +
                      std::to_string(window));
}

// ----------------------------------------------------------- simulate ---

struct SimulateArgs {
  std::string builtin;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

int run_simulate(const SimulateArgs& args) {
  std::vector<ScenarioConfig> configs;
  if (!args.builtin.empty()) {
    if (args.builtin == "all") {
      for (const auto& name : builtin_scenario_names())
        configs.push_back(builtin_scenario(name));
    } else {
      configs.push_back(builtin_scenario(args.builtin));
    }
  } else {
    configs.push_back(read_scenario_config_json(args.config_path));
  }
  if (args.seed)
    for (auto& c : configs) c.rng_seed = *args.seed;

  // With several scenarios the output directory gets one subdirectory per
  // scenario; a single scenario writes directly into it.
  const auto out_dir_for = [&](const ScenarioConfig& c) {
    return configs.size() == 1 ? fs::path(args.out_dir)
                               : fs::path(args.out_dir) / c.name;
  };

  const auto run_one = [&](const ScenarioConfig& c) {
    generate_scenario(c, out_dir_for(c));
  };

  if (args.jobs <= 1 || configs.size() == 1) {
    for (const auto& c : configs) run_one(c);
  } else {
    std::vector<std::future<void>> futures;
    for (const auto& c : configs)
      futures.push_back(std::async(std::launch::async, run_one, std::cref(c)));
    for (auto& f : futures) f.get();
  }

  for (const auto& c : configs) {
    int frames = 0;
    for (const auto& d : c.drones) frames = std::max(frames, d.motion.frames);
    std::cout << c.name << ": " << frames << " frames, " << c.drones.size()
              << " drone(s) -> " << out_dir_for(c).string() << "\n";
  }
  return kExitOk;
}

// -------------------------------------------------------- reconstruct ---

struct ReconstructArgs {
  std::string data_dir;
  std::string strategy = "pca";
  int window = 5;
  std::string diagonal = "tl-br";
  std::string out_path;
  bool use_tracker = false;
  double iou_threshold = 0.5;
  int max_gap = 10;
  std::string spec_db;
  std::string config_path;
};

int run_reconstruct(ReconstructArgs args, const CLI::App* cmd) {
  if (!args.config_path.empty()) {
    // Values from the pipeline config file; explicitly passed flags win.
    const auto j = nlohmann::ordered_json::parse(std::ifstream(args.config_path));
    const auto take = [&](const char* flag, const char* key, auto& slot) {
      if (cmd->count(flag) == 0 && j.contains(key))
        slot = j[key].get<std::decay_t<decltype(slot)>>();
    };
    take("--strategy", "strategy", args.strategy);
    take("--window", "window", args.window);
    take("--diagonal", "diagonal", args.diagonal);
    take("--use-tracker", "use_tracker", args.use_tracker);
    take("--iou-threshold", "iou_threshold", args.iou_threshold);
    take("--max-gap", "max_gap", args.max_gap);
    take("--out", "output", args.out_path);
    if (args.data_dir.empty() && j.contains("input_dir"))
      args.data_dir = j["input_dir"].get<std::string>();
  }
  if (args.data_dir.empty())
    throw InvalidSpec("no data directory given (argument or config input_dir)");
  require_odd_window(args.window);

  ReconstructionOptions options;
  options.strategy = strategy_from_string(args.strategy);
  options.window = args.window;
  if (args.diagonal == "bl-tr")
    options.diagonal = DiagonalDirection::BottomLeftToTopRight;
  else if (args.diagonal != "tl-br")
    throw InvalidSpec("--diagonal must be tl-br or bl-tr, got '" +
                      args.diagonal + "'");
  options.use_tracker = args.use_tracker;
  options.association.iou_threshold = args.iou_threshold;
  options.association.max_gap = args.max_gap;

  const Dataset dataset = load_dataset(args.data_dir);
  const SpecDatabase specs = resolve_spec_database(args.spec_db);

  // Reconstruct track by track so one unknown class does not abort the rest.
  std::vector<Trajectory3D> trajectories;
  int failures = 0;
  if (options.use_tracker) {
    trajectories = reconstruct_dataset(dataset, options, specs);
  } else {
    for (const Track& track : tracks_from_gt_boxes(dataset.gt_boxes)) {
      Dataset single = dataset;
      single.gt_boxes.clear();
      for (const auto& r : dataset.gt_boxes)
        if (r.id == track.id) single.gt_boxes.push_back(r);
      try {
        auto part = reconstruct_dataset(single, options, specs);
        trajectories.insert(trajectories.end(), part.begin(), part.end());
      } catch (const UnknownClass& e) {
        std::cerr << "warning: track " << track.id << ": " << e.what()
                  << " (skipped)\n";
        ++failures;
      }
    }
    if (trajectories.empty() && failures > 0)
      throw UnknownClass("no track could be reconstructed");
  }

  const fs::path out = args.out_path.empty()
                           ? fs::path(args.data_dir) / "trajectory.csv"
                           : fs::path(args.out_path);
  write_trajectories_csv(out, trajectories);

  std::size_t rows = 0;
  for (const auto& t : trajectories) rows += t.points.size();
  std::cout << "wrote " << rows << " rows (" << trajectories.size()
            << " track(s)) -> " << out.string() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------- evaluate ---

struct EvaluateArgs {
  std::vector<std::string> data_dirs;
  std::string pred_path;
  bool all_strategies = false;
  int window = 5;
  std::string out_path;
  std::string spec_db;
  int jobs = 1;
};

std::vector<fs::path> expand_sequence_dirs(
    const std::vector<std::string>& dirs) {
  std::vector<fs::path> out;
  for (const auto& d : dirs) {
    const fs::path p(d);
    if (fs::exists(p / "gt_trajectory.csv")) {
      out.push_back(p);
      continue;
    }
    // A root directory: pick up every child sequence, in name order.
    std::vector<fs::path> children;
    if (fs::is_directory(p))
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_directory() &&
            fs::exists(entry.path() / "gt_trajectory.csv"))
          children.push_back(entry.path());
    std::sort(children.begin(), children.end());
    if (children.empty())
      throw IoFailure("no ground truth found under: " + p.string());
    out.insert(out.end(), children.begin(), children.end());
  }
  return out;
}

int run_evaluate_pred(const EvaluateArgs& args) {
  if (args.data_dirs.size() != 1)
    throw InvalidSpec("--pred evaluation takes exactly one data directory");
  const Dataset dataset = load_dataset(args.data_dirs[0]);
  const auto pred = read_trajectories_csv(args.pred_path);

  std::map<int, const Trajectory3D*> pred_by_id;
  for (const auto& t : pred) pred_by_id[t.track_id] = &t;

  nlohmann::ordered_json per_track = nlohmann::ordered_json::object();
  double abs_sum = 0.0, sq_sum = 0.0;
  long n = 0;
  std::printf("%-8s %12s %12s %10s\n", "track", "MAE(mm)", "RMSE(mm)",
              "frames");
  for (const auto& gt : dataset.gt_trajectories) {
    const auto it = pred_by_id.find(gt.track_id);
    if (it == pred_by_id.end())
      throw NoOverlap("no predicted trajectory for ground-truth id " +
                      std::to_string(gt.track_id));
    const TrajectoryErrorReport r = trajectory_error(gt, *it->second);
    per_track[std::to_string(gt.track_id)] = {{"mae_mm", r.mae_mm},
                                              {"rmse_mm", r.rmse_mm},
                                              {"matched_frames",
                                               r.matched_frames}};
    abs_sum += r.mae_mm * r.matched_frames;
    sq_sum += r.rmse_mm * r.rmse_mm * r.matched_frames;
    n += r.matched_frames;
    std::printf("%-8d %12.3f %12.3f %10ld\n", gt.track_id, r.mae_mm, r.rmse_mm,
                r.matched_frames);
  }
  const double mae = abs_sum / n;
  const double rmse = std::sqrt(sq_sum / n);
  std::printf("%-8s %12.3f %12.3f %10ld\n", "overall", mae, rmse, n);

  nlohmann::ordered_json j;
  j["sequence"] = dataset.name;
  j["per_track"] = std::move(per_track);
  j["overall"] = {{"mae_mm", mae}, {"rmse_mm", rmse}, {"matched_frames", n}};
  const fs::path out = args.out_path.empty()
                           ? fs::path(args.data_dirs[0]) / "evaluation.json"
                           : fs::path(args.out_path);
  std::ofstream f(out);
  if (!f) throw IoFailure("cannot open for writing: " + out.string());
  f << j.dump(2) << "\n";
  if (!f.good()) throw IoFailure("write failed: " + out.string());
  std::cout << "report -> " << out.string() << "\n";
  return kExitOk;
}

int run_evaluate_strategies(const EvaluateArgs& args) {
  const auto dirs = expand_sequence_dirs(args.data_dirs);
  const std::vector<SegmentStrategy> strategies = {
      SegmentStrategy::Width, SegmentStrategy::Height, SegmentStrategy::Diagonal,
      SegmentStrategy::Pca};
  const SpecDatabase specs = resolve_spec_database(args.spec_db);
  const ComparisonReport report =
      compare_strategies(dirs, strategies, args.window, specs, args.jobs);

  std::printf("%-10s", "sequence");
  for (const auto s : strategies)
    std::printf(" %9s-MAE %8s-RMSE", to_string(s).c_str(),
                to_string(s).c_str());
  std::printf("\n");
  const auto print_row = [&](const std::string& name,
                             const std::map<SegmentStrategy, StrategyScores>&
                                 scores) {
    std::printf("%-10s", name.c_str());
    for (const auto s : strategies)
      std::printf(" %13.3f %13.3f", scores.at(s).mae_mm, scores.at(s).rmse_mm);
    std::printf("\n");
  };
  for (const auto& seq : report.sequences) print_row(seq.name, seq.strategies);
  print_row("average", report.average);

  const fs::path out = args.out_path.empty()
                           ? fs::path(args.data_dirs[0]) / "comparison.json"
                           : fs::path(args.out_path);
  std::ofstream f(out);
  if (!f) throw IoFailure("cannot open for writing: " + out.string());
  f << comparison_report_json(report);
  if (!f.good()) throw IoFailure("write failed: " + out.string());
  std::cout << "report -> " << out.string() << "\n";
  return kExitOk;
}

int run_evaluate(const EvaluateArgs& args) {
  require_odd_window(args.window);
  if (args.all_strategies) return run_evaluate_strategies(args);
  if (args.pred_path.empty())
    throw InvalidSpec("evaluate needs --pred FILE or --all-strategies");
  return run_evaluate_pred(args);
}

// --------------------------------------------------------------- plot ---

struct PlotArgs {
  std::vector<std::string> traj_paths;
  std::string gt_path;
  std::string out_path;
};

int run_plot(const PlotArgs& args) {
  std::vector<PlotSeries> series;
  const auto add_file = [&](const std::string& path, const std::string& tag) {
    const auto trajectories = read_trajectories_csv(path);
    if (trajectories.empty())
      throw ParseError(path + ": no trajectory points");
    for (const auto& t : trajectories) {
      PlotSeries s;
      s.label = tag + " id" + std::to_string(t.track_id) + " (" + t.cls + ")";
      for (const auto& p : t.points) s.points.push_back(p.position);
      series.push_back(std::move(s));
    }
  };
  if (!args.gt_path.empty()) add_file(args.gt_path, "gt");
  for (const auto& p : args.traj_paths)
    add_file(p, fs::path(p).stem().string());

  write_trajectory_svg(args.out_path, series);
  std::cout << "wrote " << args.out_path << " (" << series.size()
            << " series)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D drone trajectory reconstruction from a single camera"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic scenario dataset");
  auto* builtin_opt = simulate->add_option(
      "--builtin", sim.builtin, "Builtin scenario name (seq01..seq09) or 'all'");
  simulate->add_option("--config", sim.config_path,
                       "Scenario config JSON")->excludes(builtin_opt);
  simulate->add_option("-o,--out", sim.out_dir, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Override the scenario RNG seed");
  simulate->add_option("--jobs", sim.jobs, "Parallel scenario generation");

  ReconstructArgs rec;
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "Reconstruct 3D trajectories from a scenario directory");
  reconstruct->add_option("data_dir", rec.data_dir,
                          "Directory with camera.json, gt_boxes.csv, masks/");
  reconstruct->add_option("--strategy", rec.strategy,
                          "Segment strategy: pca|width|height|diagonal");
  reconstruct->add_option("--window", rec.window,
                          "Smoothing window (odd, >= 1)");
  reconstruct->add_option("--diagonal", rec.diagonal,
                          "Diagonal baseline direction: tl-br|bl-tr");
  reconstruct->add_option("-o,--out", rec.out_path,
                          "Output CSV (default: DATA_DIR/trajectory.csv)");
  reconstruct->add_flag("--use-tracker", rec.use_tracker,
                        "Associate detections instead of trusting gt ids");
  reconstruct->add_option("--iou-threshold", rec.iou_threshold,
                          "Tracker association IoU threshold");
  reconstruct->add_option("--max-gap", rec.max_gap,
                          "Frames a track survives unmatched");
  reconstruct->add_option("--spec-db", rec.spec_db,
                          "Spec database JSON (default: MONOTRAJ_SPEC_DB)");
  reconstruct->add_option("--config", rec.config_path,
                          "Pipeline config JSON; explicit flags win");

  EvaluateArgs ev;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score trajectories against ground truth");
  evaluate->add_option("data_dir", ev.data_dirs,
                       "Sequence directory (or root of sequences)")
      ->required();
  evaluate->add_option("--pred", ev.pred_path, "Predicted trajectory CSV");
  evaluate->add_flag("--all-strategies", ev.all_strategies,
                     "Reconstruct and compare all four strategies");
  evaluate->add_option("--window", ev.window, "Smoothing window (odd, >= 1)");
  evaluate->add_option("-o,--out", ev.out_path, "Report JSON path");
  evaluate->add_option("--spec-db", ev.spec_db,
                       "Spec database JSON (default: MONOTRAJ_SPEC_DB)");
  evaluate->add_option("--jobs", ev.jobs, "Parallel sequence evaluation");

  PlotArgs plot;
  CLI::App* plot_cmd = app.add_subcommand(
      "plot", "Render trajectories as a three-view SVG");
  plot_cmd->add_option("trajectories", plot.traj_paths, "Trajectory CSV files");
  plot_cmd->add_option("--gt", plot.gt_path, "Ground-truth trajectory CSV");
  plot_cmd->add_option("-o,--out", plot.out_path, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (reconstruct->parsed()) return run_reconstruct(rec, reconstruct);
    if (evaluate->parsed()) return run_evaluate(ev);
    if (plot_cmd->parsed()) return run_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
