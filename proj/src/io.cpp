#include "monotraj/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "monotraj/errors.hpp"
#include "monotraj/simulator.hpp"

namespace monotraj {

namespace {

using OrderedJson = nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoFailure("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoFailure("cannot open for reading: " + path.string());
  return in;
}

void check_write(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out.good()) throw IoFailure("write failed: " + path.string());
}

// Fixed 6-decimal formatting keeps CSV output byte-reproducible.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path.string() + ": bad number '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path.string() + ": bad integer '" + s + "'");
  }
}

// Reads a CSV file, checks the exact header, returns data rows split into
// fields (empty lines skipped).
std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path, const std::string& expected_header,
    std::size_t num_fields) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw ParseError(path.string() + ": expected header '" + expected_header +
                     "', got '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != num_fields)
      throw ParseError(path.string() + ": expected " +
                       std::to_string(num_fields) + " fields, got " +
                       std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

const OrderedJson& require_field(const OrderedJson& obj, const std::string& key,
                                 const std::filesystem::path& path) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(path.string() + ": missing field '" + key + "'");
  return *it;
}

double require_number(const OrderedJson& obj, const std::string& key,
                      const std::filesystem::path& path) {
  const auto& v = require_field(obj, key, path);
  if (!v.is_number())
    throw ParseError(path.string() + ": field '" + key + "' must be a number");
  return v.get<double>();
}

OrderedJson parse_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return OrderedJson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Vec3 vec3_from_json(const OrderedJson& arr, const std::string& key,
                    const std::filesystem::path& path) {
  if (!arr.is_array() || arr.size() != 3)
    throw ParseError(path.string() + ": field '" + key +
                     "' must be an array of 3 numbers");
  return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace

// ---------------------------------------------------------------- masks ---

std::string mask_filename(int frame, int id) {
  return "frame" + std::to_string(frame) + "_id" + std::to_string(id) + ".pgm";
}

void write_pgm(const std::filesystem::path& path, const ForegroundMask& mask) {
  auto out = open_out(path, /*binary=*/true);
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<unsigned char> row(mask.width);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) row[x] = mask.at(x, y) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  check_write(out, path);
}

ForegroundMask read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path, /*binary=*/true);
  // Header tokens may be separated by whitespace and '#' comments.
  const auto next_token = [&]() -> std::string {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
      if (c == '#') {
        while ((c = in.get()) != EOF && c != '\n') {
        }
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    return tok;
  };

  if (next_token() != "P5")
    throw ParseError(path.string() + ": not a binary PGM (P5) file");
  const int width = parse_int(next_token(), path);
  const int height = parse_int(next_token(), path);
  const int maxval = parse_int(next_token(), path);
  if (width <= 0 || height <= 0 || maxval != 255)
    throw ParseError(path.string() + ": unsupported PGM geometry");

  ForegroundMask mask(width, height);
  std::vector<unsigned char> row(width);
  for (int y = 0; y < height; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), width);
    if (in.gcount() != width)
      throw ParseError(path.string() + ": truncated pixel data");
    for (int x = 0; x < width; ++x) mask.set(x, y, row[x] != 0);
  }
  return mask;
}

// --------------------------------------------------------------- camera ---

void write_camera_json(const std::filesystem::path& path,
                       const CameraIntrinsics& intrinsics,
                       const CameraExtrinsics& extrinsics) {
  OrderedJson j;
  j["fx"] = intrinsics.fx;
  j["fy"] = intrinsics.fy;
  j["cx"] = intrinsics.cx;
  j["cy"] = intrinsics.cy;
  j["skew"] = intrinsics.skew;
  j["rotation"] = extrinsics.rotation.m;
  j["translation"] = {extrinsics.translation.x, extrinsics.translation.y,
                      extrinsics.translation.z};
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  check_write(out, path);
}

std::pair<CameraIntrinsics, CameraExtrinsics> read_camera_json(
    const std::filesystem::path& path) {
  const OrderedJson j = parse_json_file(path);
  CameraIntrinsics intr;
  intr.fx = require_number(j, "fx", path);
  intr.fy = require_number(j, "fy", path);
  intr.cx = require_number(j, "cx", path);
  intr.cy = require_number(j, "cy", path);
  intr.skew = j.contains("skew") ? j["skew"].get<double>() : 0.0;
  intr.validate();

  CameraExtrinsics ext;
  const auto& rot = require_field(j, "rotation", path);
  if (!rot.is_array() || rot.size() != 9)
    throw ParseError(path.string() +
                     ": field 'rotation' must be 9 row-major numbers");
  for (int i = 0; i < 9; ++i) ext.rotation.m[i] = rot[i].get<double>();
  ext.translation =
      vec3_from_json(require_field(j, "translation", path), "translation",
                     path);
  ext.validate();
  return {intr, ext};
}

// -------------------------------------------------------- spec database ---

SpecDatabase read_spec_database_json(const std::filesystem::path& path) {
  const OrderedJson j = parse_json_file(path);
  if (!j.is_object())
    throw ParseError(path.string() + ": spec database must be a JSON object");
  SpecDatabase db;
  for (const auto& [cls, entry] : j.items()) {
    DroneSpec spec;
    spec.cls = cls;
    spec.width_mm = require_number(entry, "width_mm", path);
    spec.depth_mm = require_number(entry, "depth_mm", path);
    spec.height_mm = require_number(entry, "height_mm", path);
    db.add(spec);
  }
  return db;
}

void write_spec_database_json(const std::filesystem::path& path,
                              const SpecDatabase& db) {
  OrderedJson j = OrderedJson::object();
  for (const auto& cls : db.classes()) {
    const DroneSpec& spec = db.lookup(cls);
    j[cls] = {{"width_mm", spec.width_mm},
              {"depth_mm", spec.depth_mm},
              {"height_mm", spec.height_mm}};
  }
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  check_write(out, path);
}

// ------------------------------------------------------------------ CSV ---

void write_detections_csv(const std::filesystem::path& path,
                          std::span<const Detection> detections) {
  auto out = open_out(path);
  out << "frame,cx,cy,w,h,class,score\n";
  for (const auto& d : detections)
    out << d.frame << "," << fmt(d.box.cx) << "," << fmt(d.box.cy) << ","
        << fmt(d.box.w) << "," << fmt(d.box.h) << "," << d.cls << ","
        << fmt(d.score) << "\n";
  check_write(out, path);
}

std::vector<Detection> read_detections_csv(const std::filesystem::path& path) {
  std::vector<Detection> out;
  for (const auto& f : read_csv(path, "frame,cx,cy,w,h,class,score", 7)) {
    Detection d;
    d.frame = parse_int(f[0], path);
    d.box = {parse_double(f[1], path), parse_double(f[2], path),
             parse_double(f[3], path), parse_double(f[4], path)};
    d.cls = f[5];
    d.score = parse_double(f[6], path);
    if (!(d.box.w > 0.0) || !(d.box.h > 0.0))
      throw ParseError(path.string() + ": box extents must be positive");
    out.push_back(std::move(d));
  }
  return out;
}

void write_tracks_csv(const std::filesystem::path& path,
                      std::span<const Track> tracks) {
  auto out = open_out(path);
  out << "frame,id,cx,cy,w,h,class\n";
  for (const auto& t : tracks)
    for (const auto& s : t.states)
      out << s.frame << "," << t.id << "," << fmt(s.box.cx) << ","
          << fmt(s.box.cy) << "," << fmt(s.box.w) << "," << fmt(s.box.h) << ","
          << t.cls << "\n";
  check_write(out, path);
}

std::vector<Track> read_tracks_csv(const std::filesystem::path& path) {
  std::map<int, Track> by_id;
  for (const auto& f : read_csv(path, "frame,id,cx,cy,w,h,class", 7)) {
    const int frame = parse_int(f[0], path);
    const int id = parse_int(f[1], path);
    Track& t = by_id[id];
    t.id = id;
    t.cls = f[6];
    t.states.push_back({frame,
                        {parse_double(f[2], path), parse_double(f[3], path),
                         parse_double(f[4], path), parse_double(f[5], path)}});
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

void write_gt_boxes_csv(const std::filesystem::path& path,
                        std::span<const TrackedBox> rows) {
  auto out = open_out(path);
  out << "frame,id,class,cx,cy,w,h\n";
  for (const auto& r : rows)
    out << r.frame << "," << r.id << "," << r.cls << "," << fmt(r.box.cx)
        << "," << fmt(r.box.cy) << "," << fmt(r.box.w) << "," << fmt(r.box.h)
        << "\n";
  check_write(out, path);
}

std::vector<TrackedBox> read_gt_boxes_csv(const std::filesystem::path& path) {
  std::vector<TrackedBox> out;
  for (const auto& f : read_csv(path, "frame,id,class,cx,cy,w,h", 7)) {
    TrackedBox r;
    r.frame = parse_int(f[0], path);
    r.id = parse_int(f[1], path);
    r.cls = f[2];
    r.box = {parse_double(f[3], path), parse_double(f[4], path),
             parse_double(f[5], path), parse_double(f[6], path)};
    if (!(r.box.w > 0.0) || !(r.box.h > 0.0))
      throw ParseError(path.string() + ": box extents must be positive");
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

void write_trajectory_rows(std::ofstream& out,
                           std::span<const Trajectory3D> trajectories,
                           bool with_derived) {
  for (const auto& t : trajectories)
    for (const auto& p : t.points) {
      out << p.frame << "," << t.track_id << "," << t.cls << ","
          << fmt(p.position.x) << "," << fmt(p.position.y) << ","
          << fmt(p.position.z);
      if (with_derived)
        out << "," << fmt(p.distance_mm) << "," << fmt(p.theta_rad);
      out << "\n";
    }
}

}  // namespace

void write_gt_trajectory_csv(const std::filesystem::path& path,
                             std::span<const Trajectory3D> trajectories) {
  auto out = open_out(path);
  out << "frame,id,class,x_mm,y_mm,z_mm\n";
  write_trajectory_rows(out, trajectories, /*with_derived=*/false);
  check_write(out, path);
}

void write_trajectories_csv(const std::filesystem::path& path,
                            std::span<const Trajectory3D> trajectories) {
  auto out = open_out(path);
  out << "frame,id,class,x_mm,y_mm,z_mm,distance_mm,theta_rad\n";
  write_trajectory_rows(out, trajectories, /*with_derived=*/true);
  check_write(out, path);
}

std::vector<Trajectory3D> read_trajectories_csv(
    const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header))
    throw ParseError(path.string() + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  bool with_derived;
  if (header == "frame,id,class,x_mm,y_mm,z_mm")
    with_derived = false;
  else if (header == "frame,id,class,x_mm,y_mm,z_mm,distance_mm,theta_rad")
    with_derived = true;
  else
    throw ParseError(path.string() + ": unrecognized trajectory header '" +
                     header + "'");

  std::map<int, Trajectory3D> by_id;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    const std::size_t expected = with_derived ? 8 : 6;
    if (f.size() != expected)
      throw ParseError(path.string() + ": expected " +
                       std::to_string(expected) + " fields, got " +
                       std::to_string(f.size()));
    TrajectoryPoint3D p;
    p.frame = parse_int(f[0], path);
    const int id = parse_int(f[1], path);
    p.position = {parse_double(f[3], path), parse_double(f[4], path),
                  parse_double(f[5], path)};
    if (with_derived) {
      p.distance_mm = parse_double(f[6], path);
      p.theta_rad = parse_double(f[7], path);
    } else {
      p.distance_mm = p.position.norm();
    }
    Trajectory3D& t = by_id[id];
    t.track_id = id;
    t.cls = f[2];
    t.points.push_back(p);
  }

  std::vector<Trajectory3D> out;
  for (auto& [id, t] : by_id) {
    std::sort(t.points.begin(), t.points.end(),
              [](const TrajectoryPoint3D& a, const TrajectoryPoint3D& b) {
                return a.frame < b.frame;
              });
    out.push_back(std::move(t));
  }
  return out;
}

// ------------------------------------------------------- scenario config ---

void write_scenario_config_json(const std::filesystem::path& path,
                                const ScenarioConfig& config) {
  OrderedJson j;
  j["name"] = config.name;
  j["intrinsics"] = {{"fx", config.intrinsics.fx},
                     {"fy", config.intrinsics.fy},
                     {"cx", config.intrinsics.cx},
                     {"cy", config.intrinsics.cy},
                     {"skew", config.intrinsics.skew}};
  j["image_size"] = {config.image_size.width, config.image_size.height};
  j["fps"] = config.fps;
  j["rng_seed"] = config.rng_seed;
  j["drones"] = OrderedJson::array();
  for (const auto& d : config.drones) {
    OrderedJson m;
    m["kind"] = to_string(d.motion.kind);
    m["frames"] = d.motion.frames;
    if (d.motion.kind == MotionKind::LinearAxis)
      m["axis"] = std::string(1, d.motion.axis);
    if (d.motion.kind == MotionKind::LinearAxis ||
        d.motion.kind == MotionKind::Linear3d) {
      m["start"] = {d.motion.start.x, d.motion.start.y, d.motion.start.z};
      m["end"] = {d.motion.end.x, d.motion.end.y, d.motion.end.z};
    } else {
      auto pts = OrderedJson::array();
      for (const auto& p : d.motion.control_points)
        pts.push_back({p.x, p.y, p.z});
      m["control_points"] = std::move(pts);
    }
    m["yaw_rate"] = d.motion.yaw_rate;
    m["pitch_rate"] = d.motion.pitch_rate;
    m["roll_rate"] = d.motion.roll_rate;
    j["drones"].push_back({{"class", d.cls}, {"motion", std::move(m)}});
  }
  auto out = open_out(path);
  out << j.dump(2) << "\n";
  check_write(out, path);
}

ScenarioConfig read_scenario_config_json(const std::filesystem::path& path) {
  const OrderedJson j = parse_json_file(path);
  ScenarioConfig config;
  config.name = require_field(j, "name", path).get<std::string>();

  const auto& intr = require_field(j, "intrinsics", path);
  config.intrinsics.fx = require_number(intr, "fx", path);
  config.intrinsics.fy = require_number(intr, "fy", path);
  config.intrinsics.cx = require_number(intr, "cx", path);
  config.intrinsics.cy = require_number(intr, "cy", path);
  config.intrinsics.skew =
      intr.contains("skew") ? intr["skew"].get<double>() : 0.0;
  config.intrinsics.validate();

  const auto& size = require_field(j, "image_size", path);
  if (!size.is_array() || size.size() != 2)
    throw ParseError(path.string() + ": field 'image_size' must be [w, h]");
  config.image_size = {size[0].get<int>(), size[1].get<int>()};
  if (config.image_size.width <= 0 || config.image_size.height <= 0)
    throw ParseError(path.string() + ": field 'image_size' must be positive");

  config.fps = static_cast<int>(require_number(j, "fps", path));
  config.rng_seed = j.contains("rng_seed")
                        ? j["rng_seed"].get<std::uint64_t>()
                        : 0;

  const auto& drones = require_field(j, "drones", path);
  if (!drones.is_array() || drones.empty())
    throw ParseError(path.string() +
                     ": field 'drones' must be a non-empty array");
  for (const auto& d : drones) {
    ScenarioDrone sd;
    sd.cls = require_field(d, "class", path).get<std::string>();
    const auto& m = require_field(d, "motion", path);
    sd.motion.kind = motion_kind_from_string(
        require_field(m, "kind", path).get<std::string>());
    sd.motion.frames = static_cast<int>(require_number(m, "frames", path));
    if (sd.motion.kind == MotionKind::LinearAxis) {
      const auto axis = require_field(m, "axis", path).get<std::string>();
      if (axis != "x" && axis != "y" && axis != "z")
        throw ParseError(path.string() + ": field 'axis' must be x, y or z");
      sd.motion.axis = axis[0];
    }
    if (sd.motion.kind == MotionKind::LinearAxis ||
        sd.motion.kind == MotionKind::Linear3d) {
      sd.motion.start =
          vec3_from_json(require_field(m, "start", path), "start", path);
      sd.motion.end = vec3_from_json(require_field(m, "end", path), "end",
                                     path);
    } else {
      const auto& pts = require_field(m, "control_points", path);
      if (!pts.is_array())
        throw ParseError(path.string() +
                         ": field 'control_points' must be an array");
      for (const auto& p : pts)
        sd.motion.control_points.push_back(
            vec3_from_json(p, "control_points", path));
    }
    if (m.contains("yaw_rate")) sd.motion.yaw_rate = m["yaw_rate"].get<double>();
    if (m.contains("pitch_rate"))
      sd.motion.pitch_rate = m["pitch_rate"].get<double>();
    if (m.contains("roll_rate"))
      sd.motion.roll_rate = m["roll_rate"].get<double>();
    config.drones.push_back(std::move(sd));
  }
  return config;
}

}  // namespace monotraj
