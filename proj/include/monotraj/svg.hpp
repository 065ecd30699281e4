#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "monotraj/geometry.hpp"

namespace monotraj {

struct PlotSeries {
  std::string label;
  std::vector<Vec3> points;  // mm, camera coordinates
};

/// Writes a standalone SVG with three orthographic projections (XY, XZ, YZ)
/// of the given trajectories. Each series draws one polyline per panel, a
/// filled circle at its start and a cross at its end, plus a legend entry.
/// Throws InvalidSpec when no series has at least one point.
void write_trajectory_svg(const std::filesystem::path& path,
                          std::span<const PlotSeries> series);

}  // namespace monotraj
