#pragma once

#include <string>

#include "monotraj/errors.hpp"

namespace monotraj {

// Drone model label, e.g. "Air2S". Open set: the spec database may be
// extended with classes beyond the builtin four.
using DroneClass = std::string;

// How the 2D endpoint pair (p1, p2) is derived from a tracked box.
enum class SegmentStrategy { Pca, Width, Height, Diagonal };

inline std::string to_string(SegmentStrategy s) {
  switch (s) {
    case SegmentStrategy::Pca: return "pca";
    case SegmentStrategy::Width: return "width";
    case SegmentStrategy::Height: return "height";
    case SegmentStrategy::Diagonal: return "diagonal";
  }
  return "unknown";
}

inline SegmentStrategy strategy_from_string(const std::string& s) {
  if (s == "pca") return SegmentStrategy::Pca;
  if (s == "width") return SegmentStrategy::Width;
  if (s == "height") return SegmentStrategy::Height;
  if (s == "diagonal") return SegmentStrategy::Diagonal;
  throw ParseError("unknown segment strategy: '" + s + "'");
}

}  // namespace monotraj
