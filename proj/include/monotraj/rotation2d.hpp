#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "monotraj/camera.hpp"
#include "monotraj/geometry.hpp"
#include "monotraj/types.hpp"

namespace monotraj {

/// Binary occupancy grid, row-major, 1 = foreground. Pixel (x, y) is the
/// lattice point at integer image coordinates (x, y); no half-pixel offset
/// is applied anywhere downstream.
struct ForegroundMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  ForegroundMask() = default;
  ForegroundMask(int w, int h)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool fg = true) {
    bits[static_cast<std::size_t>(y) * width + x] = fg ? 1 : 0;
  }
  std::size_t foreground_count() const;
};

/// Population (1/K) covariance of foreground pixel coordinates.
struct Covariance2 {
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
};

struct PrincipalAxis {
  Vec2 direction;      // unit eigenvector of the larger eigenvalue
  double eigenvalue;   // the larger eigenvalue
  double anisotropy;   // larger/smaller eigenvalue; +inf when smaller == 0
};

/// Chord endpoints; for box-derived segments both lie on the box boundary.
struct PrincipalSegment {
  ImagePoint p1;
  ImagePoint p2;
};

Covariance2 point_covariance(std::span<const Vec2> points);

// Throws DegenerateMask when fewer than two foreground pixels exist.
Covariance2 mask_covariance(const ForegroundMask& mask);

// Closed-form symmetric 2x2 eigendecomposition. The direction sign is
// normalized to direction.x > 0 (or direction.y > 0 when direction.x == 0)
// purely to make results reproducible; the segment is unordered downstream.
// Throws IsotropicMask when the eigenvalues are equal to relative 1e-6.
PrincipalAxis principal_axis(const Covariance2& cov);

// Intersections of the line through the box center along `direction` with
// the box boundary; p1 carries the smaller line parameter.
PrincipalSegment box_line_intersection(const BoundingBox& box,
                                       const Vec2& direction);

// PCA over the mask pixels that fall inside the box (absolute image
// coordinates), intersected with the box boundary.
// Propagates DegenerateMask / IsotropicMask.
PrincipalSegment estimate_principal_segment(const ForegroundMask& mask,
                                            const BoundingBox& box);

// Which box diagonal the diagonal baseline runs along.
enum class DiagonalDirection { TopLeftToBottomRight, BottomLeftToTopRight };

// Width: midpoints of the left/right edges. Height: midpoints of the
// top/bottom edges. Diagonal: two opposite corners, top-left to bottom-right
// unless configured otherwise.
PrincipalSegment baseline_segment(
    const BoundingBox& box, SegmentStrategy mode,
    DiagonalDirection diagonal = DiagonalDirection::TopLeftToBottomRight);

}  // namespace monotraj
