#include "monotraj/rotation2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "monotraj/errors.hpp"

namespace monotraj {

std::size_t ForegroundMask::foreground_count() const {
  std::size_t k = 0;
  for (const auto b : bits) k += b != 0;
  return k;
}

Covariance2 point_covariance(std::span<const Vec2> points) {
  if (points.size() < 2)
    throw DegenerateMask("covariance needs at least two foreground pixels");
  const double k = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  return {sxx / k, sxy / k, syy / k, mx, my};
}

Covariance2 mask_covariance(const ForegroundMask& mask) {
  std::vector<Vec2> pts;
  pts.reserve(mask.foreground_count());
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y))
        pts.push_back({static_cast<double>(x), static_cast<double>(y)});
  return point_covariance(pts);
}

PrincipalAxis principal_axis(const Covariance2& cov) {
  const double trace = cov.sxx + cov.syy;
  const double diff = cov.sxx - cov.syy;
  const double disc = std::sqrt(diff * diff / 4.0 + cov.sxy * cov.sxy);
  const double lambda_major = trace / 2.0 + disc;
  const double lambda_minor = trace / 2.0 - disc;

  if ((lambda_major - lambda_minor) / std::max(lambda_major, 1e-12) < 1e-6)
    throw IsotropicMask("principal direction undefined: equal eigenvalues");

  Vec2 dir;
  if (cov.sxy != 0.0) {
    // Pick the eigenvector expression with the larger norm for stability.
    const Vec2 a{lambda_major - cov.syy, cov.sxy};
    const Vec2 b{cov.sxy, lambda_major - cov.sxx};
    dir = (a.norm() >= b.norm() ? a : b).normalized();
  } else {
    dir = cov.sxx >= cov.syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  }
  if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) dir = dir * -1.0;

  const double anisotropy =
      lambda_minor > 0.0 ? lambda_major / lambda_minor
                         : std::numeric_limits<double>::infinity();
  return {dir, lambda_major, anisotropy};
}

PrincipalSegment box_line_intersection(const BoundingBox& box,
                                       const Vec2& direction) {
  // The line passes through the center, so the two boundary crossings are
  // symmetric at parameter +-s.
  const double inf = std::numeric_limits<double>::infinity();
  const double sx =
      direction.x != 0.0 ? (box.w / 2.0) / std::abs(direction.x) : inf;
  const double sy =
      direction.y != 0.0 ? (box.h / 2.0) / std::abs(direction.y) : inf;
  const double s = std::min(sx, sy);
  return {{box.cx - s * direction.x, box.cy - s * direction.y},
          {box.cx + s * direction.x, box.cy + s * direction.y}};
}

PrincipalSegment estimate_principal_segment(const ForegroundMask& mask,
                                            const BoundingBox& box) {
  // Only pixels inside the box participate in the PCA.
  const double eps = 1e-9;
  const int x0 = std::max(0, static_cast<int>(std::ceil(box.left() - eps)));
  const int x1 = std::min(mask.width - 1,
                          static_cast<int>(std::floor(box.right() + eps)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(box.top() - eps)));
  const int y1 = std::min(mask.height - 1,
                          static_cast<int>(std::floor(box.bottom() + eps)));

  std::vector<Vec2> pts;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (mask.at(x, y))
        pts.push_back({static_cast<double>(x), static_cast<double>(y)});

  const Covariance2 cov = point_covariance(pts);
  const PrincipalAxis axis = principal_axis(cov);
  return box_line_intersection(box, axis.direction);
}

PrincipalSegment baseline_segment(const BoundingBox& box, SegmentStrategy mode,
                                  DiagonalDirection diagonal) {
  switch (mode) {
    case SegmentStrategy::Width:
      return {{box.left(), box.cy}, {box.right(), box.cy}};
    case SegmentStrategy::Height:
      return {{box.cx, box.top()}, {box.cx, box.bottom()}};
    case SegmentStrategy::Diagonal:
      if (diagonal == DiagonalDirection::BottomLeftToTopRight)
        return {{box.left(), box.bottom()}, {box.right(), box.top()}};
      return {{box.left(), box.top()}, {box.right(), box.bottom()}};
    case SegmentStrategy::Pca:
      break;
  }
  throw std::invalid_argument("baseline_segment: mode must be a baseline");
}

}  // namespace monotraj
