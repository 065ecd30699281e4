#pragma once

// Oracles and fixtures shared between the unit tests and the acceptance
// suite. Everything here is independent of the library code paths it checks.

#include <cmath>
#include <filesystem>
#include <string>

#include "monotraj/geometry.hpp"
#include "monotraj/rng.hpp"
#include "monotraj/rotation2d.hpp"

namespace testsupport {

// Brute-force major eigenvector of a symmetric 2x2 PSD matrix by power
// iteration; deliberately not the closed form used by the library.
inline monotraj::Vec2 power_iteration_major_axis(double sxx, double sxy,
                                                 double syy,
                                                 int iterations = 8000) {
  monotraj::Vec2 v{0.6, 0.8};
  for (int i = 0; i < iterations; ++i) {
    const monotraj::Vec2 w{sxx * v.x + sxy * v.y, sxy * v.x + syy * v.y};
    const double n = w.norm();
    if (n == 0.0) break;
    v = {w.x / n, w.y / n};
  }
  if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) v = v * -1.0;
  return v;
}

// Random PSD matrix with a guaranteed eigenvalue gap, built from a known
// spectral decomposition.
struct PsdMatrix {
  double sxx, sxy, syy;
  monotraj::Vec2 major;  // constructed major eigenvector
};

inline PsdMatrix random_psd_with_gap(monotraj::Rng& rng) {
  const double l1 = rng.uniform(0.5, 10.0);
  const double l2 = rng.uniform(0.0, 0.9) * l1;
  const double phi = rng.uniform(0.0, 3.14159265358979323846);
  const double c = std::cos(phi), s = std::sin(phi);
  PsdMatrix m;
  m.sxx = l1 * c * c + l2 * s * s;
  m.sxy = (l1 - l2) * c * s;
  m.syy = l1 * s * s + l2 * c * c;
  m.major = {c, s};
  if (m.major.x < 0.0 || (m.major.x == 0.0 && m.major.y < 0.0))
    m.major = m.major * -1.0;
  return m;
}

// Filled bar through (cx, cy) at the given angle, rasterized onto a
// size x size mask.
inline monotraj::ForegroundMask make_bar_mask(int size, double cx, double cy,
                                              double angle_rad,
                                              double half_len,
                                              double half_width) {
  monotraj::ForegroundMask mask(size, size);
  const double dx = std::cos(angle_rad);
  const double dy = std::sin(angle_rad);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double along = (x - cx) * dx + (y - cy) * dy;
      const double across = -(x - cx) * dy + (y - cy) * dx;
      if (std::abs(along) <= half_len && std::abs(across) <= half_width)
        mask.set(x, y);
    }
  return mask;
}

// Angle between two 2D directions modulo pi, in degrees.
inline double direction_error_deg(const monotraj::Vec2& a,
                                  const monotraj::Vec2& b) {
  const double dot = std::abs(a.normalized().dot(b.normalized()));
  return std::acos(std::min(dot, 1.0)) * 180.0 / 3.14159265358979323846;
}

// Scratch directory beneath the test binary's working directory (the ctest
// working dir is on real disk, unlike /tmp in some environments).
inline std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::current_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
