#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ftc/errors.hpp"

namespace ftc {

/// Chart used to push planar attractor points onto a manifold.
enum class ChartKind { Identity, Sphere, Torus };

inline std::string chart_name(ChartKind c) {
  switch (c) {
    case ChartKind::Sphere: return "sphere";
    case ChartKind::Torus: return "torus";
    default: return "identity";
  }
}

inline ChartKind chart_from_name(const std::string& s) {
  if (s == "sphere") return ChartKind::Sphere;
  if (s == "torus") return ChartKind::Torus;
  if (s == "identity" || s.empty()) return ChartKind::Identity;
  throw model_error("unknown chart '" + s + "'");
}

/// Inverse stereographic projection D^2 -> upper hemisphere of S^2:
/// y -> (2 y_1, 2 y_2, 1 - |y|^2) / (|y|^2 + 1).  Requires |y| < 1.
inline std::array<double, 3> sphere_lift(double y1, double y2) {
  const double n2 = y1 * y1 + y2 * y2;
  if (!(n2 < 1.0)) throw model_error("point outside the open unit disk");
  const double s = 1.0 / (n2 + 1.0);
  return {2.0 * y1 * s, 2.0 * y2 * s, (1.0 - n2) * s};
}

/// Stereographic projection of the upper hemisphere back to the disk:
/// (x_1, x_2, x_3) -> (x_1, x_2) / (1 + x_3).
inline std::array<double, 2> sphere_project(const std::array<double, 3>& p) {
  return {p[0] / (1.0 + p[2]), p[1] / (1.0 + p[2])};
}

/// Torus quotient map R^2 -> [0,1)^2 (coordinates mod 1).
inline std::array<double, 2> torus_reduce(double x, double y) {
  auto wrap = [](double v) {
    double f = v - std::floor(v);
    if (f >= 1.0) f = 0.0; // guards against floor rounding at exact integers
    return f;
  };
  return {wrap(x), wrap(y)};
}

} // namespace ftc
