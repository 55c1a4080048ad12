#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ftc/chart.hpp"
#include "ftc/errors.hpp"
#include "ftc/system.hpp"

namespace ftc {

/// Rendered point: 1, 2 or 3 coordinates plus the graph component it was
/// generated from (0 for a plain IFS).
struct RenderPoint {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dims = 2;
  int component = 0;
};

namespace detail {

// Double-precision affine copy of a similitude; rendering never feeds back
// into the exact pipeline.
struct Affine {
  int dim = 2;
  double r = 1.0;
  std::array<double, 4> o{1.0, 0.0, 0.0, 1.0};
  std::array<double, 2> t{0.0, 0.0};

  static Affine of(const Similitude& f) {
    Affine a;
    a.dim = f.dim();
    a.r = f.ratio().to_double();
    for (int i = 0; i < a.dim * a.dim; ++i)
      a.o[static_cast<std::size_t>(i)] = f.orthogonal()[static_cast<std::size_t>(i)].to_double();
    for (int i = 0; i < a.dim; ++i)
      a.t[static_cast<std::size_t>(i)] = f.translation()[static_cast<std::size_t>(i)].to_double();
    return a;
  }
  Affine then(const Affine& g) const { // (*this) o g
    Affine c;
    c.dim = dim;
    c.r = r * g.r;
    if (dim == 1) {
      c.o[0] = o[0] * g.o[0];
      c.t[0] = r * o[0] * g.t[0] + t[0];
    } else {
      c.o = {o[0] * g.o[0] + o[1] * g.o[2], o[0] * g.o[1] + o[1] * g.o[3],
             o[2] * g.o[0] + o[3] * g.o[2], o[2] * g.o[1] + o[3] * g.o[3]};
      c.t = {r * (o[0] * g.t[0] + o[1] * g.t[1]) + t[0],
             r * (o[2] * g.t[0] + o[3] * g.t[1]) + t[1]};
    }
    return c;
  }
  std::array<double, 2> apply(const std::array<double, 2>& x) const {
    if (dim == 1) return {r * o[0] * x[0] + t[0], 0.0};
    return {r * (o[0] * x[0] + o[1] * x[1]) + t[0], r * (o[2] * x[0] + o[3] * x[1]) + t[1]};
  }
};

} // namespace detail

/// Depth-first expansion of compositions until each piece's bounding box
/// has diameter <= max_diameter; emits one representative point (image of
/// the component set's centroid) per leaf, tagged by component.
inline std::vector<RenderPoint> generate_points(const System& sys, double max_diameter,
                                                std::size_t leaf_budget = 1000000) {
  if (!(max_diameter > 0.0)) throw model_error("max_diameter must be positive");
  std::vector<double> omega_diam(static_cast<std::size_t>(sys.t), 0.0);
  std::vector<std::array<double, 2>> omega_centroid(static_cast<std::size_t>(sys.t));
  for (int i = 0; i < sys.t; ++i) {
    auto [lo, hi] = sys.omegas[static_cast<std::size_t>(i)].bbox();
    double d2 = 0.0;
    for (int k = 0; k < sys.dim; ++k) {
      const double e = hi[static_cast<std::size_t>(k)].to_double() -
                       lo[static_cast<std::size_t>(k)].to_double();
      d2 += e * e;
    }
    omega_diam[static_cast<std::size_t>(i)] = std::sqrt(d2);
    const Point c = sys.omegas[static_cast<std::size_t>(i)].centroid();
    omega_centroid[static_cast<std::size_t>(i)] = {
        c[0].to_double(), sys.dim == 2 ? c[1].to_double() : 0.0};
  }
  std::vector<detail::Affine> edge_aff;
  edge_aff.reserve(sys.edges.size());
  for (const auto& e : sys.edges) edge_aff.push_back(detail::Affine::of(e.map));

  std::vector<RenderPoint> out;
  auto walk = [&](auto&& self, const detail::Affine& a, int j, int component) -> void {
    if (a.r * omega_diam[static_cast<std::size_t>(j)] <= max_diameter) {
      if (out.size() >= leaf_budget)
        throw resource_error("leaf budget exceeded while rendering (" +
                             std::to_string(leaf_budget) + " points)");
      RenderPoint p;
      const auto img = a.apply(omega_centroid[static_cast<std::size_t>(j)]);
      p.c = {img[0], img[1], 0.0};
      p.dims = sys.dim;
      p.component = component;
      out.push_back(p);
      return;
    }
    for (int e : sys.edges_from(j))
      self(self, a.then(edge_aff[static_cast<std::size_t>(e)]),
           sys.edges[static_cast<std::size_t>(e)].to, component);
  };
  for (int i = 0; i < sys.t; ++i) {
    detail::Affine id;
    id.dim = sys.dim;
    walk(walk, id, i, i);
  }
  return out;
}

/// Applies the chart pointwise.  Sphere lifting requires every input in the
/// open unit disk; failures name the offending point index.
inline std::vector<RenderPoint> chart_push(const std::vector<RenderPoint>& pts, ChartKind chart) {
  std::vector<RenderPoint> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const RenderPoint& p = pts[i];
    RenderPoint q = p;
    switch (chart) {
      case ChartKind::Identity: break;
      case ChartKind::Sphere: {
        try {
          const auto lifted = sphere_lift(p.c[0], p.dims == 2 ? p.c[1] : 0.0);
          q.c = lifted;
          q.dims = 3;
        } catch (const model_error&) {
          throw model_error("point " + std::to_string(i) + " lies outside the sphere chart domain");
        }
        break;
      }
      case ChartKind::Torus: {
        if (p.dims != 2) throw model_error("torus chart needs planar points");
        const auto r = torus_reduce(p.c[0], p.c[1]);
        q.c = {r[0], r[1], 0.0};
        break;
      }
    }
    out.push_back(q);
  }
  return out;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

inline void export_csv(const std::vector<RenderPoint>& pts, bool with_component,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw model_error("cannot open '" + path + "' for writing");
  const int dims = pts.empty() ? 2 : pts[0].dims;
  os << (dims >= 1 ? "x" : "") << (dims >= 2 ? ",y" : "") << (dims >= 3 ? ",z" : "");
  if (with_component) os << ",component";
  os << "\n";
  for (const auto& p : pts) {
    for (int k = 0; k < p.dims; ++k) {
      if (k) os << ",";
      os << detail::fmt_double(p.c[static_cast<std::size_t>(k)]);
    }
    if (with_component) os << "," << p.component + 1;
    os << "\n";
  }
  if (!os) throw model_error("write failed for '" + path + "'");
}

inline void export_ply(const std::vector<RenderPoint>& pts, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw model_error("cannot open '" + path + "' for writing");
  os << "ply\nformat ascii 1.0\nelement vertex " << pts.size()
     << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const auto& p : pts)
    os << detail::fmt_double(p.c[0]) << " " << detail::fmt_double(p.c[1]) << " "
       << detail::fmt_double(p.c[2]) << "\n";
  if (!os) throw model_error("write failed for '" + path + "'");
}

inline void export_svg(const std::vector<RenderPoint>& pts, const std::string& path) {
  for (const auto& p : pts)
    if (p.dims != 2) throw model_error("svg export needs 2-d points");
  double lox = 0.0, loy = 0.0, hix = 1.0, hiy = 1.0;
  if (!pts.empty()) {
    lox = hix = pts[0].c[0];
    loy = hiy = pts[0].c[1];
    for (const auto& p : pts) {
      lox = std::min(lox, p.c[0]);
      hix = std::max(hix, p.c[0]);
      loy = std::min(loy, p.c[1]);
      hiy = std::max(hiy, p.c[1]);
    }
  }
  const double mx = 0.05 * std::max(hix - lox, 1e-9);
  const double my = 0.05 * std::max(hiy - loy, 1e-9);
  lox -= mx;
  hix += mx;
  loy -= my;
  hiy += my;
  const double radius = 0.0015 * std::max(hix - lox, hiy - loy);
  std::ofstream os(path);
  if (!os) throw model_error("cannot open '" + path + "' for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << detail::fmt_double(lox) << " "
     << detail::fmt_double(loy) << " " << detail::fmt_double(hix - lox) << " "
     << detail::fmt_double(hiy - loy) << "\">\n";
  // Flip y so the figure reads with the usual orientation.
  for (const auto& p : pts)
    os << "<circle cx=\"" << detail::fmt_double(p.c[0]) << "\" cy=\""
       << detail::fmt_double(loy + hiy - p.c[1]) << "\" r=\"" << detail::fmt_double(radius)
       << "\"/>\n";
  os << "</svg>\n";
  if (!os) throw model_error("write failed for '" + path + "'");
}

} // namespace ftc
