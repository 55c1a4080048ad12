#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/similitude.hpp"

namespace ftc {

/// Open convex region of R^n with exact vertices.  For n == 2 the boundary
/// is a strictly convex polygon listed counter-clockwise (no three collinear
/// vertices); for n == 1 an open interval stored as {lo, hi}.  The value
/// represents the OPEN region: two regions whose closures merely touch do
/// not overlap.
class ConvexPolygon {
public:
  ConvexPolygon(int dim, std::vector<Point> vertices)
      : dim_(dim), verts_(std::move(vertices)) {
    validate();
  }

  static ConvexPolygon interval(QuadScalar lo, QuadScalar hi) {
    return ConvexPolygon(1, {Point{std::move(lo)}, Point{std::move(hi)}});
  }
  static ConvexPolygon box(const QuadScalar& x0, const QuadScalar& y0, const QuadScalar& x1,
                           const QuadScalar& y1) {
    return ConvexPolygon(2, {Point{x0, y0}, Point{x1, y0}, Point{x1, y1}, Point{x0, y1}});
  }

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return verts_; }

  /// Exact image polygon; orientation restored to CCW when the orthogonal
  /// part reverses it.
  ConvexPolygon map_through(const Similitude& f) const {
    std::vector<Point> v;
    v.reserve(verts_.size());
    for (const auto& p : verts_) v.push_back(f.apply(p));
    if (dim_ == 2 && f.det_orthogonal().sign() < 0) std::reverse(v.begin(), v.end());
    ConvexPolygon out(dim_, std::move(v));
    return out;
  }

  Point centroid() const {
    Point c(dim_, QuadScalar(0));
    for (const auto& p : verts_)
      for (int k = 0; k < dim_; ++k) c[k] += p[k];
    const QuadScalar n(static_cast<long>(verts_.size()));
    for (auto& x : c) x /= n;
    return c;
  }

  /// Axis-aligned bounding box as (min corner, max corner).
  std::pair<Point, Point> bbox() const {
    Point lo = verts_[0], hi = verts_[0];
    for (const auto& p : verts_)
      for (int k = 0; k < dim_; ++k) {
        if (p[k] < lo[k]) lo[k] = p[k];
        if (p[k] > hi[k]) hi[k] = p[k];
      }
    return {lo, hi};
  }

  /// Point membership in the CLOSED region.
  bool contains_closed(const Point& p) const {
    if (dim_ == 1) return verts_[0][0] <= p[0] && p[0] <= verts_[1][0];
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = verts_[i];
      const Point& b = verts_[(i + 1) % n];
      if (cross(a, b, p).sign() < 0) return false;
    }
    return true;
  }

  /// True iff the open image region of `inner` is contained in this open
  /// region; for convex sets this holds exactly when every vertex of
  /// `inner` lies in the closure.
  bool contains_open_subset(const ConvexPolygon& inner) const {
    for (const auto& p : inner.verts_)
      if (!contains_closed(p)) return false;
    return true;
  }

  /// First vertex of `inner` outside the closure, if any (witness for
  /// invariance failures).
  const Point* outside_witness(const ConvexPolygon& inner) const {
    for (const auto& p : inner.verts_)
      if (!contains_closed(p)) return &p;
    return nullptr;
  }

  /// Decides whether the OPEN regions intersect, i.e. the closed polygons
  /// meet in a set of positive area (positive length for n == 1).
  /// Separating-axis test over the edge normals of both polygons; touching
  /// projections count as separated.
  friend bool open_overlap(const ConvexPolygon& P, const ConvexPolygon& Q) {
    if (P.dim_ != Q.dim_) throw model_error("overlap test across dimensions");
    if (P.dim_ == 1)
      return (P.verts_[0][0] < Q.verts_[1][0]) && (Q.verts_[0][0] < P.verts_[1][0]);
    return !P.separated_along_edges(Q) && !Q.separated_along_edges(P);
  }

private:
  int dim_;
  std::vector<Point> verts_;

  static QuadScalar cross(const Point& a, const Point& b, const Point& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  }

  void validate() {
    if (dim_ == 1) {
      if (verts_.size() != 2 || verts_[0].size() != 1 || verts_[1].size() != 1)
        throw model_error("interval needs exactly two endpoints");
      if (!(verts_[0][0] < verts_[1][0])) throw model_error("interval requires lo < hi");
      return;
    }
    if (dim_ != 2) throw model_error("polygon dimension must be 1 or 2");
    const std::size_t n = verts_.size();
    if (n < 3) throw model_error("polygon needs at least three vertices");
    for (const auto& p : verts_)
      if (p.size() != 2) throw model_error("polygon vertex dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      const QuadScalar turn = cross(verts_[i], verts_[(i + 1) % n], verts_[(i + 2) % n]);
      if (turn.sign() <= 0)
        throw model_error("polygon must be strictly convex and counter-clockwise");
    }
  }

  // Projections of both polygons onto each of this polygon's edge normals;
  // returns true when some axis separates the OPEN regions (projection
  // intervals disjoint or merely touching).
  bool separated_along_edges(const ConvexPolygon& other) const {
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = verts_[i];
      const Point& b = verts_[(i + 1) % n];
      const QuadScalar nx = a[1] - b[1];
      const QuadScalar ny = b[0] - a[0];
      auto range = [&](const ConvexPolygon& poly) {
        QuadScalar lo = nx * poly.verts_[0][0] + ny * poly.verts_[0][1];
        QuadScalar hi = lo;
        for (const auto& p : poly.verts_) {
          QuadScalar v = nx * p[0] + ny * p[1];
          if (v < lo) lo = v;
          if (v > hi) hi = v;
        }
        return std::pair<QuadScalar, QuadScalar>(lo, hi);
      };
      auto [plo, phi] = range(*this);
      auto [qlo, qhi] = range(other);
      if (phi <= qlo || qhi <= plo) return true;
    }
    return false;
  }
};

} // namespace ftc
