#pragma once

#include <vector>

#include "ftc/errors.hpp"
#include "ftc/quad_scalar.hpp"

namespace ftc {

/// Point of R^n with exact coordinates, n in {1, 2}.
using Point = std::vector<QuadScalar>;

/// Map x -> ratio * O * x + t with exact ratio > 0, exact orthogonal part O
/// (O^T O = I, verified at construction) and exact translation t.
/// Generators of a system are contractive (ratio < 1); composed or
/// normalized maps may have any positive ratio.
class Similitude {
public:
  Similitude(int dim, QuadScalar ratio, std::vector<QuadScalar> orthogonal,
             std::vector<QuadScalar> translation)
      : dim_(dim), ratio_(std::move(ratio)), orth_(std::move(orthogonal)),
        trans_(std::move(translation)) {
    if (dim_ != 1 && dim_ != 2) throw model_error("space dimension must be 1 or 2");
    if (ratio_.sign() <= 0) throw model_error("similitude ratio must be positive");
    if (orth_.size() != static_cast<std::size_t>(dim_ * dim_) ||
        trans_.size() != static_cast<std::size_t>(dim_))
      throw model_error("similitude component size mismatch");
    check_orthogonal();
  }

  static Similitude identity(int dim) {
    return homothety(dim, QuadScalar(1), Point(dim, QuadScalar(0)));
  }

  /// ratio * x + t (identity orthogonal part).
  static Similitude homothety(int dim, QuadScalar ratio, Point translation) {
    std::vector<QuadScalar> o(dim * dim, QuadScalar(0));
    for (int i = 0; i < dim; ++i) o[i * dim + i] = QuadScalar(1);
    return Similitude(dim, std::move(ratio), std::move(o), std::move(translation));
  }

  int dim() const { return dim_; }
  const QuadScalar& ratio() const { return ratio_; }
  const std::vector<QuadScalar>& orthogonal() const { return orth_; }
  const Point& translation() const { return trans_; }

  Point apply(const Point& x) const {
    Point y(dim_, QuadScalar(0));
    for (int r = 0; r < dim_; ++r) {
      QuadScalar acc(0);
      for (int c = 0; c < dim_; ++c) acc += orth_[r * dim_ + c] * x[c];
      y[r] = ratio_ * acc + trans_[r];
    }
    return y;
  }

  /// Exact composition (*this) after g.
  Similitude compose(const Similitude& g) const {
    if (dim_ != g.dim_) throw model_error("composing maps of different dimension");
    std::vector<QuadScalar> o(dim_ * dim_, QuadScalar(0));
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) {
        QuadScalar acc(0);
        for (int k = 0; k < dim_; ++k) acc += orth_[r * dim_ + k] * g.orth_[k * dim_ + c];
        o[r * dim_ + c] = acc;
      }
    return Similitude(dim_, ratio_ * g.ratio_, std::move(o), apply(g.trans_));
  }

  Similitude inverse() const {
    // y = rOx + t  =>  x = (1/r) O^T (y - t)
    QuadScalar inv_r = QuadScalar(1) / ratio_;
    std::vector<QuadScalar> o(dim_ * dim_, QuadScalar(0));
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) o[r * dim_ + c] = orth_[c * dim_ + r];
    Point t(dim_, QuadScalar(0));
    for (int r = 0; r < dim_; ++r) {
      QuadScalar acc(0);
      for (int c = 0; c < dim_; ++c) acc += o[r * dim_ + c] * trans_[c];
      t[r] = -(inv_r * acc);
    }
    return Similitude(dim_, inv_r, std::move(o), std::move(t));
  }

  bool is_identity() const {
    if (!ratio_.is_one()) return false;
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c)
        if (orth_[r * dim_ + c] != QuadScalar(r == c ? 1 : 0)) return false;
    for (const auto& t : trans_)
      if (!t.is_zero()) return false;
    return true;
  }

  QuadScalar det_orthogonal() const {
    if (dim_ == 1) return orth_[0];
    return orth_[0] * orth_[3] - orth_[1] * orth_[2];
  }

  friend bool operator==(const Similitude& f, const Similitude& g) {
    return f.dim_ == g.dim_ && f.ratio_ == g.ratio_ && f.orth_ == g.orth_ && f.trans_ == g.trans_;
  }
  friend bool operator!=(const Similitude& f, const Similitude& g) { return !(f == g); }

  /// Canonical key: equal keys iff the maps are exactly equal as functions.
  std::string key() const {
    std::string k = std::to_string(dim_) + "|" + ratio_.str() + "|";
    for (const auto& e : orth_) k += e.str() + ",";
    k += "|";
    for (const auto& t : trans_) k += t.str() + ",";
    return k;
  }

private:
  int dim_;
  QuadScalar ratio_;
  std::vector<QuadScalar> orth_;
  Point trans_;

  void check_orthogonal() {
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) {
        QuadScalar acc(0);
        for (int k = 0; k < dim_; ++k) acc += orth_[k * dim_ + r] * orth_[k * dim_ + c];
        if (acc != QuadScalar(r == c ? 1 : 0))
          throw model_error("orthogonal part fails O^T O = I exactly");
      }
  }
};

} // namespace ftc
