#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <ostream>
#include <string>

#include "ftc/errors.hpp"

namespace ftc {

using Rational = mpq_class;

/// Element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)), or a plain
/// rational when d == 0.  Components are arbitrary-precision rationals kept
/// in lowest terms, so equality and ordering are exact.  Values with b == 0
/// normalize to d == 0 and mix freely with any field; combining two values
/// with distinct nonzero d is a model error.
class QuadScalar {
public:
  QuadScalar() : a_(0), b_(0), d_(0) {}
  QuadScalar(long n) : a_(n), b_(0), d_(0) {}
  QuadScalar(const Rational& a) : a_(a), b_(0), d_(0) {}
  QuadScalar(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (d_ < 0 || d_ == 1 || (d_ > 1 && !square_free(d_)))
      throw model_error("field index d must be 0 or a square-free integer >= 2, got " +
                        std::to_string(d));
    if (d_ == 0 && b_ != 0) throw model_error("radical coefficient requires d > 0");
    normalize();
  }

  static QuadScalar sqrt_of(long d) { return QuadScalar(Rational(0), Rational(1), d); }
  static QuadScalar fraction(long p, long q) {
    if (q == 0) throw model_error("zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return QuadScalar(r);
  }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  long field_d() const { return d_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_one() const { return b_ == 0 && a_ == 1; }

  /// Exact sign of the real number a + b*sqrt(d): -1, 0 or +1.
  int sign() const {
    const int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against b^2*d.
    const int cmp_sq = cmp(a_ * a_, b_ * b_ * d_);
    if (cmp_sq == 0) return 0; // impossible for square-free d >= 2, but harmless
    return cmp_sq > 0 ? sa : sb;
  }

  static int compare(const QuadScalar& x, const QuadScalar& y) { return (x - y).sign(); }

  /// Double approximation; for matrix evaluation and rendering only, never
  /// for equality or ordering.
  double to_double() const {
    double v = a_.get_d();
    if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v;
  }

  friend QuadScalar operator-(const QuadScalar& x) {
    QuadScalar r;
    r.a_ = -x.a_;
    r.b_ = -x.b_;
    r.d_ = x.d_;
    return r;
  }
  friend QuadScalar operator+(const QuadScalar& x, const QuadScalar& y) {
    QuadScalar r;
    r.d_ = merged_d(x, y);
    r.a_ = x.a_ + y.a_;
    r.b_ = x.b_ + y.b_;
    r.normalize();
    return r;
  }
  friend QuadScalar operator-(const QuadScalar& x, const QuadScalar& y) { return x + (-y); }
  friend QuadScalar operator*(const QuadScalar& x, const QuadScalar& y) {
    QuadScalar r;
    r.d_ = merged_d(x, y);
    r.a_ = x.a_ * y.a_ + x.b_ * y.b_ * r.d_;
    r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
    r.normalize();
    return r;
  }
  friend QuadScalar operator/(const QuadScalar& x, const QuadScalar& y) {
    if (y.is_zero()) throw model_error("division by zero");
    const long d = merged_d(x, y);
    // Multiply by the conjugate; the norm a^2 - b^2 d never vanishes for
    // nonzero y since d is not a rational square.
    Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * d;
    QuadScalar r;
    r.d_ = d;
    r.a_ = (x.a_ * y.a_ - x.b_ * y.b_ * d) / norm;
    r.b_ = (x.b_ * y.a_ - x.a_ * y.b_) / norm;
    r.normalize();
    return r;
  }
  QuadScalar& operator+=(const QuadScalar& y) { return *this = *this + y; }
  QuadScalar& operator-=(const QuadScalar& y) { return *this = *this - y; }
  QuadScalar& operator*=(const QuadScalar& y) { return *this = *this * y; }
  QuadScalar& operator/=(const QuadScalar& y) { return *this = *this / y; }

  friend bool operator==(const QuadScalar& x, const QuadScalar& y) {
    if (x.b_ != y.b_ || x.a_ != y.a_) return false;
    return x.b_ == 0 || x.d_ == y.d_;
  }
  friend bool operator!=(const QuadScalar& x, const QuadScalar& y) { return !(x == y); }
  friend bool operator<(const QuadScalar& x, const QuadScalar& y) { return compare(x, y) < 0; }
  friend bool operator<=(const QuadScalar& x, const QuadScalar& y) { return compare(x, y) <= 0; }
  friend bool operator>(const QuadScalar& x, const QuadScalar& y) { return compare(x, y) > 0; }
  friend bool operator>=(const QuadScalar& x, const QuadScalar& y) { return compare(x, y) >= 0; }

  /// Canonical text form: "p/q" or "p/q + r/s*sqrt(d)" / "p/q - r/s*sqrt(d)".
  std::string str() const {
    if (b_ == 0) return a_.get_str();
    std::string s = a_.get_str();
    s += sgn(b_) > 0 ? " + " : " - ";
    s += Rational(abs(b_)).get_str();
    s += "*sqrt(" + std::to_string(d_) + ")";
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const QuadScalar& x) { return os << x.str(); }

  QuadScalar pow(unsigned n) const {
    QuadScalar r(1), base = *this;
    for (; n; n >>= 1) {
      if (n & 1) r *= base;
      base *= base;
    }
    return r;
  }

private:
  Rational a_, b_;
  long d_;

  void normalize() {
    if (b_ == 0) d_ = 0;
  }
  static long merged_d(const QuadScalar& x, const QuadScalar& y) {
    if (x.d_ == 0) return y.d_;
    if (y.d_ == 0 || x.d_ == y.d_) return x.d_;
    throw model_error("mixing distinct quadratic fields sqrt(" + std::to_string(x.d_) +
                      ") and sqrt(" + std::to_string(y.d_) + ")");
  }
  static bool square_free(long d) {
    for (long p = 2; p * p <= d; ++p)
      if (d % (p * p) == 0) return false;
    return true;
  }
};

namespace detail {

inline Rational parse_rational(const std::string& tok) {
  if (tok.empty()) throw model_error("empty number");
  const auto slash = tok.find('/');
  if (tok.find_first_not_of("+-0123456789/") != std::string::npos ||
      (slash != std::string::npos && tok.find('/', slash + 1) != std::string::npos))
    throw model_error("malformed rational '" + tok + "'");
  if (slash != std::string::npos && (slash + 1 == tok.size() || slash == 0))
    throw model_error("malformed rational '" + tok + "'");
  mpq_class q;
  if (q.set_str(tok, 10) != 0) throw model_error("malformed rational '" + tok + "'");
  if (q.get_den() == 0) throw model_error("zero denominator in '" + tok + "'");
  q.canonicalize();
  return q;
}

} // namespace detail

/// Parses the model-file scalar syntax "p/q" or "p/q + r/s*sqrt(d)" with
/// optional signs.  `field_d` is the model's declared field: any sqrt term
/// must use exactly that d (and field_d == 0 forbids sqrt terms).
inline QuadScalar parse_scalar(const std::string& text, long field_d) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw model_error("empty scalar");

  Rational a(0), b(0);
  long seen_d = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = pos + 1; // keep a leading sign with its term
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;

    int sign = 1;
    std::size_t t = 0;
    if (term[0] == '+' || term[0] == '-') {
      sign = term[0] == '-' ? -1 : 1;
      t = 1;
    }
    term = term.substr(t);
    if (term.empty()) throw model_error("dangling sign in scalar '" + text + "'");

    const auto sq = term.find("sqrt(");
    if (sq == std::string::npos) {
      a += sign * detail::parse_rational(term);
      continue;
    }
    if (term.back() != ')') throw model_error("malformed sqrt term in '" + text + "'");
    const std::string dtxt = term.substr(sq + 5, term.size() - sq - 6);
    if (dtxt.empty() || dtxt.find_first_not_of("0123456789") != std::string::npos)
      throw model_error("malformed sqrt index in '" + text + "'");
    const long d = std::strtol(dtxt.c_str(), nullptr, 10);
    Rational coeff(1);
    if (sq > 0) {
      if (term[sq - 1] != '*') throw model_error("expected '*' before sqrt in '" + text + "'");
      coeff = detail::parse_rational(term.substr(0, sq - 1));
    }
    if (field_d == 0) throw model_error("sqrt(" + std::to_string(d) + ") in a rational model");
    if (d != field_d)
      throw model_error("sqrt(" + std::to_string(d) + ") does not match the model field sqrt(" +
                        std::to_string(field_d) + ")");
    seen_d = d;
    b += sign * coeff;
  }
  if (b == 0) return QuadScalar(a);
  return QuadScalar(a, b, seen_d);
}

} // namespace ftc
