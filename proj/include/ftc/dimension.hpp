#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/exploration.hpp"

namespace ftc {

/// One aggregated entry of a weighted-incidence-matrix cell: `mult` edges
/// sharing the exact ratio.
struct WeightedEntry {
  QuadScalar ratio;
  int mult = 0;
};

/// q x q matrix whose (i,j) cell is a multiset of (ratio, multiplicity)
/// pairs; evaluating at alpha gives A_alpha(i,j) = sum mult * ratio^alpha.
/// Ratios lie in (0,1]; ratio-1 entries arise from vertices persisting
/// across consecutive index sets.
class WeightedIncidenceMatrix {
public:
  explicit WeightedIncidenceMatrix(int q) : q_(q), cells_(static_cast<std::size_t>(q) * q) {}

  static WeightedIncidenceMatrix assemble(const TypeAutomaton& aut) {
    WeightedIncidenceMatrix m(aut.q);
    for (int i = 0; i < aut.q; ++i)
      for (const auto& e : aut.types[static_cast<std::size_t>(i)].row) m.add(i, e.target, e.ratio);
    return m;
  }

  int size() const { return q_; }
  const std::vector<WeightedEntry>& cell(int i, int j) const {
    return cells_[static_cast<std::size_t>(i) * q_ + j];
  }

  void add(int i, int j, const QuadScalar& ratio) {
    auto& cell = cells_[static_cast<std::size_t>(i) * q_ + j];
    for (auto& e : cell)
      if (e.ratio == ratio) {
        ++e.mult;
        return;
      }
    cell.push_back({ratio, 1});
  }

  /// Float evaluation A_alpha.
  std::vector<std::vector<double>> eval(double alpha) const {
    std::vector<std::vector<double>> a(static_cast<std::size_t>(q_),
                                       std::vector<double>(static_cast<std::size_t>(q_), 0.0));
    for (int i = 0; i < q_; ++i)
      for (int j = 0; j < q_; ++j) {
        double s = 0.0;
        for (const auto& e : cell(i, j))
          s += e.mult * std::exp(alpha * std::log(e.ratio.to_double()));
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
      }
    return a;
  }

  /// Symbolic cell text like "2*(1/2)^a + (1/4)^a", "0" when empty.
  std::string cell_str(int i, int j) const {
    const auto& c = cell(i, j);
    if (c.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) s += " + ";
      if (c[k].mult != 1) s += std::to_string(c[k].mult) + "*";
      s += "(" + c[k].ratio.str() + ")^a";
    }
    return s;
  }

  WeightedIncidenceMatrix permuted(const std::vector<int>& perm) const {
    WeightedIncidenceMatrix m(q_);
    for (int i = 0; i < q_; ++i)
      for (int j = 0; j < q_; ++j)
        for (const auto& e : cell(i, j))
          for (int c = 0; c < e.mult; ++c)
            m.add(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)], e.ratio);
    return m;
  }

private:
  int q_;
  std::vector<std::vector<WeightedEntry>> cells_;
};

namespace detail {

inline double max_norm(const std::vector<std::vector<double>>& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (double x : row) v = std::max(v, std::abs(x));
  return v;
}

inline std::vector<std::vector<double>> mat_mul(const std::vector<std::vector<double>>& a,
                                                const std::vector<std::vector<double>>& b) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

} // namespace detail

/// Dominant eigenvalue of the nonnegative matrix A_alpha.  Power iteration
/// with a Collatz-Wielandt bracket; falls back to repeated squaring and the
/// Gelfand estimate when the bracket stalls (reducible or oscillating
/// cases).
inline double spectral_radius(const std::vector<std::vector<double>>& a,
                              double rel_tol = 1e-14) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  std::vector<double> v(n, 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w[i] += a[i][j] * v[j];
    double lo = 1e308, hi = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      norm = std::max(norm, w[i]);
      if (v[i] > 1e-300) {
        lo = std::min(lo, w[i] / v[i]);
        hi = std::max(hi, w[i] / v[i]);
      }
    }
    if (norm == 0.0) return 0.0;
    lambda = hi;
    if (hi - lo <= rel_tol * std::max(1.0, hi)) return 0.5 * (lo + hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  // Gelfand fallback: lambda = lim ||A^(2^m)||^(1/2^m), tracked in log scale.
  auto c = a;
  double t = 0.0; // log of the accumulated scale: A^(2^m) ~ e^t * c
  for (int m = 0; m < 64; ++m) {
    const double s = detail::max_norm(c);
    if (s == 0.0) return 0.0;
    t = 2.0 * (t + std::log(s));
    auto d = c;
    for (auto& row : d)
      for (auto& x : row) x /= s;
    c = detail::mat_mul(d, d);
  }
  const double s = detail::max_norm(c);
  if (s == 0.0) return 0.0;
  const double log_lambda = (t + std::log(s)) / std::pow(2.0, 64);
  if (!std::isfinite(log_lambda))
    throw numeric_error("spectral radius estimation failed to converge");
  return std::exp(log_lambda);
}

inline double spectral_radius_at(const WeightedIncidenceMatrix& m, double alpha) {
  return spectral_radius(m.eval(alpha));
}

struct DimensionResult {
  double alpha = 0.0;
  double lambda_at_alpha = 1.0;
  std::vector<double> perron; // 1-eigenvector of A_alpha, first root entry = 1
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double tol = 1e-12;
};

/// Solves lambda_alpha = 1 by bisection; lambda is strictly decreasing in
/// alpha, so the root is unique.
inline DimensionResult solve_dimension(const WeightedIncidenceMatrix& m, double tol = 1e-12) {
  DimensionResult res;
  res.tol = tol;
  const double l0 = spectral_radius_at(m, 0.0);
  if (l0 < 1.0 - 1e-12)
    throw model_error("malformed automaton: spectral radius below 1 at alpha = 0");
  double lo = 0.0, hi = 1.0;
  while (spectral_radius_at(m, hi) >= 1.0) {
    hi *= 2.0;
    if (hi > 64.0)
      throw model_error("degenerate model: lambda_alpha never drops below 1 up to alpha = 64");
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (spectral_radius_at(m, mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  res.alpha = 0.5 * (lo + hi);
  res.lambda_at_alpha = spectral_radius_at(m, res.alpha);

  // Perron vector at the solved alpha, normalized so the first (root) entry
  // is 1.  Reducible systems may have zero entries on types that do not
  // reach the dominant class; those are reported as zeros.
  const auto a = m.eval(res.alpha);
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0);
  for (int it = 0; it < 5000; ++it) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w[i] += a[i][j] * v[j];
    double norm = 0.0;
    for (double x : w) norm = std::max(norm, std::abs(x));
    if (norm == 0.0) throw numeric_error("Perron iteration collapsed to zero");
    for (auto& x : w) x /= norm;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
    v = std::move(w);
    if (diff < 1e-15) break;
  }
  if (std::abs(v[0]) < 1e-100)
    throw numeric_error("root entry of the Perron vector vanished");
  const double scale = v[0];
  for (auto& x : v) x /= scale;
  res.perron = std::move(v);
  return res;
}

/// One row of the cylinder-measure table.
struct MeasureRow {
  int level = 0;
  Word word;
  int type = -1;
  double ratio = 1.0;
  double measure = 0.0;
};

/// Assigns mu(I_w) = rho_w^alpha * a_type(w) to every live vertex up to
/// `depth`.  Requires the exploration to be built at least that deep.
inline std::vector<MeasureRow> perron_measure(const Exploration& ex, const TypeAutomaton& aut,
                                              const DimensionResult& res, int depth) {
  if (depth > ex.deepest_level())
    throw model_error("measure depth exceeds explored levels");
  // Alive type ids in discovery order match the automaton's reindexing.
  std::vector<int> remap(ex.types().size(), -1);
  int next = 0;
  for (const auto& t : ex.types())
    if (t.alive) remap[static_cast<std::size_t>(t.id)] = next++;
  if (next != aut.q) throw model_error("automaton does not match exploration state");

  std::vector<MeasureRow> rows;
  for (int lvl = 0; lvl <= depth; ++lvl) {
    for (const auto& v : ex.levels()[static_cast<std::size_t>(lvl)]) {
      if (!v.alive) continue;
      const int t = remap[static_cast<std::size_t>(v.type_id)];
      if (t < 0) continue;
      MeasureRow r;
      r.level = lvl;
      r.word = v.word;
      r.type = t;
      r.ratio = v.map.ratio().to_double();
      r.measure = std::exp(res.alpha * std::log(r.ratio)) * res.perron[static_cast<std::size_t>(t)];
      if (lvl == 0) r.measure = res.perron[static_cast<std::size_t>(t)];
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

/// Largest additivity defect |sum_children mu - mu(parent)| over live
/// vertices up to `depth` (children one level deeper must be built).
inline double measure_additivity_defect(const Exploration& ex, const TypeAutomaton& aut,
                                        const DimensionResult& res, int depth) {
  if (depth + 1 > ex.deepest_level())
    throw model_error("additivity check needs children one level past the requested depth");
  std::vector<int> remap(ex.types().size(), -1);
  int next = 0;
  for (const auto& t : ex.types())
    if (t.alive) remap[static_cast<std::size_t>(t.id)] = next++;
  (void)aut;

  auto mu = [&](const VertexRec& v) {
    const int t = remap[static_cast<std::size_t>(v.type_id)];
    const double rho = v.map.ratio().to_double();
    const double base = v.level == 0 ? 1.0 : std::exp(res.alpha * std::log(rho));
    return base * res.perron[static_cast<std::size_t>(t)];
  };

  double worst = 0.0;
  for (int lvl = 0; lvl <= depth; ++lvl) {
    const auto& level = ex.levels()[static_cast<std::size_t>(lvl)];
    const auto& nextlvl = ex.levels()[static_cast<std::size_t>(lvl + 1)];
    for (const auto& v : level) {
      if (!v.alive || remap[static_cast<std::size_t>(v.type_id)] < 0) continue;
      double sum = 0.0;
      for (int c : v.children) sum += mu(nextlvl[static_cast<std::size_t>(c)]);
      worst = std::max(worst, std::abs(sum - mu(v)));
    }
  }
  return worst;
}

} // namespace ftc
