#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/system.hpp"

namespace ftc {

/// Member of the stopping family A_b: the first compositions along each
/// branch whose ratio drops to <= b.
struct StoppingMap {
  Similitude map;
  int initial = 0;
  int terminal = 0;
  Word word;
};

/// Exact enumeration of A_b = { S_u : rho_u <= b < rho_(u-) }, deduplicated
/// by (map, initial, terminal).  b = 1 yields the identity-level family.
inline std::vector<StoppingMap> stopping_family(const System& sys, const QuadScalar& b,
                                                std::size_t budget = 2000000) {
  if (!(QuadScalar(0) < b && b <= QuadScalar(1))) throw model_error("b must lie in (0,1]");
  std::vector<StoppingMap> out;
  std::map<std::tuple<std::string, int, int>, std::size_t> seen;
  auto emit = [&](Similitude m, int i, int j, const Word& w) {
    auto key = std::make_tuple(m.key(), i, j);
    if (seen.count(key)) return;
    seen.emplace(std::move(key), out.size());
    out.push_back({std::move(m), i, j, w});
    if (out.size() > budget) throw resource_error("stopping family exceeds budget");
  };
  Word w;
  auto walk = [&](auto&& self, const Similitude& m, int root, int cur) -> void {
    for (int e : sys.edges_from(cur)) {
      const auto& edge = sys.edges[static_cast<std::size_t>(e)];
      Similitude m2 = m.compose(edge.map);
      w.push_back(e);
      if (m2.ratio() <= b)
        emit(std::move(m2), root, edge.to, w);
      else
        self(self, m2, root, edge.to);
      w.pop_back();
    }
  };
  for (int i = 0; i < sys.t; ++i) {
    if (b == QuadScalar(1)) {
      emit(Similitude::identity(sys.dim), i, i, Word{});
      continue;
    }
    walk(walk, Similitude::identity(sys.dim), i, i);
  }
  return out;
}

/// Empirical multiplicity probe: the maximum, over sampled attractor
/// points x, of the number of stopping-family maps whose closed image
/// contains x.  A lower bound for the weak-separation constant gamma.
/// Each sample follows a deterministic pseudo-random branch sequence one
/// step below the stopping scale; the point is the exact image of the
/// component set's centroid, so membership tests are exact.
inline int wsc_multiplicity_probe(const System& sys, const QuadScalar& b, int samples,
                                  std::size_t budget = 2000000) {
  if (samples < 1) throw model_error("need at least one sample");
  const auto family = stopping_family(sys, b, budget);

  // Closed cell images, computed once.
  std::vector<ConvexPolygon> cells;
  cells.reserve(family.size());
  for (const auto& s : family)
    cells.push_back(sys.omegas[static_cast<std::size_t>(s.terminal)].map_through(s.map));

  const QuadScalar deep = b * QuadScalar::fraction(1, 8);
  int worst = 0;
  for (int s = 0; s < samples; ++s) {
    const int root = s % sys.t;
    Similitude m = Similitude::identity(sys.dim);
    int cur = root;
    std::uint64_t state = 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(s + 1);
    while (m.ratio() > deep) {
      const auto out = sys.edges_from(cur);
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      const int e = out[static_cast<std::size_t>((state >> 33) % out.size())];
      m = m.compose(sys.edges[static_cast<std::size_t>(e)].map);
      cur = sys.edges[static_cast<std::size_t>(e)].to;
    }
    const Point x = m.apply(sys.omegas[static_cast<std::size_t>(cur)].centroid());
    int count = 0;
    for (std::size_t f = 0; f < family.size(); ++f) {
      if (family[f].initial != root) continue;
      if (cells[f].contains_closed(x)) ++count;
    }
    worst = std::max(worst, count);
  }
  return worst;
}

} // namespace ftc
