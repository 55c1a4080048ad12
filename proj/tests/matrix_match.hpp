#pragma once

#include <array>
#include <vector>

#include "ftc/dimension.hpp"

namespace testsupport {

/// Connectivity pattern of the torus GIFS automaton: twelve types, every
/// retained edge of ratio 1/2, rows in root-first discovery order.
inline std::vector<std::vector<int>> torus_pattern() {
  return {
      {0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
      {1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0},
      {0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0},
      {0, 1, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0},
      {1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0},
      {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0},
      {1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1},
      {0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0},
      {0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0},
      {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1},
      {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1},
  };
}

/// Integer multiplicity matrix of an automaton whose edges all share one
/// ratio; returns false when some cell mixes ratios.
inline bool counts_matrix(const ftc::WeightedIncidenceMatrix& m, const ftc::QuadScalar& ratio,
                          std::vector<std::vector<int>>& out) {
  const int q = m.size();
  out.assign(static_cast<std::size_t>(q), std::vector<int>(static_cast<std::size_t>(q), 0));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      for (const auto& e : m.cell(i, j)) {
        if (e.ratio != ratio) return false;
        out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += e.mult;
      }
    }
  return true;
}

/// Searches for a simultaneous permutation p with p[i] = i for i < fixed
/// and pattern[p[i]][p[j]] == got[i][j]; returns the permutation or empty.
inline std::vector<int> match_up_to_permutation(const std::vector<std::vector<int>>& got,
                                                const std::vector<std::vector<int>>& pattern,
                                                int fixed) {
  const int n = static_cast<int>(got.size());
  if (pattern.size() != got.size()) return {};
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < fixed; ++i) {
    perm[static_cast<std::size_t>(i)] = i;
    used[static_cast<std::size_t>(i)] = 1;
  }
  auto consistent = [&](int i) {
    for (int a = 0; a <= i; ++a) {
      if (perm[static_cast<std::size_t>(a)] < 0) continue;
      for (int b = 0; b <= i; ++b) {
        if (perm[static_cast<std::size_t>(b)] < 0) continue;
        if (got[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] !=
            pattern[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])]
                   [static_cast<std::size_t>(perm[static_cast<std::size_t>(b)])])
          return false;
      }
    }
    return true;
  };
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == n) return true;
    if (perm[static_cast<std::size_t>(i)] >= 0) return self(self, i + 1);
    for (int cand = 0; cand < n; ++cand) {
      if (used[static_cast<std::size_t>(cand)]) continue;
      perm[static_cast<std::size_t>(i)] = cand;
      used[static_cast<std::size_t>(cand)] = 1;
      if (consistent(i) && self(self, i + 1)) return true;
      perm[static_cast<std::size_t>(i)] = -1;
      used[static_cast<std::size_t>(cand)] = 0;
    }
    return false;
  };
  if (!rec(rec, 0)) return {};
  return perm;
}

} // namespace testsupport
