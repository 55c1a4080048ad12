#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/quad_scalar.hpp"

namespace ftc {

/// Word over the generator alphabet (indices into the map/edge list).
using Word = std::vector<int>;

inline std::string word_str(const Word& w) {
  if (w.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(w[i] + 1);
  }
  return s;
}

/// Stopping rule generating a sequence of nested index sets M_k.
/// FixedLength: M_k = all words of length k.
/// RatioStopping(base): u in M_k iff rho_u <= base^k < rho_(u-).
struct IndexSetRule {
  enum class Kind { FixedLength, RatioStopping };
  Kind kind = Kind::FixedLength;
  QuadScalar base; // in (0,1) for RatioStopping

  static IndexSetRule fixed_length() { return {Kind::FixedLength, QuadScalar(0)}; }
  static IndexSetRule ratio_stopping(QuadScalar b) {
    if (!(QuadScalar(0) < b && b < QuadScalar(1)))
      throw model_error("ratio stopping base must lie in (0,1)");
    return {Kind::RatioStopping, std::move(b)};
  }

  /// Default per the artifact contract: FixedLength when all generator
  /// ratios coincide, otherwise RatioStopping with the largest ratio.
  static IndexSetRule default_for(const std::vector<QuadScalar>& ratios) {
    if (ratios.empty()) throw model_error("empty generator list");
    QuadScalar mx = ratios[0];
    bool homogeneous = true;
    for (const auto& r : ratios) {
      if (r != ratios[0]) homogeneous = false;
      if (r > mx) mx = r;
    }
    return homogeneous ? fixed_length() : ratio_stopping(mx);
  }
};

namespace detail {

inline QuadScalar word_ratio(const Word& w, const std::vector<QuadScalar>& ratios) {
  QuadScalar r(1);
  for (int s : w) r *= ratios[s];
  return r;
}

} // namespace detail

/// All words v in M_{k+1} extending u in M_k (v = u, with empty extension,
/// included when u persists into the next index set).  `ratios` lists the
/// per-symbol contraction ratios; `pred_ratio` is rho of u's predecessor
/// word (1 for the empty word).
inline std::vector<Word> children_in_next(const Word& u, int k, const IndexSetRule& rule,
                                          const std::vector<QuadScalar>& ratios,
                                          const QuadScalar* pred_ratio = nullptr) {
  for (const auto& r : ratios)
    if (!(QuadScalar(0) < r && r < QuadScalar(1)))
      throw model_error("generator ratio outside (0,1)");
  std::vector<Word> out;
  if (rule.kind == IndexSetRule::Kind::FixedLength) {
    for (std::size_t s = 0; s < ratios.size(); ++s) {
      Word v = u;
      v.push_back(static_cast<int>(s));
      out.push_back(std::move(v));
    }
    return out;
  }
  const QuadScalar thr = rule.base.pow(static_cast<unsigned>(k + 1));
  const QuadScalar ru = detail::word_ratio(u, ratios);
  QuadScalar pred = pred_ratio ? *pred_ratio
                               : (u.empty() ? QuadScalar(1)
                                            : ru / ratios[u.back()]);
  if (ru <= thr) {
    // u already crossed the next threshold; it persists iff its predecessor
    // has not, and no proper extension can qualify.
    if (thr < pred) out.push_back(u);
    return out;
  }
  // DFS over extensions w while rho_u * rho_w stays above the threshold;
  // emit on the first crossing (the parent prefix is then the predecessor).
  struct Walker {
    const std::vector<QuadScalar>& ratios;
    const QuadScalar& thr;
    const Word& u;
    std::vector<Word>& out;
    void walk(Word& w, const QuadScalar& r) {
      for (std::size_t s = 0; s < ratios.size(); ++s) {
        QuadScalar r2 = r * ratios[s];
        w.push_back(static_cast<int>(s));
        if (r2 <= thr) {
          Word v = u;
          v.insert(v.end(), w.begin(), w.end());
          out.push_back(std::move(v));
        } else {
          walk(w, r2);
        }
        w.pop_back();
      }
    }
  };
  Word w;
  Walker{ratios, thr, u, out}.walk(w, ru);
  return out;
}

/// Report from checking Definition-style nested-set properties level by
/// level: antichain, covering upward/downward, bounded extension gap.
struct NestedSetReport {
  bool ok = true;
  int witnessed_L = 0;
  std::vector<std::string> violations;
};

/// Exhaustively builds M_0..M_depth for an IFS alphabet and verifies the
/// nested-index-set conditions; violations name the condition and witness
/// words.
inline NestedSetReport validate_nested_properties(const IndexSetRule& rule,
                                                  const std::vector<QuadScalar>& ratios,
                                                  int depth, std::size_t word_budget = 2000000) {
  if (depth < 1) throw model_error("validation depth must be >= 1");
  NestedSetReport rep;
  const std::size_t n = ratios.size();
  std::vector<std::vector<Word>> levels(depth + 1);
  levels[0] = {Word{}};
  std::size_t total = 1;
  for (int k = 0; k < depth; ++k) {
    std::vector<Word> next;
    for (const auto& u : levels[k])
      for (auto& v : children_in_next(u, k, rule, ratios)) next.push_back(std::move(v));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    total += next.size();
    if (total > word_budget) throw resource_error("nested-set validation exceeded word budget");
    levels[k + 1] = std::move(next);
  }

  auto is_prefix = [](const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
  };

  std::size_t prev_min = 0, prev_max = 0;
  for (int k = 0; k <= depth; ++k) {
    const auto& M = levels[k];
    if (M.empty()) {
      rep.ok = false;
      rep.violations.push_back("level " + std::to_string(k) + ": empty index set");
      continue;
    }
    std::size_t mn = M[0].size(), mx = M[0].size();
    for (const auto& w : M) {
      mn = std::min(mn, w.size());
      mx = std::max(mx, w.size());
    }
    if (k > 0 && (mn < prev_min || mx < prev_max)) {
      rep.ok = false;
      rep.violations.push_back("condition (a): word lengths not nondecreasing at level " +
                               std::to_string(k));
    }
    prev_min = mn;
    prev_max = mx;

    // (b) antichain: adjacent in sorted order suffices for prefix pairs.
    for (std::size_t i = 0; i + 1 < M.size(); ++i)
      if (is_prefix(M[i], M[i + 1])) {
        rep.ok = false;
        rep.violations.push_back("condition (b): " + word_str(M[i]) + " is a prefix of " +
                                 word_str(M[i + 1]) + " in M_" + std::to_string(k));
        break;
      }

    // (c) every word one longer than the longest M_k word has a prefix in M_k.
    std::size_t count = 1;
    for (std::size_t i = 0; i < mx + 1; ++i) {
      count *= n;
      if (count > word_budget) break;
    }
    if (count <= word_budget) {
      std::vector<Word> stack{Word{}};
      while (!stack.empty()) {
        Word w = std::move(stack.back());
        stack.pop_back();
        if (w.size() == mx + 1) {
          bool covered = false;
          for (const auto& u : M)
            if (is_prefix(u, w)) {
              covered = true;
              break;
            }
          if (!covered) {
            rep.ok = false;
            rep.violations.push_back("condition (c): no M_" + std::to_string(k) +
                                     " prefix of " + word_str(w));
          }
          continue;
        }
        for (std::size_t s = 0; s < n; ++s) {
          Word w2 = w;
          w2.push_back(static_cast<int>(s));
          stack.push_back(std::move(w2));
        }
      }
    }

    // (d) prefixes of M_k cover every shorter word.
    std::vector<Word> prefixes;
    for (const auto& u : M)
      for (std::size_t len = 0; len < mn; ++len)
        prefixes.emplace_back(u.begin(), u.begin() + static_cast<long>(len));
    std::sort(prefixes.begin(), prefixes.end());
    prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());
    std::size_t expect = 0, pw = 1;
    for (std::size_t len = 0; len < mn; ++len) {
      expect += pw;
      pw *= n;
    }
    if (prefixes.size() != expect) {
      rep.ok = false;
      rep.violations.push_back("condition (d): some word shorter than " + std::to_string(mn) +
                               " has no extension in M_" + std::to_string(k));
    }
  }

  // (e) bounded gap between consecutive levels; record the witnessed bound.
  for (int k = 0; k < depth; ++k)
    for (const auto& u : levels[k])
      for (const auto& v : levels[k + 1])
        if (is_prefix(u, v))
          rep.witnessed_L = std::max(rep.witnessed_L, static_cast<int>(v.size() - u.size()));
  return rep;
}

} // namespace ftc
