#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/index_rule.hpp"
#include "ftc/system.hpp"

namespace ftc {

/// Neighborhood signature: sorted list of (canonical key of the normalized
/// map inv(S_w) * S_s, terminal graph vertex of s) over the neighbors s of
/// w.  The vertex itself contributes the identity key exactly once.
using Signature = std::vector<std::pair<std::string, int>>;

/// One vertex (S_w, i, j, k) of the level graph.  `word` is the
/// lexicographically least realizing word; `max_pred` the largest
/// predecessor ratio over all known realizations (drives persistence under
/// ratio-stopping rules).  The retained incoming edge is the
/// lexicographically smallest by (extension word, parent word).
struct VertexRec {
  Similitude map;
  int i = 0;
  int j = 0;
  int level = 0;
  Word word;
  QuadScalar max_pred;
  ConvexPolygon footprint;
  int retained_parent = -1;
  Word retained_ext;
  QuadScalar ext_ratio{1};
  int type_id = -1;
  bool alive = true;
  std::vector<int> children;  // next-level indices whose retained parent is this vertex
  std::vector<int> neighbors; // same-level indices, includes self

  VertexRec(Similitude m, int i_, int j_, int level_, Word w, QuadScalar mp, ConvexPolygon fp)
      : map(std::move(m)), i(i_), j(j_), level(level_), word(std::move(w)),
        max_pred(std::move(mp)), footprint(std::move(fp)) {}
};

struct OffspringEdge {
  Word ext;
  QuadScalar ratio{1};
  int target = -1;
};

struct TypeInfo {
  int id = -1;
  int rep_level = -1;
  int rep_index = -1;
  Signature sig;
  std::vector<OffspringEdge> row;
  bool row_set = false;
  bool alive = true;
  std::vector<std::pair<int, int>> members; // first few (level, index) pairs
};

struct AutomatonType {
  Word rep_word;
  int rep_level = 0;
  bool root = false;
  std::vector<OffspringEdge> row; // targets reindexed over alive types
};

/// Pruned neighborhood-type automaton; types 0..roots-1 are the root types
/// in graph-vertex order.
struct TypeAutomaton {
  int q = 0;
  int roots = 0;
  int fixpoint_level = -1;
  std::vector<AutomatonType> types;
};

struct ExploreLimits {
  int max_types = 256;
  int max_level = 32;
  std::size_t vertex_budget = 1000000;
};

/// Breadth-first construction of the level graph with vertex
/// deduplication, lexicographic edge retention, neighborhood-type
/// classification and childless-vertex pruning.  Deterministic: identical
/// inputs give identical automata including type numbering.
class Exploration {
public:
  explicit Exploration(System sys, ExploreLimits lim = {}, int verify_depth = 2)
      : sys_(std::move(sys)), lim_(lim), verify_depth_(verify_depth) {
    validate_system(sys_);
    levels_.emplace_back();
    for (int i = 0; i < sys_.t; ++i) {
      levels_[0].emplace_back(Similitude::identity(sys_.dim), i, i, 0, Word{}, QuadScalar(1),
                              sys_.omegas[static_cast<std::size_t>(i)]);
      ++total_vertices_;
    }
    classify_level(0, true);
  }

  /// Explores until the type fixpoint: no new types across one full level
  /// and every type's offspring row lands in known types.
  void run() {
    while (fixpoint_ < 0) {
      if (deepest_level() >= lim_.max_level)
        throw resource_error("finite type not detected within bounds: " +
                             std::to_string(types_.size()) + " types at level " +
                             std::to_string(deepest_level()));
      const bool fresh = step(true);
      if (!fresh && all_rows_set()) fixpoint_ = deepest_level();
    }
    prune();
  }

  /// Builds further levels past the fixpoint (for measure tables and deep
  /// checks).  A new type appearing here would falsify the fixpoint and
  /// raises an error.
  void extend_to_level(int target) {
    while (deepest_level() < target) step(false);
    prune();
  }

  int fixpoint_level() const { return fixpoint_; }
  int deepest_level() const { return static_cast<int>(levels_.size()) - 1; }
  const System& system() const { return sys_; }
  const std::vector<std::vector<VertexRec>>& levels() const { return levels_; }
  const std::vector<TypeInfo>& types() const { return types_; }

  /// Representative independence: every member of a type must generate the
  /// same offspring (target type, ratio) multiset as the representative.
  /// Returns human-readable violations (empty when consistent).
  std::vector<std::string> check_representative_independence() const {
    std::vector<std::string> bad;
    for (int lvl = 0; lvl < deepest_level(); ++lvl) {
      for (const auto& v : levels_[static_cast<std::size_t>(lvl)]) {
        if (!v.alive || v.type_id < 0) continue;
        const TypeInfo& t = types_[static_cast<std::size_t>(v.type_id)];
        if (!t.row_set) continue;
        auto mine = offspring_multiset(v);
        auto want = row_multiset(t.row);
        if (mine != want)
          bad.push_back("vertex " + word_str(v.word) + " of type T" + std::to_string(t.id + 1) +
                        " has offspring multiset differing from the representative");
      }
    }
    return bad;
  }

  /// Pruned automaton with types reindexed in discovery order (roots first).
  TypeAutomaton automaton() const {
    std::vector<int> remap(types_.size(), -1);
    TypeAutomaton out;
    out.roots = sys_.t;
    out.fixpoint_level = fixpoint_;
    for (const auto& t : types_) {
      if (!t.alive) continue;
      remap[static_cast<std::size_t>(t.id)] = out.q++;
    }
    for (int i = 0; i < sys_.t; ++i)
      if (remap[static_cast<std::size_t>(i)] != i)
        throw model_error("root type pruned away; the system is degenerate");
    for (const auto& t : types_) {
      if (!t.alive) continue;
      AutomatonType at;
      at.rep_word = levels_[static_cast<std::size_t>(t.rep_level)]
                        [static_cast<std::size_t>(t.rep_index)].word;
      at.rep_level = t.rep_level;
      at.root = t.id < sys_.t;
      for (const auto& e : t.row) {
        if (!types_[static_cast<std::size_t>(e.target)].alive) continue;
        at.row.push_back({e.ext, e.ratio, remap[static_cast<std::size_t>(e.target)]});
      }
      out.types.push_back(std::move(at));
    }
    return out;
  }

private:
  System sys_;
  ExploreLimits lim_;
  int verify_depth_;
  std::vector<std::vector<VertexRec>> levels_;
  std::vector<TypeInfo> types_;
  std::size_t total_vertices_ = 0;
  int fixpoint_ = -1;

  struct Extension {
    Word ext;
    QuadScalar ratio{1};
    QuadScalar pred_factor{1}; // ratio of ext minus its last edge
    int terminal = 0;
  };

  // All extensions of a vertex-state into the next index set.
  std::vector<Extension> extensions_of(const QuadScalar& ratio, const QuadScalar& max_pred,
                                       int j, int level) const {
    std::vector<Extension> out;
    if (sys_.rule.kind == IndexSetRule::Kind::FixedLength) {
      for (int e : sys_.edges_from(j)) {
        const auto& edge = sys_.edges[static_cast<std::size_t>(e)];
        out.push_back({Word{e}, edge.map.ratio(), QuadScalar(1), edge.to});
      }
      return out;
    }
    const QuadScalar thr = sys_.rule.base.pow(static_cast<unsigned>(level + 1));
    if (ratio <= thr) {
      if (thr < max_pred) out.push_back({Word{}, QuadScalar(1), QuadScalar(1), j});
      return out;
    }
    // Descend while the accumulated ratio stays above the threshold; the
    // first crossing is a member of the next index set and its prefix is
    // the predecessor.
    Word w;
    auto walk = [&](auto&& self, const QuadScalar& acc, int cur) -> void {
      for (int e : sys_.edges_from(cur)) {
        const auto& edge = sys_.edges[static_cast<std::size_t>(e)];
        const QuadScalar acc2 = acc * edge.map.ratio();
        w.push_back(e);
        if (ratio * acc2 <= thr)
          out.push_back({w, acc2, acc, edge.to});
        else
          self(self, acc2, edge.to);
        w.pop_back();
      }
    };
    walk(walk, QuadScalar(1), j);
    return out;
  }

  Similitude path_map(const Word& w) const {
    Similitude m = Similitude::identity(sys_.dim);
    for (int e : w) m = m.compose(sys_.edges[static_cast<std::size_t>(e)].map);
    return m;
  }

  // Builds the next level and classifies it.  Returns true when new types
  // were created.
  bool step(bool allow_new_types) {
    const int k = static_cast<int>(levels_.size());
    const auto& prev = levels_[static_cast<std::size_t>(k - 1)];

    struct Incoming {
      int parent;
      Extension ext;
    };
    struct Group {
      Similitude map;
      int i, j;
      Word word;
      QuadScalar max_pred{0};
      std::vector<Incoming> incoming;
      Group(Similitude m, int i_, int j_) : map(std::move(m)), i(i_), j(j_) {}
    };
    std::map<std::tuple<std::string, int, int>, std::size_t> index;
    std::vector<Group> groups;

    for (std::size_t p = 0; p < prev.size(); ++p) {
      const VertexRec& par = prev[p];
      if (!par.alive) continue;
      for (auto& ext : extensions_of(par.map.ratio(), par.max_pred, par.j, par.level)) {
        Similitude child_map = ext.ext.empty() ? par.map : par.map.compose(path_map(ext.ext));
        Word child_word = par.word;
        child_word.insert(child_word.end(), ext.ext.begin(), ext.ext.end());
        const QuadScalar pred =
            ext.ext.empty() ? par.max_pred : par.map.ratio() * ext.pred_factor;
        auto key = std::make_tuple(child_map.key(), par.i, ext.terminal);
        auto it = index.find(key);
        if (it == index.end()) {
          index.emplace(std::move(key), groups.size());
          groups.emplace_back(std::move(child_map), par.i, ext.terminal);
          auto& g = groups.back();
          g.word = std::move(child_word);
          g.max_pred = pred;
          g.incoming.push_back({static_cast<int>(p), std::move(ext)});
        } else {
          auto& g = groups[it->second];
          if (child_word < g.word) g.word = std::move(child_word);
          if (pred > g.max_pred) g.max_pred = pred;
          g.incoming.push_back({static_cast<int>(p), std::move(ext)});
        }
      }
    }

    std::vector<std::size_t> order(groups.size());
    for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return groups[a].word < groups[b].word; });

    total_vertices_ += groups.size();
    if (total_vertices_ > lim_.vertex_budget)
      throw resource_error("vertex budget exceeded at level " + std::to_string(k) + " (" +
                           std::to_string(total_vertices_) + " vertices)");

    levels_.emplace_back();
    auto& cur = levels_.back();
    cur.reserve(groups.size());
    auto& parents = levels_[static_cast<std::size_t>(k - 1)];
    for (std::size_t g : order) {
      Group& grp = groups[g];
      // Retained incoming edge: lexicographically smallest (extension word,
      // parent word); all other incoming edges are removed from the graph.
      const Incoming* best = &grp.incoming[0];
      for (const auto& inc : grp.incoming) {
        const Word& bw = parents[static_cast<std::size_t>(best->parent)].word;
        const Word& iw = parents[static_cast<std::size_t>(inc.parent)].word;
        if (std::make_pair(inc.ext.ext, iw) < std::make_pair(best->ext.ext, bw)) best = &inc;
      }
      ConvexPolygon fp = sys_.omegas[static_cast<std::size_t>(grp.j)].map_through(grp.map);
      cur.emplace_back(std::move(grp.map), grp.i, grp.j, k, std::move(grp.word),
                       std::move(grp.max_pred), std::move(fp));
      VertexRec& v = cur.back();
      v.retained_parent = best->parent;
      v.retained_ext = best->ext.ext;
      v.ext_ratio = best->ext.ratio;
      parents[static_cast<std::size_t>(best->parent)].children.push_back(
          static_cast<int>(cur.size()) - 1);
    }

    const bool fresh = classify_level(k, allow_new_types);
    set_available_rows();
    return fresh;
  }

  // Same-level neighborhoods, signatures and type assignment.  Returns
  // whether a new type was created.
  bool classify_level(int k, bool allow_new_types) {
    auto& cur = levels_[static_cast<std::size_t>(k)];
    std::vector<std::pair<Point, Point>> boxes;
    boxes.reserve(cur.size());
    for (const auto& v : cur) boxes.push_back(v.footprint.bbox());

    // Sweep over bbox min-x within each component: a pair can only overlap
    // openly when the boxes strictly overlap on every axis.
    std::vector<std::size_t> order(cur.size());
    for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (cur[a].i != cur[b].i) return cur[a].i < cur[b].i;
      const int c = QuadScalar::compare(boxes[a].first[0], boxes[b].first[0]);
      if (c != 0) return c < 0;
      return a < b;
    });
    for (std::size_t a = 0; a < cur.size(); ++a) cur[a].neighbors.push_back(static_cast<int>(a));
    for (std::size_t p = 0; p < order.size(); ++p) {
      const std::size_t a = order[p];
      for (std::size_t s = p + 1; s < order.size(); ++s) {
        const std::size_t b = order[s];
        if (cur[a].i != cur[b].i) break;
        if (!(boxes[b].first[0] < boxes[a].second[0])) break;
        bool box_ok = true;
        for (int d = 1; d < sys_.dim; ++d)
          if (!(boxes[a].first[static_cast<std::size_t>(d)] <
                    boxes[b].second[static_cast<std::size_t>(d)] &&
                boxes[b].first[static_cast<std::size_t>(d)] <
                    boxes[a].second[static_cast<std::size_t>(d)])) {
            box_ok = false;
            break;
          }
        if (!box_ok) continue;
        if (open_overlap(cur[a].footprint, cur[b].footprint)) {
          cur[a].neighbors.push_back(static_cast<int>(b));
          cur[b].neighbors.push_back(static_cast<int>(a));
        }
      }
    }
    for (auto& v : cur) std::sort(v.neighbors.begin(), v.neighbors.end());

    bool fresh = false;
    for (std::size_t a = 0; a < cur.size(); ++a) {
      VertexRec& v = cur[a];
      Signature sig = signature_of(cur, v);
      int assigned = -1;
      for (const auto& t : types_) {
        if (t.sig != sig) continue;
        const VertexRec& rep =
            levels_[static_cast<std::size_t>(t.rep_level)][static_cast<std::size_t>(t.rep_index)];
        if (!equivalent_to_rep(v, rep)) continue;
        assigned = t.id;
        break;
      }
      if (assigned < 0) {
        if (!allow_new_types)
          throw model_error("neighborhood type fixpoint violated: vertex " + word_str(v.word) +
                            " at level " + std::to_string(k) + " matches no known type");
        if (static_cast<int>(types_.size()) >= lim_.max_types)
          throw resource_error("finite type not detected within bounds: " +
                               std::to_string(types_.size()) + " types at level " +
                               std::to_string(k));
        TypeInfo t;
        t.id = static_cast<int>(types_.size());
        t.rep_level = k;
        t.rep_index = static_cast<int>(a);
        t.sig = std::move(sig);
        types_.push_back(std::move(t));
        assigned = types_.back().id;
        fresh = true;
      }
      v.type_id = assigned;
      auto& mem = types_[static_cast<std::size_t>(assigned)].members;
      if (mem.size() < 4) mem.emplace_back(k, static_cast<int>(a));
    }
    return fresh;
  }

  Signature signature_of(const std::vector<VertexRec>& level, const VertexRec& v) const {
    const Similitude inv = v.map.inverse();
    Signature sig;
    sig.reserve(v.neighbors.size());
    for (int nb : v.neighbors) {
      const VertexRec& s = level[static_cast<std::size_t>(nb)];
      sig.emplace_back(inv.compose(s.map).key(), s.j);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  }

  // Equivalence test against a type representative.  The signatures are
  // already equal (condition (a) of vertex equivalence, with terminal
  // tags); the translating map tau = S_v o S_rep^-1 must additionally be
  // realizable as a path of the system, which pins the index-set future of
  // matched neighbors onto each other.  Under ratio-stopping rules the
  // extension trees of both vertices are compared to verify_depth as a
  // refutable stand-in for the unbounded condition (b).
  bool equivalent_to_rep(const VertexRec& v, const VertexRec& rep) const {
    const Similitude tau = v.map.compose(rep.map.inverse());
    const int len = sys_.rule.kind == IndexSetRule::Kind::FixedLength
                        ? v.level - rep.level
                        : -1;
    if (!factors_as_path(tau, v.i, rep.i, len)) return false;
    if (sys_.rule.kind == IndexSetRule::Kind::RatioStopping && verify_depth_ > 0) {
      if (!extension_trees_equal(v.map.ratio(), v.max_pred, v.j, v.level, rep.map.ratio(),
                                 rep.max_pred, rep.j, rep.level, verify_depth_))
        return false;
    }
    return true;
  }

  // Whether tau equals S_w for some directed path w from `from` to `to`
  // (empty path allowed when from == to).  `length` restricts the path
  // length when nonnegative.  Any path map carries the closure of
  // Omega_to into the closure of Omega_from, which prunes the search to a
  // handful of branches.
  bool factors_as_path(const Similitude& tau, int from, int to, int length) const {
    if (tau.is_identity() && from == to && length <= 0) return true;
    if (!(tau.ratio() < QuadScalar(1))) return false;
    if (length == 0) return false;
    const ConvexPolygon img = sys_.omegas[static_cast<std::size_t>(to)].map_through(tau);
    if (!sys_.omegas[static_cast<std::size_t>(from)].contains_open_subset(img)) return false;
    for (int e : sys_.edges_from(from)) {
      const auto& edge = sys_.edges[static_cast<std::size_t>(e)];
      if (tau.ratio() > edge.map.ratio()) continue; // remainder would expand
      const Similitude rem = edge.map.inverse().compose(tau);
      if (factors_as_path(rem, edge.to, to, length < 0 ? -1 : length - 1)) return true;
    }
    return false;
  }

  bool extension_trees_equal(const QuadScalar& r1, const QuadScalar& p1, int j1, int k1,
                             const QuadScalar& r2, const QuadScalar& p2, int j2, int k2,
                             int depth) const {
    if (depth == 0) return true;
    auto e1 = extensions_of(r1, p1, j1, k1);
    auto e2 = extensions_of(r2, p2, j2, k2);
    if (e1.size() != e2.size()) return false;
    for (std::size_t i = 0; i < e1.size(); ++i) {
      if (e1[i].ext != e2[i].ext) return false;
      const QuadScalar c1 = r1 * e1[i].ratio;
      const QuadScalar c2 = r2 * e2[i].ratio;
      const QuadScalar q1 = e1[i].ext.empty() ? p1 : r1 * e1[i].pred_factor;
      const QuadScalar q2 = e2[i].ext.empty() ? p2 : r2 * e2[i].pred_factor;
      if (!extension_trees_equal(c1, q1, e1[i].terminal, k1 + 1, c2, q2, e2[i].terminal, k2 + 1,
                                 depth - 1))
        return false;
    }
    return true;
  }

  // A type's offspring row is read off its representative once the
  // representative's children are classified.
  void set_available_rows() {
    for (auto& t : types_) {
      if (t.row_set || t.rep_level + 1 > deepest_level()) continue;
      const VertexRec& rep =
          levels_[static_cast<std::size_t>(t.rep_level)][static_cast<std::size_t>(t.rep_index)];
      const auto& next = levels_[static_cast<std::size_t>(t.rep_level + 1)];
      std::vector<OffspringEdge> row;
      for (int c : rep.children) {
        const VertexRec& ch = next[static_cast<std::size_t>(c)];
        row.push_back({ch.retained_ext, ch.ext_ratio, ch.type_id});
      }
      std::sort(row.begin(), row.end(),
                [](const OffspringEdge& a, const OffspringEdge& b) { return a.ext < b.ext; });
      t.row = std::move(row);
      t.row_set = true;
    }
  }

  bool all_rows_set() const {
    for (const auto& t : types_)
      if (!t.row_set) return false;
    return true;
  }

  std::vector<std::pair<int, std::string>> offspring_multiset(const VertexRec& v) const {
    std::vector<std::pair<int, std::string>> ms;
    const auto& next = levels_[static_cast<std::size_t>(v.level + 1)];
    for (int c : v.children) {
      const VertexRec& ch = next[static_cast<std::size_t>(c)];
      if (ch.alive) ms.emplace_back(ch.type_id, ch.ext_ratio.str());
    }
    std::sort(ms.begin(), ms.end());
    return ms;
  }

  static std::vector<std::pair<int, std::string>> row_multiset(
      const std::vector<OffspringEdge>& row) {
    std::vector<std::pair<int, std::string>> ms;
    for (const auto& e : row) ms.emplace_back(e.target, e.ratio.str());
    std::sort(ms.begin(), ms.end());
    return ms;
  }

  // Removes vertices without offspring together with edges leading only to
  // them, then drops types whose rows empty out, until stable.
  void prune() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int lvl = deepest_level() - 1; lvl >= 0; --lvl) {
        auto& level = levels_[static_cast<std::size_t>(lvl)];
        for (std::size_t idx = 0; idx < level.size(); ++idx) {
          VertexRec& v = level[idx];
          if (!v.alive || !v.children.empty()) continue;
          v.alive = false;
          changed = true;
          if (lvl > 0 && v.retained_parent >= 0) {
            auto& pc = levels_[static_cast<std::size_t>(lvl - 1)]
                           [static_cast<std::size_t>(v.retained_parent)].children;
            pc.erase(std::remove(pc.begin(), pc.end(), static_cast<int>(idx)), pc.end());
          }
        }
      }
    }
    // Rebuild rows on the pruned graph and drop dead types.
    for (auto& t : types_) {
      if (!t.row_set) continue;
      const VertexRec& rep =
          levels_[static_cast<std::size_t>(t.rep_level)][static_cast<std::size_t>(t.rep_index)];
      t.alive = rep.alive;
      if (!t.alive) continue;
      std::vector<OffspringEdge> row;
      const auto& next = levels_[static_cast<std::size_t>(t.rep_level + 1)];
      for (int c : rep.children) {
        const VertexRec& ch = next[static_cast<std::size_t>(c)];
        row.push_back({ch.retained_ext, ch.ext_ratio, ch.type_id});
      }
      std::sort(row.begin(), row.end(),
                [](const OffspringEdge& a, const OffspringEdge& b) { return a.ext < b.ext; });
      t.row = std::move(row);
    }
    bool type_changed = true;
    while (type_changed) {
      type_changed = false;
      for (auto& t : types_) {
        if (!t.alive) continue;
        std::vector<OffspringEdge> kept;
        for (auto& e : t.row)
          if (types_[static_cast<std::size_t>(e.target)].alive) kept.push_back(e);
        t.row = std::move(kept);
        if (t.row.empty()) {
          t.alive = false;
          type_changed = true;
        }
      }
    }
  }
};

} // namespace ftc
