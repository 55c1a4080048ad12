#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ftc/dimension.hpp"
#include "ftc/exploration.hpp"
#include "ftc/model_io.hpp"
#include "matrix_match.hpp"

using ftc::ConvexPolygon;
using ftc::Exploration;
using ftc::QuadScalar;
using ftc::Similitude;
using ftc::System;
using ftc::Word;

namespace {

const ftc::VertexRec* find_vertex(const Exploration& ex, int level, const Word& w) {
  for (const auto& v : ex.levels()[static_cast<std::size_t>(level)])
    if (v.word == w) return &v;
  return nullptr;
}

System line_ifs(std::vector<std::pair<long, long>> maps) {
  std::vector<Similitude> ms;
  for (auto [p, q] : maps)
    ms.push_back(Similitude::homothety(1, QuadScalar::fraction(1, 2),
                                       {QuadScalar::fraction(p, q)}));
  return System::ifs(1, 0, std::move(ms),
                     ConvexPolygon::interval(QuadScalar(0), QuadScalar(1)));
}

} // namespace

TEST_CASE("sierpinski gasket collapses to a single type") {
  const System sys = ftc::preset_sierpinski();
  Exploration ex(sys);
  ex.run();

  // No coincidences at level 1: three vertices, each retained from the root.
  REQUIRE(ex.levels()[1].size() == 3);
  for (const auto& v : ex.levels()[1]) {
    CHECK(v.retained_parent == 0);
    CHECK(v.neighbors.size() == 1); // disjoint open cells: only itself
  }

  const auto aut = ex.automaton();
  CHECK(aut.q == 1);
  REQUIRE(aut.types[0].row.size() == 3);
  for (const auto& e : aut.types[0].row) {
    CHECK(e.ratio == QuadScalar::fraction(1, 2));
    CHECK(e.target == 0);
  }
  CHECK(ex.check_representative_independence().empty());

  // Gasket neighborhoods stay singletons in deeper levels too.
  ex.extend_to_level(3);
  for (int lvl = 1; lvl <= 3; ++lvl)
    for (const auto& v : ex.levels()[static_cast<std::size_t>(lvl)])
      CHECK(v.neighbors.size() == 1);
}

TEST_CASE("two half-maps on the line give one type and dimension structure") {
  const System sys = line_ifs({{0, 1}, {1, 2}});
  Exploration ex(sys);
  ex.run();
  const auto aut = ex.automaton();
  CHECK(aut.q == 1);
  REQUIRE(aut.types[0].row.size() == 2);
  for (const auto& e : aut.types[0].row) CHECK(e.ratio == QuadScalar::fraction(1, 2));
}

TEST_CASE("torus system reproduces the twelve-type automaton") {
  const System sys = ftc::preset_torus_gifs();
  Exploration ex(sys);
  ex.run();

  const auto aut = ex.automaton();
  REQUIRE(aut.q == 12);
  CHECK(aut.roots == 2);
  CHECK(aut.fixpoint_level == 3);

  const auto m = ftc::WeightedIncidenceMatrix::assemble(aut);
  std::vector<std::vector<int>> counts;
  REQUIRE(testsupport::counts_matrix(m, QuadScalar::fraction(1, 2), counts));

  // Discovery order matches the published type numbering exactly.
  CHECK(counts == testsupport::torus_pattern());
  // And a root-fixing permutation match is found (trivially, the identity).
  CHECK(testsupport::match_up_to_permutation(counts, testsupport::torus_pattern(), 2) ==
        std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});

  CHECK(ex.check_representative_independence().empty());
}

TEST_CASE("duplicate edge is removed by the lexicographic rule") {
  const System sys = ftc::preset_torus_gifs();
  Exploration ex(sys);
  ex.run();

  // The coincidence f1 o f3 = f2 o f1: the merged level-2 vertex keeps the
  // edge with the smaller extension word, i.e. the one from f2.
  const Similitude f13 = sys.edges[0].map.compose(sys.edges[2].map);
  CHECK(f13 == sys.edges[1].map.compose(sys.edges[0].map));

  const ftc::VertexRec* v = find_vertex(ex, 2, Word{0, 2});
  REQUIRE(v != nullptr);
  CHECK(v->map == f13);
  CHECK(v->retained_ext == Word{0}); // extension e1 ...
  const auto& parent = ex.levels()[1][static_cast<std::size_t>(v->retained_parent)];
  CHECK(parent.word == Word{1}); // ... from the vertex of e2

  // No other level-2 vertex realizes the same map on component 1.
  int count = 0;
  for (const auto& u : ex.levels()[2])
    if (u.map == f13 && u.i == 0) ++count;
  CHECK(count == 1);
}

TEST_CASE("overlap family neighborhoods at level one") {
  const System sys = ftc::preset_lau_ngai(QuadScalar::fraction(1, 3), QuadScalar::fraction(1, 3));
  Exploration ex(sys);
  ex.run();
  // f1 and f2 images genuinely overlap, f3 is separated from f1.
  const ftc::VertexRec* v1 = find_vertex(ex, 1, Word{0});
  const ftc::VertexRec* v2 = find_vertex(ex, 1, Word{1});
  REQUIRE(v1);
  REQUIRE(v2);
  auto has = [&](const ftc::VertexRec* v, const Word& w) {
    for (int nb : v->neighbors)
      if (ex.levels()[1][static_cast<std::size_t>(nb)].word == w) return true;
    return false;
  };
  CHECK(has(v1, Word{1}));
  CHECK(has(v2, Word{0}));
  CHECK_FALSE(has(v1, Word{2}));
  CHECK(ex.fixpoint_level() > 0);
  CHECK(ex.check_representative_independence().empty());
}

TEST_CASE("golden gasket closes under the ratio-stopping rule") {
  const System sys = ftc::preset_golden_gasket();
  REQUIRE(sys.rule.kind == ftc::IndexSetRule::Kind::RatioStopping);
  Exploration ex(sys, {64, 32, 1000000});
  ex.run();
  const auto aut = ex.automaton();
  CHECK(aut.q >= 2);
  CHECK(aut.q <= 64);
  CHECK(ex.check_representative_independence().empty());

  // The word (3) persists into the next index set: its only offspring edge
  // has the empty extension and ratio 1.
  const ftc::VertexRec* v3 = find_vertex(ex, 1, Word{2});
  REQUIRE(v3);
  REQUIRE(v3->children.size() == 1);
  const auto& child = ex.levels()[2][static_cast<std::size_t>(v3->children[0])];
  CHECK(child.retained_ext.empty());
  CHECK(child.ext_ratio == QuadScalar(1));
  CHECK(child.map == v3->map);
}

TEST_CASE("single-vertex graph system matches the plain ifs") {
  auto check_pair = [](std::vector<Similitude> maps) {
    System ifs = System::ifs(1, 0, maps, ConvexPolygon::interval(QuadScalar(0), QuadScalar(1)));
    System gifs;
    gifs.t = 1;
    gifs.dim = 1;
    gifs.is_ifs = false;
    for (std::size_t i = 0; i < maps.size(); ++i)
      gifs.edges.push_back({"e" + std::to_string(i + 1), 0, 0, maps[i]});
    gifs.omegas.push_back(ConvexPolygon::interval(QuadScalar(0), QuadScalar(1)));
    gifs.rule = ftc::IndexSetRule::default_for(gifs.ratios());

    Exploration ea(ifs), eb(gifs);
    ea.run();
    eb.run();
    const auto a = ea.automaton(), b = eb.automaton();
    REQUIRE(a.q == b.q);
    for (int i = 0; i < a.q; ++i) {
      const auto& ra = a.types[static_cast<std::size_t>(i)].row;
      const auto& rb = b.types[static_cast<std::size_t>(i)].row;
      REQUIRE(ra.size() == rb.size());
      for (std::size_t k = 0; k < ra.size(); ++k) {
        CHECK(ra[k].ratio == rb[k].ratio);
        CHECK(ra[k].target == rb[k].target);
      }
    }
  };
  // Fixed-length rule (equal ratios, disjoint cells).
  check_pair({Similitude::homothety(1, QuadScalar::fraction(1, 3), {QuadScalar(0)}),
              Similitude::homothety(1, QuadScalar::fraction(1, 3), {QuadScalar::fraction(2, 3)})});
  // Ratio-stopping rule (unequal ratios).
  check_pair({Similitude::homothety(1, QuadScalar::fraction(1, 2), {QuadScalar(0)}),
              Similitude::homothety(1, QuadScalar::fraction(1, 4), {QuadScalar::fraction(3, 4)})});
}

TEST_CASE("disconnected components solve per block") {
  // Two graph vertices, no cross edges, two 1/3-maps each (open set
  // condition per component): block-diagonal matrix, dimension log2/log3.
  System g;
  g.t = 2;
  g.dim = 1;
  g.is_ifs = false;
  auto third = QuadScalar::fraction(1, 3);
  g.edges.push_back({"a1", 0, 0, Similitude::homothety(1, third, {QuadScalar(0)})});
  g.edges.push_back({"a2", 0, 0, Similitude::homothety(1, third, {QuadScalar::fraction(2, 3)})});
  g.edges.push_back({"b1", 1, 1, Similitude::homothety(1, third, {QuadScalar(0)})});
  g.edges.push_back({"b2", 1, 1, Similitude::homothety(1, third, {QuadScalar::fraction(2, 3)})});
  g.omegas.push_back(ftc::ConvexPolygon::interval(QuadScalar(0), QuadScalar(1)));
  g.omegas.push_back(ftc::ConvexPolygon::interval(QuadScalar(0), QuadScalar(1)));
  g.rule = ftc::IndexSetRule::default_for(g.ratios());

  Exploration ex(g);
  ex.run();
  const auto aut = ex.automaton();
  CHECK(aut.roots == 2);
  CHECK(aut.q == 2); // one type per component
  const auto m = ftc::WeightedIncidenceMatrix::assemble(aut);
  for (int i = 0; i < 2; ++i) {
    CHECK(m.cell(i, i).size() == 1);
    CHECK(m.cell(i, 1 - i).empty());
  }
  const auto res = ftc::solve_dimension(m);
  CHECK(std::abs(res.alpha - std::log(2.0) / std::log(3.0)) < 1e-12);
}

TEST_CASE("every type is reachable from a root") {
  for (const char* name : {"sierpinski", "torus_gifs", "golden_gasket", "lau_ngai"}) {
    Exploration ex(ftc::preset(name));
    ex.run();
    const auto aut = ex.automaton();
    std::vector<char> seen(static_cast<std::size_t>(aut.q), 0);
    std::vector<int> stack;
    for (int i = 0; i < aut.roots; ++i) {
      seen[static_cast<std::size_t>(i)] = 1;
      stack.push_back(i);
    }
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (const auto& e : aut.types[static_cast<std::size_t>(t)].row)
        if (!seen[static_cast<std::size_t>(e.target)]) {
          seen[static_cast<std::size_t>(e.target)] = 1;
          stack.push_back(e.target);
        }
    }
    for (int t = 0; t < aut.q; ++t) CHECK(seen[static_cast<std::size_t>(t)] == 1);
    // Every type keeps at least one offspring edge after pruning.
    for (const auto& t : aut.types) CHECK(!t.row.empty());
  }
}

TEST_CASE("deterministic output across runs") {
  for (const char* name : {"sierpinski", "torus_gifs", "golden_gasket"}) {
    const System sys = ftc::preset(name);
    Exploration e1(sys), e2(sys);
    e1.run();
    e2.run();
    const auto a1 = e1.automaton(), a2 = e2.automaton();
    REQUIRE(a1.q == a2.q);
    CHECK(a1.fixpoint_level == a2.fixpoint_level);
    for (int i = 0; i < a1.q; ++i) {
      CHECK(a1.types[static_cast<std::size_t>(i)].rep_word ==
            a2.types[static_cast<std::size_t>(i)].rep_word);
      REQUIRE(a1.types[static_cast<std::size_t>(i)].row.size() ==
              a2.types[static_cast<std::size_t>(i)].row.size());
      for (std::size_t k = 0; k < a1.types[static_cast<std::size_t>(i)].row.size(); ++k)
        CHECK(a1.types[static_cast<std::size_t>(i)].row[k].target ==
              a2.types[static_cast<std::size_t>(i)].row[k].target);
    }
  }
}

TEST_CASE("neighborhoods never mix graph components") {
  const System sys = ftc::preset_torus_gifs();
  Exploration ex(sys);
  ex.run();
  for (const auto& level : ex.levels())
    for (const auto& v : level)
      for (int nb : v.neighbors)
        CHECK(level[static_cast<std::size_t>(nb)].i == v.i);
}

TEST_CASE("limits produce resource errors") {
  const System sys = ftc::preset_torus_gifs();
  CHECK_THROWS_AS(
      [&] {
        Exploration ex(sys, {4, 32, 1000000});
        ex.run();
      }(),
      ftc::resource_error);
  CHECK_THROWS_AS(
      [&] {
        Exploration ex(sys, {256, 32, 20});
        ex.run();
      }(),
      ftc::resource_error);
}

TEST_CASE("invariance violations are rejected with a witness") {
  System sys = ftc::preset_torus_gifs();
  // Shift e8 upward by 1/2: its image leaves Omega_2.
  sys.edges[7].map = Similitude::homothety(
      2, QuadScalar::fraction(1, 2), {QuadScalar::fraction(1, 4), QuadScalar::fraction(5, 4)});
  const auto rep = ftc::validate_invariance(sys);
  CHECK_FALSE(rep.ok);
  bool found = false;
  for (const auto& e : rep.entries)
    if (!e.ok && e.edge_id == "e8" && !e.witness.empty()) found = true;
  CHECK(found);
  CHECK_THROWS_AS(ftc::validate_system(sys), ftc::model_error);
}
