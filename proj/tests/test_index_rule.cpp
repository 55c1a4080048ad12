#include <catch2/catch_amalgamated.hpp>

#include "ftc/index_rule.hpp"

using ftc::IndexSetRule;
using ftc::QuadScalar;
using ftc::Rational;
using ftc::Word;

namespace {

QuadScalar golden_rho() { return QuadScalar(Rational(-1, 2), Rational(1, 2), 5); }

std::vector<QuadScalar> golden_ratios() {
  const QuadScalar r = golden_rho();
  return {r, r, r * r};
}

} // namespace

TEST_CASE("fixed-length children are the one-symbol extensions") {
  const auto rule = IndexSetRule::fixed_length();
  const std::vector<QuadScalar> ratios{QuadScalar::fraction(1, 2), QuadScalar::fraction(1, 2),
                                       QuadScalar::fraction(1, 2)};
  const auto kids = ftc::children_in_next(Word{0}, 1, rule, ratios);
  REQUIRE(kids.size() == 3);
  CHECK(kids[0] == Word{0, 0});
  CHECK(kids[1] == Word{0, 1});
  CHECK(kids[2] == Word{0, 2});
}

TEST_CASE("ratio stopping on the golden ratios") {
  const auto rho = golden_rho();
  const auto rule = IndexSetRule::ratio_stopping(rho);
  const auto ratios = golden_ratios();

  // Word (3) has ratio rho^2, so it sits in both M_1 and M_2: its only
  // M_2-child is itself.
  auto kids = ftc::children_in_next(Word{2}, 1, rule, ratios);
  REQUIRE(kids.size() == 1);
  CHECK(kids[0] == Word{2});

  // From M_2 the same word expands: every one-symbol extension crosses the
  // rho^3 threshold with predecessor ratio rho^2 > rho^3.
  kids = ftc::children_in_next(Word{2}, 2, rule, ratios);
  REQUIRE(kids.size() == 3);
  CHECK(kids[0] == Word{2, 0});
  CHECK(kids[1] == Word{2, 1});
  CHECK(kids[2] == Word{2, 2});

  // Oracle: exhaustive enumeration of M_3 restricted to extensions of (3).
  // M_3 = { u : rho_u <= rho^3 < rho_(u-) }.
  const QuadScalar thr = rho.pow(3);
  std::vector<Word> expect;
  std::vector<Word> stack{Word{2}};
  while (!stack.empty()) {
    Word u = std::move(stack.back());
    stack.pop_back();
    QuadScalar ru(1);
    for (int s : u) ru *= ratios[static_cast<std::size_t>(s)];
    const QuadScalar pred =
        u.empty() ? QuadScalar(1) : ru / ratios[static_cast<std::size_t>(u.back())];
    if (ru <= thr && thr < pred) expect.push_back(u);
    if (ru > thr)
      for (int s = 0; s < 3; ++s) {
        Word v = u;
        v.push_back(s);
        stack.push_back(std::move(v));
      }
  }
  std::sort(expect.begin(), expect.end());
  auto got = ftc::children_in_next(Word{2}, 2, rule, ratios);
  std::sort(got.begin(), got.end());
  CHECK(got == expect);
}

TEST_CASE("homogeneous ratio stopping reduces to fixed length") {
  const auto half = QuadScalar::fraction(1, 2);
  const std::vector<QuadScalar> ratios{half, half, half, half};
  const auto rule = IndexSetRule::ratio_stopping(half);
  for (int k = 0; k < 3; ++k) {
    const Word u(static_cast<std::size_t>(k), 1);
    auto kids = ftc::children_in_next(u, k, rule, ratios);
    REQUIRE(kids.size() == 4);
    for (std::size_t s = 0; s < 4; ++s) {
      Word v = u;
      v.push_back(static_cast<int>(s));
      CHECK(kids[s] == v);
    }
  }
}

TEST_CASE("default rule selection") {
  const auto half = QuadScalar::fraction(1, 2);
  CHECK(IndexSetRule::default_for({half, half}).kind == IndexSetRule::Kind::FixedLength);
  const auto rule = IndexSetRule::default_for(golden_ratios());
  CHECK(rule.kind == IndexSetRule::Kind::RatioStopping);
  CHECK(rule.base == golden_rho());
}

TEST_CASE("nested-set validation") {
  const auto half = QuadScalar::fraction(1, 2);
  auto rep = ftc::validate_nested_properties(IndexSetRule::fixed_length(), {half, half, half}, 4);
  CHECK(rep.ok);
  CHECK(rep.witnessed_L == 1);
  CHECK(rep.violations.empty());

  rep = ftc::validate_nested_properties(IndexSetRule::ratio_stopping(golden_rho()),
                                        golden_ratios(), 5);
  CHECK(rep.ok);
  CHECK(rep.witnessed_L >= 1);

  // Heterogeneous ratios with a coarse base: the report is the contract.
  rep = ftc::validate_nested_properties(IndexSetRule::ratio_stopping(half),
                                        {half, QuadScalar::fraction(1, 3)}, 4);
  if (!rep.ok) CHECK(!rep.violations.empty());

  CHECK_THROWS_AS(
      ftc::children_in_next(Word{}, 0, IndexSetRule::fixed_length(), {QuadScalar(2)}),
      ftc::model_error);
  CHECK_THROWS_AS(IndexSetRule::ratio_stopping(QuadScalar(1)), ftc::model_error);
}
