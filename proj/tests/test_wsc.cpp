#include <catch2/catch_amalgamated.hpp>

#include "ftc/model_io.hpp"
#include "ftc/wsc.hpp"

using ftc::QuadScalar;

TEST_CASE("stopping family of the gasket") {
  const auto sys = ftc::preset_sierpinski();
  // All ratios are 1/2: A_(1/4) is exactly the nine level-2 maps.
  const auto fam = ftc::stopping_family(sys, QuadScalar::fraction(1, 4));
  CHECK(fam.size() == 9);
  // b = 1 yields the identity-level family.
  CHECK(ftc::stopping_family(sys, QuadScalar(1)).size() == 1);
  CHECK_THROWS_AS(ftc::stopping_family(sys, QuadScalar(2)), ftc::model_error);
  CHECK_THROWS_AS(ftc::stopping_family(sys, QuadScalar::fraction(1, 64), 10),
                  ftc::resource_error);
}

TEST_CASE("gasket multiplicity stays at one") {
  const auto sys = ftc::preset_sierpinski();
  CHECK(ftc::wsc_multiplicity_probe(sys, QuadScalar::fraction(1, 4), 60) == 1);
  CHECK(ftc::wsc_multiplicity_probe(sys, QuadScalar(1), 20) == 1);
}

TEST_CASE("golden gasket multiplicity is bounded across scales") {
  const auto sys = ftc::preset_golden_gasket();
  const int a = ftc::wsc_multiplicity_probe(sys, QuadScalar::fraction(1, 8), 40);
  const int b = ftc::wsc_multiplicity_probe(sys, QuadScalar::fraction(1, 16), 40);
  CHECK(a >= 1);
  CHECK(b >= 1);
  // Boundedness, not a specific gamma: deeper scales do not blow up.
  CHECK(b <= a + 2);
}

TEST_CASE("torus probe is stable across one halving") {
  const auto sys = ftc::preset_torus_gifs();
  const int a = ftc::wsc_multiplicity_probe(sys, QuadScalar::fraction(1, 8), 200);
  const int b = ftc::wsc_multiplicity_probe(sys, QuadScalar::fraction(1, 16), 200);
  CHECK(a == 3);
  CHECK(b == a);
}

TEST_CASE("stopping family respects ratio bands") {
  const auto sys = ftc::preset_golden_gasket();
  const QuadScalar b = QuadScalar::fraction(1, 8);
  for (const auto& s : ftc::stopping_family(sys, b)) {
    CHECK(s.map.ratio() <= b);
    // The predecessor (drop the last edge) must still be above b.
    ftc::QuadScalar pred = s.map.ratio() / sys.edges[static_cast<std::size_t>(s.word.back())].map.ratio();
    CHECK(pred > b);
  }
}
