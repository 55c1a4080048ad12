#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "ftc/report.hpp"

#ifndef FTC_SOURCE_DIR
#define FTC_SOURCE_DIR "."
#endif

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

} // namespace

TEST_CASE("analyze json is pinned by the golden file") {
  const ftc::System sys = ftc::preset_sierpinski();
  const auto res = ftc::analyze(sys, {}, 2, 1e-12);
  const std::string got = ftc::analyze_json(sys, res).dump(2) + "\n";
  CHECK(got == slurp(std::string(FTC_SOURCE_DIR) + "/tests/golden/sierpinski_analyze.json"));
}

TEST_CASE("identical runs produce identical reports") {
  const ftc::System sys = ftc::preset_torus_gifs();
  const auto r1 = ftc::analyze(sys, {}, 2, 1e-12);
  const auto r2 = ftc::analyze(sys, {}, 2, 1e-12);
  CHECK(ftc::analyze_json(sys, r1).dump(2) == ftc::analyze_json(sys, r2).dump(2));
  CHECK(ftc::analyze_text(sys, r1) == ftc::analyze_text(sys, r2));
}

TEST_CASE("analyze text carries the headline facts") {
  const ftc::System sys = ftc::preset_torus_gifs();
  const auto res = ftc::analyze(sys, {}, 2, 1e-12);
  const std::string text = ftc::analyze_text(sys, res);
  CHECK(text.find("types: 12") != std::string::npos);
  CHECK(text.find("alpha: 1.771553") != std::string::npos);
}

TEST_CASE("matrix csv lists symbolic entries") {
  const ftc::System sys = ftc::preset_sierpinski();
  const auto res = ftc::analyze(sys, {}, 2, 1e-12);
  const std::string csv = ftc::matrix_csv(res.matrix, res.dim.alpha);
  CHECK(csv.find("3*(1/2)^a") != std::string::npos);
}

TEST_CASE("golden gasket matrix mixes the two exact ratios") {
  const ftc::System sys = ftc::preset_golden_gasket();
  const auto res = ftc::analyze(sys, {}, 2, 1e-12);
  const std::string csv = ftc::matrix_csv(res.matrix, res.dim.alpha);
  CHECK(csv.find("-1/2 + 1/2*sqrt(5)") != std::string::npos); // rho
  CHECK(csv.find("3/2 - 1/2*sqrt(5)") != std::string::npos);  // rho^2
}
