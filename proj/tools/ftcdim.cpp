// ftcdim: finite-type exploration and Hausdorff dimension of self-similar
// systems.  Subcommands: analyze, types, dimension, measure, render, wsc,
// verify.  Exit codes: 0 success, 1 model error, 2 resource/limits,
// 3 numerical error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ftc/dimension.hpp"
#include "ftc/exploration.hpp"
#include "ftc/model_io.hpp"
#include "ftc/render.hpp"
#include "ftc/report.hpp"
#include "ftc/wsc.hpp"

namespace {

struct Config {
  std::string preset;
  std::string model_path;
  std::string rho = "1/3";
  std::string r = "1/3";
  int max_types = 256;
  int max_level = 32;
  std::size_t vertex_budget = 1000000;
  double tol = 1e-12;
  int verify_depth = 2;
  bool json = false;
  std::string out;
  int depth = 5;                 // measure
  std::string chart;             // render override
  double max_diameter = 1.0 / 256.0;
  std::string format = "csv";
  std::size_t leaf_budget = 1000000;
  std::string b = "1/8";         // wsc
  int samples = 100;
  long seed = 0; // reserved; the pipeline is deterministic
};

ftc::System load_system(const Config& cfg) {
  if (!cfg.preset.empty() && !cfg.model_path.empty())
    throw ftc::model_error("give either --preset or --model, not both");
  if (!cfg.preset.empty()) {
    if (cfg.preset == "lau_ngai")
      return ftc::preset_lau_ngai(ftc::parse_scalar(cfg.rho, 0), ftc::parse_scalar(cfg.r, 0));
    return ftc::preset(cfg.preset);
  }
  if (cfg.model_path.empty()) throw ftc::model_error("no model given (use --preset or --model)");
  std::ifstream is(cfg.model_path);
  if (!is) throw ftc::model_error("cannot read model file '" + cfg.model_path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return ftc::parse_model(os.str());
}

ftc::ExploreLimits limits_of(const Config& cfg) {
  return {cfg.max_types, cfg.max_level, cfg.vertex_budget};
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out);
  if (!os) throw ftc::model_error("cannot open '" + cfg.out + "' for writing");
  os << text;
}

int check_threads_env() {
  // Caps internal parallelism; the pipeline is deterministic either way.
  const char* env = std::getenv("FTC_DIM_THREADS");
  if (!env) return 0;
  const int n = std::atoi(env);
  if (n < 1) throw ftc::model_error("FTC_DIM_THREADS must be a positive integer");
  return n;
}

int cmd_analyze(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  const auto res = ftc::analyze(sys, limits_of(cfg), cfg.verify_depth, cfg.tol);
  emit(cfg, cfg.json ? ftc::analyze_json(sys, res).dump(2) + "\n" : ftc::analyze_text(sys, res));
  return 0;
}

int cmd_types(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  ftc::Exploration ex(sys, limits_of(cfg), cfg.verify_depth);
  ex.run();
  const auto aut = ex.automaton();
  if (cfg.json) {
    emit(cfg, ftc::automaton_json(aut).dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "types: " << aut.q << "\nfixpoint_level: " << aut.fixpoint_level << "\n";
  for (int i = 0; i < aut.q; ++i) {
    const auto& t = aut.types[static_cast<std::size_t>(i)];
    os << "T" << i + 1 << (t.root ? " (root)" : "") << " rep " << ftc::word_str(t.rep_word)
       << " ->";
    for (const auto& e : t.row)
      os << " T" << e.target + 1 << " [" << ftc::word_str(e.ext) << ", " << e.ratio.str() << "]";
    os << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_dimension(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  const auto res = ftc::analyze(sys, limits_of(cfg), cfg.verify_depth, cfg.tol);
  if (cfg.json) {
    emit(cfg, ftc::dimension_json(res.dim).dump(2) + "\n");
  } else {
    emit(cfg, "alpha: " + ftc::fmt_g17(res.dim.alpha) +
                  "\nlambda_at_alpha: " + ftc::fmt_g17(res.dim.lambda_at_alpha) + "\n");
  }
  return 0;
}

int cmd_measure(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  ftc::Exploration ex(sys, limits_of(cfg), cfg.verify_depth);
  ex.run();
  ex.extend_to_level(cfg.depth + 1);
  const auto aut = ex.automaton();
  const auto m = ftc::WeightedIncidenceMatrix::assemble(aut);
  const auto dim = ftc::solve_dimension(m, cfg.tol);
  const auto rows = ftc::perron_measure(ex, aut, dim, cfg.depth);
  if (cfg.json) {
    ftc::json j;
    j["alpha"] = dim.alpha;
    ftc::json table = ftc::json::array();
    for (const auto& r : rows) {
      ftc::json jr;
      jr["level"] = r.level;
      jr["word"] = ftc::word_str(r.word);
      jr["type"] = r.type + 1;
      jr["measure"] = r.measure;
      table.push_back(std::move(jr));
    }
    j["cylinders"] = std::move(table);
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, ftc::measure_csv(rows));
  }
  return 0;
}

int cmd_render(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  auto pts = ftc::generate_points(sys, cfg.max_diameter, cfg.leaf_budget);
  const ftc::ChartKind chart = cfg.chart.empty() ? sys.chart : ftc::chart_from_name(cfg.chart);
  pts = ftc::chart_push(pts, chart);
  if (cfg.out.empty()) throw ftc::model_error("render needs --out");
  if (cfg.format == "csv")
    ftc::export_csv(pts, sys.t > 1, cfg.out);
  else if (cfg.format == "ply")
    ftc::export_ply(pts, cfg.out);
  else if (cfg.format == "svg")
    ftc::export_svg(pts, cfg.out);
  else
    throw ftc::model_error("unknown format '" + cfg.format + "' (csv|ply|svg)");
  std::cout << "wrote " << pts.size() << " points to " << cfg.out << "\n";
  return 0;
}

int cmd_wsc(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  const ftc::QuadScalar b = ftc::parse_scalar(cfg.b, sys.field_d);
  const auto fam = ftc::stopping_family(sys, b, cfg.vertex_budget);
  const int gamma = ftc::wsc_multiplicity_probe(sys, b, cfg.samples, cfg.vertex_budget);
  if (cfg.json) {
    ftc::json j;
    j["b"] = b.str();
    j["family_size"] = fam.size();
    j["max_multiplicity"] = gamma;
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, "b: " + b.str() + "\nfamily_size: " + std::to_string(fam.size()) +
                  "\nmax_multiplicity: " + std::to_string(gamma) + "\n");
  }
  return 0;
}

int cmd_verify(const Config& cfg) {
  const ftc::System sys = load_system(cfg);
  int failures = 0;
  std::ostringstream os;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    os << (ok ? "ok   " : "FAIL ") << name;
    if (!ok && !detail.empty()) os << ": " << detail;
    os << "\n";
    if (!ok) ++failures;
  };

  const auto inv = ftc::validate_invariance(sys);
  report("invariance", inv.ok);

  if (sys.is_ifs) {
    const auto nested = ftc::validate_nested_properties(sys.rule, sys.ratios(), 4);
    report("nested-index-sets (L = " + std::to_string(nested.witnessed_L) + ")", nested.ok,
           nested.violations.empty() ? "" : nested.violations.front());
  }

  ftc::Exploration ex(sys, limits_of(cfg), cfg.verify_depth);
  ex.run();
  ex.extend_to_level(std::min(ex.fixpoint_level() + 2, cfg.max_level));
  report("type-fixpoint (types = " + std::to_string(ex.automaton().q) + ", level = " +
             std::to_string(ex.fixpoint_level()) + ")",
         ex.fixpoint_level() >= 0);
  const auto indep = ex.check_representative_independence();
  report("representative-independence", indep.empty(), indep.empty() ? "" : indep.front());

  const auto aut = ex.automaton();
  const auto m = ftc::WeightedIncidenceMatrix::assemble(aut);
  const auto dim = ftc::solve_dimension(m, cfg.tol);
  report("dimension (alpha = " + ftc::fmt_g17(dim.alpha) + ")",
         std::abs(dim.lambda_at_alpha - 1.0) < 1e-9);

  bool monotone = true;
  double prev = 0.0;
  for (int g = 0; g < 20; ++g) {
    const double a = dim.bracket_lo + (dim.bracket_hi - dim.bracket_lo) * g / 19.0;
    const double l = ftc::spectral_radius_at(m, a);
    if (g > 0 && l >= prev) monotone = false;
    prev = l;
  }
  report("lambda-monotonicity", monotone);

  const int depth = std::min(4, ex.deepest_level() - 1);
  report("measure-additivity", ftc::measure_additivity_defect(ex, aut, dim, depth) < 1e-10);

  if (sys.chart == ftc::ChartKind::Sphere) {
    bool ok = true;
    try {
      const auto pts = ftc::chart_push(ftc::generate_points(sys, 1.0 / 64), ftc::ChartKind::Sphere);
      for (const auto& p : pts) {
        const double n = std::sqrt(p.c[0] * p.c[0] + p.c[1] * p.c[1] + p.c[2] * p.c[2]);
        if (std::abs(n - 1.0) > 1e-12 || p.c[2] < -1e-12) ok = false;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    report("sphere-chart", ok);
  }
  if (sys.chart == ftc::ChartKind::Torus) {
    bool ok = true;
    const auto pts = ftc::chart_push(ftc::generate_points(sys, 1.0 / 64), ftc::ChartKind::Torus);
    for (const auto& p : pts)
      if (p.c[0] < 0.0 || p.c[0] >= 1.0 || p.c[1] < 0.0 || p.c[1] >= 1.0) ok = false;
    report("torus-chart", ok);
  }

  report("model-round-trip", ftc::systems_equal(sys, ftc::parse_model(ftc::render_model(sys))));

  emit(cfg, os.str());
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite type condition explorer and Hausdorff dimension solver"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--preset", cfg.preset, "Built-in model: sierpinski, lau_ngai, golden_gasket, torus_gifs");
  app.add_option("--model", cfg.model_path, "Model file (JSON)");
  app.add_option("--rho", cfg.rho, "lau_ngai parameter rho (scalar text)");
  app.add_option("--r", cfg.r, "lau_ngai parameter r (scalar text)");
  app.add_option("--max-types", cfg.max_types, "Type budget");
  app.add_option("--max-level", cfg.max_level, "Level budget");
  app.add_option("--vertex-budget", cfg.vertex_budget, "Vertex budget");
  app.add_option("--tol", cfg.tol, "Bisection tolerance on alpha");
  app.add_option("--verify-depth", cfg.verify_depth, "Re-expansion depth of the equivalence check");
  app.add_flag("--json", cfg.json, "Structured JSON output");
  app.add_option("--out", cfg.out, "Write the primary output to a file");
  app.add_option("--seed", cfg.seed, "Reserved; the pipeline is deterministic");

  auto* analyze = app.add_subcommand("analyze", "Types, matrix and dimension report");
  auto* types = app.add_subcommand("types", "Neighborhood-type automaton");
  auto* dimension = app.add_subcommand("dimension", "Solve lambda_alpha = 1");
  auto* measure = app.add_subcommand("measure", "Cylinder measure table");
  measure->add_option("--depth", cfg.depth, "Table depth (levels)");
  auto* render = app.add_subcommand("render", "Attractor point cloud through a chart");
  render->add_option("--chart", cfg.chart, "identity, sphere or torus (default: model chart)");
  render->add_option("--max-diameter", cfg.max_diameter, "Leaf piece diameter");
  render->add_option("--format", cfg.format, "csv, ply or svg");
  render->add_option("--budget", cfg.leaf_budget, "Leaf budget");
  auto* wsc = app.add_subcommand("wsc", "Stopping-family multiplicity probe");
  wsc->add_option("--b", cfg.b, "Stopping scale (scalar text)");
  wsc->add_option("--samples", cfg.samples, "Sample point count");
  auto* verify = app.add_subcommand("verify", "Run every module's invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    check_threads_env();
    if (*analyze) return cmd_analyze(cfg);
    if (*types) return cmd_types(cfg);
    if (*dimension) return cmd_dimension(cfg);
    if (*measure) return cmd_measure(cfg);
    if (*render) return cmd_render(cfg);
    if (*wsc) return cmd_wsc(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const ftc::model_error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 1;
  } catch (const ftc::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const ftc::numeric_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
