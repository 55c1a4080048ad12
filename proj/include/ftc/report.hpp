#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "ftc/dimension.hpp"
#include "ftc/exploration.hpp"
#include "ftc/model_io.hpp"

namespace ftc {

/// Everything the analyze pipeline produces for one model.
struct AnalyzeResult {
  TypeAutomaton automaton;
  WeightedIncidenceMatrix matrix{0};
  DimensionResult dim;
};

inline AnalyzeResult analyze(Exploration& ex, double tol) {
  ex.run();
  AnalyzeResult res;
  res.automaton = ex.automaton();
  res.matrix = WeightedIncidenceMatrix::assemble(res.automaton);
  res.dim = solve_dimension(res.matrix, tol);
  return res;
}

inline AnalyzeResult analyze(const System& sys, const ExploreLimits& lim, int verify_depth,
                             double tol) {
  Exploration ex(sys, lim, verify_depth);
  return analyze(ex, tol);
}

inline json automaton_json(const TypeAutomaton& aut) {
  json types = json::array();
  for (int i = 0; i < aut.q; ++i) {
    const auto& t = aut.types[static_cast<std::size_t>(i)];
    json jt;
    jt["id"] = i + 1;
    jt["root"] = t.root;
    jt["representative"] = word_str(t.rep_word);
    jt["level"] = t.rep_level;
    json edges = json::array();
    for (const auto& e : t.row) {
      json je;
      je["extension"] = word_str(e.ext);
      je["ratio"] = e.ratio.str();
      je["target"] = e.target + 1;
      edges.push_back(std::move(je));
    }
    jt["edges"] = std::move(edges);
    types.push_back(std::move(jt));
  }
  json j;
  j["types"] = aut.q;
  j["roots"] = aut.roots;
  j["fixpoint_level"] = aut.fixpoint_level;
  j["type_list"] = std::move(types);
  return j;
}

inline json matrix_json(const WeightedIncidenceMatrix& m, double alpha) {
  json sym = json::array();
  json val = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json srow = json::array();
    json vrow = json::array();
    for (int j = 0; j < m.size(); ++j) {
      srow.push_back(m.cell_str(i, j));
      double s = 0.0;
      for (const auto& e : m.cell(i, j))
        s += e.mult * std::exp(alpha * std::log(e.ratio.to_double()));
      vrow.push_back(s);
    }
    sym.push_back(std::move(srow));
    val.push_back(std::move(vrow));
  }
  json j;
  j["symbolic"] = std::move(sym);
  j["at_alpha"] = std::move(val);
  return j;
}

inline json dimension_json(const DimensionResult& d) {
  json j;
  j["alpha"] = d.alpha;
  j["lambda_at_alpha"] = d.lambda_at_alpha;
  j["bracket"] = {d.bracket_lo, d.bracket_hi};
  j["tol"] = d.tol;
  j["perron"] = d.perron;
  return j;
}

inline json analyze_json(const System& sys, const AnalyzeResult& r) {
  json j;
  j["model"] = sys.name.empty() ? "(file)" : sys.name;
  j["kind"] = sys.is_ifs ? "ifs" : "gifs";
  j["field_d"] = sys.field_d;
  j["rule"] = sys.rule.kind == IndexSetRule::Kind::FixedLength
                  ? json{{"kind", "fixed_length"}}
                  : json{{"kind", "ratio_stopping"}, {"base", sys.rule.base.str()}};
  j["automaton"] = automaton_json(r.automaton);
  j["matrix"] = matrix_json(r.matrix, r.dim.alpha);
  j["dimension"] = dimension_json(r.dim);
  return j;
}

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string analyze_text(const System& sys, const AnalyzeResult& r) {
  std::ostringstream os;
  os << "model: " << (sys.name.empty() ? "(file)" : sys.name) << "\n";
  os << "kind: " << (sys.is_ifs ? "ifs" : "gifs") << "\n";
  os << "rule: "
     << (sys.rule.kind == IndexSetRule::Kind::FixedLength
             ? std::string("fixed_length")
             : "ratio_stopping(base = " + sys.rule.base.str() + ")")
     << "\n";
  os << "types: " << r.automaton.q << "\n";
  os << "fixpoint_level: " << r.automaton.fixpoint_level << "\n";
  for (int i = 0; i < r.automaton.q; ++i) {
    const auto& t = r.automaton.types[static_cast<std::size_t>(i)];
    os << "  T" << i + 1 << (t.root ? " (root)" : "") << " rep " << word_str(t.rep_word) << " ->";
    for (const auto& e : t.row) os << " T" << e.target + 1 << "(" << e.ratio.str() << ")";
    os << "\n";
  }
  os << "alpha: " << fmt_g17(r.dim.alpha) << "\n";
  os << "lambda_at_alpha: " << fmt_g17(r.dim.lambda_at_alpha) << "\n";
  return os.str();
}

/// Measure table CSV: level, word, type, ratio, measure.
inline std::string measure_csv(const std::vector<MeasureRow>& rows) {
  std::ostringstream os;
  os << "level,word,type,ratio,measure\n";
  for (const auto& r : rows)
    os << r.level << "," << word_str(r.word) << ",T" << r.type + 1 << "," << fmt_g17(r.ratio)
       << "," << fmt_g17(r.measure) << "\n";
  return os.str();
}

/// Matrix CSV with symbolic entries and the float evaluation at alpha.
inline std::string matrix_csv(const WeightedIncidenceMatrix& m, double alpha) {
  std::ostringstream os;
  os << "i,j,symbolic,at_alpha\n";
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      double s = 0.0;
      for (const auto& e : m.cell(i, j))
        s += e.mult * std::exp(alpha * std::log(e.ratio.to_double()));
      os << i + 1 << "," << j + 1 << "," << m.cell_str(i, j) << "," << fmt_g17(s) << "\n";
    }
  return os.str();
}

} // namespace ftc
