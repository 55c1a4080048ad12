#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "ftc/errors.hpp"
#include "ftc/system.hpp"

namespace ftc {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string scalar_field(const json& j, const char* where) {
  if (!j.is_string()) throw model_error(std::string(where) + ": scalar must be a string");
  return j.get<std::string>();
}

inline Similitude parse_map(const json& j, int dim, long field_d, const std::string& where) {
  if (!j.is_object()) throw model_error(where + ": map must be an object");
  if (!j.contains("ratio") || !j.contains("translation"))
    throw model_error(where + ": map needs 'ratio' and 'translation'");
  QuadScalar ratio = parse_scalar(scalar_field(j["ratio"], where.c_str()), field_d);
  const json& tr = j["translation"];
  if (!tr.is_array() || static_cast<int>(tr.size()) != dim)
    throw model_error(where + ".translation: expected " + std::to_string(dim) + " coordinates");
  Point t;
  for (const auto& c : tr) t.push_back(parse_scalar(scalar_field(c, where.c_str()), field_d));
  std::vector<QuadScalar> orth;
  if (j.contains("orthogonal")) {
    const json& o = j["orthogonal"];
    if (!o.is_array() || static_cast<int>(o.size()) != dim)
      throw model_error(where + ".orthogonal: expected a " + std::to_string(dim) + "x" +
                        std::to_string(dim) + " matrix");
    for (const auto& row : o) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw model_error(where + ".orthogonal: ragged matrix");
      for (const auto& c : row) orth.push_back(parse_scalar(scalar_field(c, where.c_str()), field_d));
    }
    return Similitude(dim, std::move(ratio), std::move(orth), std::move(t));
  }
  return Similitude::homothety(dim, std::move(ratio), std::move(t));
}

inline ConvexPolygon parse_polygon(const json& j, int dim, long field_d, const std::string& where) {
  if (!j.is_array() || j.empty()) throw model_error(where + ": polygon must be a nonempty array");
  if (dim == 1) {
    if (j.size() != 2) throw model_error(where + ": interval needs two scalars");
    return ConvexPolygon::interval(parse_scalar(scalar_field(j[0], where.c_str()), field_d),
                                   parse_scalar(scalar_field(j[1], where.c_str()), field_d));
  }
  std::vector<Point> verts;
  for (const auto& v : j) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
      throw model_error(where + ": vertex must list " + std::to_string(dim) + " coordinates");
    Point p;
    for (const auto& c : v) p.push_back(parse_scalar(scalar_field(c, where.c_str()), field_d));
    verts.push_back(std::move(p));
  }
  return ConvexPolygon(dim, std::move(verts));
}

inline json render_map(const Similitude& f) {
  json j;
  j["ratio"] = f.ratio().str();
  bool ident = true;
  for (int r = 0; r < f.dim(); ++r)
    for (int c = 0; c < f.dim(); ++c)
      if (f.orthogonal()[static_cast<std::size_t>(r * f.dim() + c)] != QuadScalar(r == c ? 1 : 0))
        ident = false;
  if (!ident) {
    json o = json::array();
    for (int r = 0; r < f.dim(); ++r) {
      json row = json::array();
      for (int c = 0; c < f.dim(); ++c)
        row.push_back(f.orthogonal()[static_cast<std::size_t>(r * f.dim() + c)].str());
      o.push_back(std::move(row));
    }
    j["orthogonal"] = std::move(o);
  }
  json t = json::array();
  for (const auto& c : f.translation()) t.push_back(c.str());
  j["translation"] = std::move(t);
  return j;
}

inline json render_polygon(const ConvexPolygon& p) {
  json j = json::array();
  if (p.dim() == 1) {
    j.push_back(p.vertices()[0][0].str());
    j.push_back(p.vertices()[1][0].str());
    return j;
  }
  for (const auto& v : p.vertices()) {
    json row = json::array();
    for (const auto& c : v) row.push_back(c.str());
    j.push_back(std::move(row));
  }
  return j;
}

} // namespace detail

/// Parses and validates a model file.  Throws model_error with a field
/// location on the first problem.
inline System parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw model_error("model syntax error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) throw model_error("model root must be an object");

  System sys;
  if (!j.contains("field") || !j.contains("space_dim") || !j.contains("kind"))
    throw model_error("model needs 'field', 'space_dim' and 'kind'");
  const json& f = j["field"];
  if (f.is_object() && f.contains("d")) {
    if (f["d"].is_string()) {
      if (f["d"] != "rational") throw model_error("field.d: expected an integer or \"rational\"");
      sys.field_d = 0;
    } else if (f["d"].is_number_integer()) {
      sys.field_d = f["d"].get<long>();
      QuadScalar check(Rational(0), Rational(1), sys.field_d); // validates square-free d >= 2
    } else {
      throw model_error("field.d: expected an integer or \"rational\"");
    }
  } else if (f.is_string() && f == "rational") {
    sys.field_d = 0;
  } else {
    throw model_error("field: expected {\"d\": ...} or \"rational\"");
  }
  sys.dim = j["space_dim"].get<int>();
  if (sys.dim != 1 && sys.dim != 2) throw model_error("space_dim must be 1 or 2");

  const std::string kind = j["kind"].get<std::string>();
  if (kind == "ifs") {
    sys.is_ifs = true;
    sys.t = 1;
    if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty())
      throw model_error("ifs model needs a nonempty 'maps' array");
    int n = 0;
    for (const auto& m : j["maps"]) {
      sys.edges.push_back({"f" + std::to_string(n + 1), 0, 0,
                           detail::parse_map(m, sys.dim, sys.field_d,
                                             "maps[" + std::to_string(n) + "]")});
      ++n;
    }
    if (!j.contains("omega")) throw model_error("ifs model needs 'omega'");
    sys.omegas.push_back(detail::parse_polygon(j["omega"], sys.dim, sys.field_d, "omega"));
  } else if (kind == "gifs") {
    sys.is_ifs = false;
    if (!j.contains("t")) throw model_error("gifs model needs 't'");
    sys.t = j["t"].get<int>();
    if (sys.t < 1) throw model_error("t must be >= 1");
    if (!j.contains("edges") || !j["edges"].is_array() || j["edges"].empty())
      throw model_error("gifs model needs a nonempty 'edges' array");
    int n = 0;
    for (const auto& e : j["edges"]) {
      const std::string where = "edges[" + std::to_string(n) + "]";
      if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("map"))
        throw model_error(where + ": edge needs 'from', 'to' and 'map'");
      SystemEdge edge{e.contains("id") ? e["id"].get<std::string>() : "e" + std::to_string(n + 1),
                      e["from"].get<int>() - 1, e["to"].get<int>() - 1,
                      detail::parse_map(e["map"], sys.dim, sys.field_d, where + ".map")};
      sys.edges.push_back(std::move(edge));
      ++n;
    }
    if (!j.contains("omegas") || !j["omegas"].is_array() ||
        static_cast<int>(j["omegas"].size()) != sys.t)
      throw model_error("gifs model needs 'omegas' with one open set per graph vertex");
    int k = 0;
    for (const auto& om : j["omegas"]) {
      sys.omegas.push_back(
          detail::parse_polygon(om, sys.dim, sys.field_d, "omegas[" + std::to_string(k) + "]"));
      ++k;
    }
  } else {
    throw model_error("kind must be \"ifs\" or \"gifs\"");
  }

  if (j.contains("index_rule")) {
    const json& r = j["index_rule"];
    if (!r.is_object() || !r.contains("kind")) throw model_error("index_rule needs 'kind'");
    const std::string rk = r["kind"].get<std::string>();
    if (rk == "fixed_length") {
      sys.rule = IndexSetRule::fixed_length();
    } else if (rk == "ratio_stopping") {
      if (!r.contains("base")) throw model_error("index_rule.base required for ratio_stopping");
      sys.rule = IndexSetRule::ratio_stopping(
          parse_scalar(detail::scalar_field(r["base"], "index_rule.base"), sys.field_d));
    } else {
      throw model_error("index_rule.kind must be fixed_length or ratio_stopping");
    }
  } else {
    sys.rule = IndexSetRule::default_for(sys.ratios());
  }
  if (j.contains("chart")) sys.chart = chart_from_name(j["chart"].get<std::string>());
  if (j.contains("name")) sys.name = j["name"].get<std::string>();

  validate_system(sys);
  return sys;
}

/// Canonical JSON rendering; parse_model(render_model(m)) reproduces m.
inline std::string render_model(const System& sys) {
  json j;
  if (!sys.name.empty()) j["name"] = sys.name;
  if (sys.field_d == 0)
    j["field"] = {{"d", "rational"}};
  else
    j["field"] = {{"d", sys.field_d}};
  j["space_dim"] = sys.dim;
  j["kind"] = sys.is_ifs ? "ifs" : "gifs";
  if (sys.is_ifs) {
    json maps = json::array();
    for (const auto& e : sys.edges) maps.push_back(detail::render_map(e.map));
    j["maps"] = std::move(maps);
    j["omega"] = detail::render_polygon(sys.omegas[0]);
  } else {
    j["t"] = sys.t;
    json edges = json::array();
    for (const auto& e : sys.edges) {
      json je;
      je["id"] = e.id;
      je["from"] = e.from + 1;
      je["to"] = e.to + 1;
      je["map"] = detail::render_map(e.map);
      edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    json oms = json::array();
    for (const auto& om : sys.omegas) oms.push_back(detail::render_polygon(om));
    j["omegas"] = std::move(oms);
  }
  if (sys.rule.kind == IndexSetRule::Kind::FixedLength)
    j["index_rule"] = {{"kind", "fixed_length"}};
  else
    j["index_rule"] = {{"kind", "ratio_stopping"}, {"base", sys.rule.base.str()}};
  j["chart"] = chart_name(sys.chart);
  return j.dump(2) + "\n";
}

inline bool systems_equal(const System& a, const System& b) {
  if (a.t != b.t || a.dim != b.dim || a.field_d != b.field_d || a.is_ifs != b.is_ifs ||
      a.chart != b.chart || a.edges.size() != b.edges.size() || a.rule.kind != b.rule.kind)
    return false;
  if (a.rule.kind == IndexSetRule::Kind::RatioStopping && a.rule.base != b.rule.base) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    const auto& x = a.edges[i];
    const auto& y = b.edges[i];
    if (x.id != y.id || x.from != y.from || x.to != y.to || x.map != y.map) return false;
  }
  for (int i = 0; i < a.t; ++i) {
    if (a.omegas[static_cast<std::size_t>(i)].vertices() !=
        b.omegas[static_cast<std::size_t>(i)].vertices())
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Built-in presets (the planar systems; manifold charts only relabel them).

/// Sierpinski gasket, three homotheties of ratio 1/2.  Omega is the open
/// convex hull of the three fixed points.
inline System preset_sierpinski() {
  const int dim = 2;
  auto half = QuadScalar::fraction(1, 2);
  std::vector<Similitude> maps;
  maps.push_back(Similitude::homothety(dim, half, {QuadScalar(0), half}));
  maps.push_back(Similitude::homothety(dim, half, {QuadScalar::fraction(-1, 4), QuadScalar(0)}));
  maps.push_back(Similitude::homothety(dim, half, {QuadScalar::fraction(1, 4), QuadScalar(0)}));
  ConvexPolygon omega(dim, {Point{QuadScalar::fraction(-1, 2), QuadScalar(0)},
                            Point{QuadScalar::fraction(1, 2), QuadScalar(0)},
                            Point{QuadScalar(0), QuadScalar(1)}});
  System s = System::ifs(dim, 0, std::move(maps), std::move(omega));
  s.chart = ChartKind::Sphere;
  s.name = "sierpinski";
  return s;
}

/// Two-parameter overlapping family; requires 0 < rho, r < 1 and
/// rho + 2r - rho*r <= 1.  Omega is the open bounding box of the generator
/// fixed points (the printed maps do not leave the unit square invariant,
/// so the square is widened to the fixed-point hull).
inline System preset_lau_ngai(const QuadScalar& rho, const QuadScalar& r) {
  const QuadScalar one(1), zero(0), two(2);
  if (!(zero < rho && rho < one && zero < r && r < one))
    throw model_error("lau_ngai requires 0 < rho, r < 1");
  if (rho + two * r - rho * r > one)
    throw model_error("lau_ngai constraint rho + 2r - rho*r <= 1 violated (got " +
                      (rho + two * r - rho * r).str() + ")");
  const int dim = 2;
  std::vector<Similitude> maps;
  maps.push_back(Similitude::homothety(dim, rho, {rho / two, zero}));
  maps.push_back(Similitude::homothety(dim, r, {rho - rho * r + r / two, zero}));
  maps.push_back(Similitude::homothety(dim, r, {one - r / two, zero}));
  maps.push_back(Similitude::homothety(dim, r, {r / two, one - r}));
  QuadScalar xlo, xhi;
  bool first = true;
  for (const auto& m : maps) {
    QuadScalar fp = m.translation()[0] / (one - m.ratio());
    if (first || fp < xlo) xlo = fp;
    if (first || fp > xhi) xhi = fp;
    first = false;
  }
  ConvexPolygon omega(dim, {Point{xlo, zero}, Point{xhi, zero}, Point{xhi, one}, Point{xlo, one}});
  long d = rho.field_d() ? rho.field_d() : r.field_d();
  System s = System::ifs(dim, d, std::move(maps), std::move(omega));
  s.name = "lau_ngai";
  return s;
}

/// Golden gasket over Q(sqrt(5)): ratios rho, rho, rho^2 with
/// rho = (sqrt(5)-1)/2.  Omega is the open triangle (0,0),(1,0),(1,1).
inline System preset_golden_gasket() {
  const int dim = 2;
  const long d = 5;
  const QuadScalar rho(Rational(-1, 2), Rational(1, 2), d);
  const QuadScalar rho2 = rho * rho; // = 1 - rho
  std::vector<Similitude> maps;
  maps.push_back(Similitude::homothety(dim, rho, {QuadScalar(0), QuadScalar(0)}));
  maps.push_back(Similitude::homothety(dim, rho, {rho2, QuadScalar(0)}));
  maps.push_back(Similitude::homothety(dim, rho2, {rho, rho}));
  ConvexPolygon omega(dim, {Point{QuadScalar(0), QuadScalar(0)}, Point{QuadScalar(1), QuadScalar(0)},
                            Point{QuadScalar(1), QuadScalar(1)}});
  System s = System::ifs(dim, d, std::move(maps), std::move(omega));
  s.name = "golden_gasket";
  return s;
}

/// Graph-directed system of the torus quotient of {h_i}: two graph
/// vertices (lower and upper half of the square), eight edges of ratio 1/2.
/// The wrap-around map appears as the two cross edges e4 and e8.
inline System preset_torus_gifs() {
  const int dim = 2;
  auto half = QuadScalar::fraction(1, 2);
  auto h = [&](long px, long qx, long py, long qy) {
    return Similitude::homothety(dim, half,
                                 {QuadScalar::fraction(px, qx), QuadScalar::fraction(py, qy)});
  };
  System s;
  s.t = 2;
  s.dim = dim;
  s.field_d = 0;
  s.is_ifs = false;
  s.edges.push_back({"e1", 0, 0, h(0, 1, 1, 4)});
  s.edges.push_back({"e2", 0, 0, h(1, 4, 1, 4)});
  s.edges.push_back({"e3", 0, 0, h(1, 2, 1, 4)});
  s.edges.push_back({"e4", 0, 1, h(1, 4, -1, 4)});
  s.edges.push_back({"e5", 1, 1, h(0, 1, 1, 4)});
  s.edges.push_back({"e6", 1, 1, h(1, 4, 1, 4)});
  s.edges.push_back({"e7", 1, 1, h(1, 2, 1, 4)});
  s.edges.push_back({"e8", 1, 0, h(1, 4, 3, 4)});
  s.omegas.push_back(ConvexPolygon::box(QuadScalar(0), QuadScalar(0), QuadScalar(1), half));
  s.omegas.push_back(ConvexPolygon::box(QuadScalar(0), half, QuadScalar(1), QuadScalar(1)));
  s.rule = IndexSetRule::default_for(s.ratios());
  s.chart = ChartKind::Torus;
  s.name = "torus_gifs";
  return s;
}

/// Named preset lookup; lau_ngai takes its parameters separately.
inline System preset(const std::string& name) {
  if (name == "sierpinski") return preset_sierpinski();
  if (name == "golden_gasket") return preset_golden_gasket();
  if (name == "torus_gifs") return preset_torus_gifs();
  if (name == "lau_ngai")
    return preset_lau_ngai(QuadScalar::fraction(1, 3), QuadScalar::fraction(1, 3));
  throw model_error("unknown preset '" + name + "'");
}

} // namespace ftc
