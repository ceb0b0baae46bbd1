#include "graphdarcy/io.hpp"

#include "graphdarcy/error.hpp"
#include "graphdarcy/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace graphdarcy {

namespace {

Json point(Vec2 p) { return Json::array({p.x, p.y}); }

Json loop_json(const Polygon& l) {
  Json a = Json::array();
  for (Vec2 p : l) a.push_back(point(p));
  return a;
}

std::string f9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void vtk_header(std::ostream& os, const char* title, const char* dataset) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET " << dataset << "\n";
}

void vtk_points(std::ostream& os, const std::vector<Vec2>& pts) {
  os << "POINTS " << pts.size() << " double\n";
  for (Vec2 p : pts) os << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
}

void vtk_cells(std::ostream& os, const Mesh& m) {
  vtk_points(os, m.nodes);
  os << "CELLS " << m.cells.size() << ' ' << 4 * m.cells.size() << "\n";
  for (const auto& t : m.cells) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  os << "CELL_TYPES " << m.cells.size() << "\n";
  for (std::size_t i = 0; i < m.cells.size(); ++i) os << "5\n";
}

template <class F>
void vtk_int_scalars(std::ostream& os, const char* name, std::size_t n, F value) {
  os << "SCALARS " << name << " int 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) os << value(i) << "\n";
}

template <class F>
void vtk_scalars(std::ostream& os, const char* name, std::size_t n, F value) {
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) os << format_double(value(i)) << "\n";
}

void vtk_vectors(std::ostream& os, const char* name, const std::vector<Vec2>& v) {
  os << "VECTORS " << name << " double\n";
  for (Vec2 p : v) os << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json errors_json(const ErrorNorms& e) {
  return Json{{"u1_L2", number_or_null(e.u1)},
              {"p1_L2", number_or_null(e.p1)},
              {"p2_L2", number_or_null(e.p2)},
              {"p2_H1s", number_or_null(e.p2_h1)},
              {"u2_L2", number_or_null(e.u2)}};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GraphInput graph_from_json(const Json& j) {
  auto bad = [](const std::string& what) { return Error(ErrorCode::InvalidArgument, "graph JSON: " + what); };
  if (!j.is_object()) throw bad("top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "vertices" && it.key() != "edges" && it.key() != "name") throw bad("unknown key '" + it.key() + "'");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw bad("'vertices' must be an array");
  if (!j.contains("edges") || !j["edges"].is_array()) throw bad("'edges' must be an array");
  GraphInput g;
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) throw bad("vertex must be [x, y]");
    g.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw bad("edge must be [i, j]");
    g.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return g;
}

GraphInput read_graph(const std::string& path) {
  std::string text = read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path + ": " + e.what());
  }
  return graph_from_json(j);
}

Json graph_to_json(const GraphInput& g) {
  Json v = Json::array(), e = Json::array();
  for (Vec2 p : g.vertices) v.push_back(point(p));
  for (auto [a, b] : g.edges) e.push_back(Json::array({a, b}));
  return Json{{"vertices", v}, {"edges", e}};
}

Json map_to_json(const DownscalingMap& m) {
  Json regions = Json::array();
  for (const Region& r : m.regions) {
    Json loops = Json::array();
    for (const Polygon& l : r.loops) loops.push_back(loop_json(l));
    regions.push_back(Json{{"owner", r.owner}, {"color", r.color}, {"area", r.area()}, {"loops", loops}});
  }
  Json domain = Json::array();
  for (const Polygon& l : m.domain) domain.push_back(loop_json(l));
  Json ifaces = Json::array();
  for (const InterfaceSegment& s : m.interfaces)
    ifaces.push_back(Json{{"edge", s.edge},
                          {"left_region", s.left_region},
                          {"right_region", s.right_region},
                          {"length", s.length()},
                          {"polyline", loop_json(s.polyline)}});
  return Json{{"kind", m.kind}, {"epsilon", m.epsilon}, {"regions", regions}, {"domain", domain}, {"interfaces", ifaces}};
}

Json report_to_json(const ValidationReport& r) {
  Json conds = Json::array();
  for (const ConditionResult& c : r.conditions)
    conds.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  Json pairs = Json::array();
  for (auto [a, b] : r.offending_pairs) pairs.push_back(Json::array({a, b}));
  return Json{{"passed", r.passed()},
              {"failed", r.failed()},
              {"tolerance", r.tolerance},
              {"conditions", conds},
              {"min_adjacent_shared_length", r.min_adjacent_shared_length},
              {"max_nonadjacent_shared_length", r.max_nonadjacent_shared_length},
              {"offending_pairs", pairs},
              {"euler_characteristic", r.euler_characteristic},
              {"domain_loops", r.domain_loops},
              {"corridor_half_width", r.corridor_half_width},
              {"region_area_sum", r.region_area_sum},
              {"domain_area", r.domain_area}};
}

std::string map_svg(const DownscalingMap& m, const PlaneGraph& g) {
  BBox box;
  for (const Polygon& l : m.domain)
    for (Vec2 p : l) box.add(p);
  for (Vec2 p : g.vertices()) box.add(p);
  if (!std::isfinite(box.xmin)) box = {0.0, 0.0, 1.0, 1.0};
  const double pad = 0.05 * std::max(box.diagonal(), 1e-9);
  const double w = box.xmax - box.xmin + 2 * pad, h = box.ymax - box.ymin + 2 * pad;
  const double scale = 800.0 / std::max(w, h);
  auto X = [&](Vec2 p) { return f9((p.x - box.xmin + pad) * scale); };
  auto Y = [&](Vec2 p) { return f9((box.ymax + pad - p.y) * scale); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f9(w * scale) << "\" height=\"" << f9(h * scale)
     << "\">\n";
  static const char* fills[] = {"#bab0ac", "#4e79a7", "#f28e2b"};
  for (const Region& r : m.regions) {
    os << "<path fill-rule=\"evenodd\" fill=\"" << fills[std::clamp(r.color, 0, 2)]
       << "\" stroke=\"#333333\" stroke-width=\"0.5\" d=\"";
    for (const Polygon& l : r.loops) {
      for (std::size_t i = 0; i < l.size(); ++i) os << (i ? " L" : "M") << X(l[i]) << ' ' << Y(l[i]);
      os << " Z ";
    }
    os << "\"/>\n";
  }
  for (const InterfaceSegment& s : m.interfaces) {
    os << "<polyline fill=\"none\" stroke=\"#e15759\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.polyline.size(); ++i) os << (i ? " " : "") << X(s.polyline[i]) << ',' << Y(s.polyline[i]);
    os << "\"/>\n";
  }
  for (auto [a, b] : g.edges())
    os << "<line x1=\"" << X(g.vertex(a)) << "\" y1=\"" << Y(g.vertex(a)) << "\" x2=\"" << X(g.vertex(b)) << "\" y2=\""
       << Y(g.vertex(b)) << "\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
  for (Vec2 p : g.vertices()) os << "<circle cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"3\" fill=\"#000000\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void write_mesh_vtk(std::ostream& os, const Mesh& m) {
  vtk_header(os, "graphdarcy mesh", "UNSTRUCTURED_GRID");
  vtk_cells(os, m);
  os << "CELL_DATA " << m.cells.size() << "\n";
  vtk_int_scalars(os, "region", m.cells.size(), [&](std::size_t i) { return m.cell_region[i]; });
  vtk_int_scalars(os, "color", m.cells.size(), [&](std::size_t i) { return m.cell_color[i]; });
}

void write_facets_vtk(std::ostream& os, const Mesh& m) {
  vtk_header(os, "graphdarcy facets", "POLYDATA");
  vtk_points(os, m.nodes);
  os << "LINES " << m.facets.size() << ' ' << 3 * m.facets.size() << "\n";
  for (const Facet& f : m.facets) os << "2 " << f.nodes[0] << ' ' << f.nodes[1] << "\n";
  os << "CELL_DATA " << m.facets.size() << "\n";
  vtk_int_scalars(os, "class", m.facets.size(), [&](std::size_t i) { return int(m.facets[i].cls); });
  vtk_int_scalars(os, "interface", m.facets.size(), [&](std::size_t i) { return m.facets[i].interface; });
}

void write_solution_vtk(std::ostream& os, const Mesh& m, const Fields& f) {
  vtk_header(os, "graphdarcy solution", "UNSTRUCTURED_GRID");
  vtk_cells(os, m);
  const std::size_t nc = m.cells.size();
  os << "CELL_DATA " << nc << "\n";
  vtk_int_scalars(os, "region", nc, [&](std::size_t i) { return m.cell_region[i]; });
  vtk_int_scalars(os, "color", nc, [&](std::size_t i) { return m.cell_color[i]; });
  vtk_scalars(os, "p1", nc, [&](std::size_t i) { return f.p1_cell[i]; });
  vtk_vectors(os, "u1", f.u1_cell);
  vtk_vectors(os, "u2", f.u2_cell);
  os << "POINT_DATA " << m.nodes.size() << "\n";
  vtk_scalars(os, "p2", m.nodes.size(), [&](std::size_t i) { return f.p2_node[i]; });
}

void write_projection_vtk(std::ostream& os, const Mesh& m, const Expr& vx, const Expr& vy, const ProjectionResult& r) {
  vtk_header(os, "graphdarcy projection", "UNSTRUCTURED_GRID");
  vtk_cells(os, m);
  const std::size_t nc = m.cells.size();
  std::vector<Vec2> pv(nc, {0.0, 0.0}), perp(nc, {0.0, 0.0});
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] != 2) continue;
    auto g = hat_gradients(m, c);
    for (int i = 0; i < 3; ++i) pv[c] = pv[c] + (r.xi[m.cells[c][i]] + r.eta[m.cells[c][i]]) * g[i];
    Vec2 x = m.cell_centroid(c);
    perp[c] = Vec2{vx(x.x, x.y), vy(x.x, x.y)} - pv[c];
  }
  os << "CELL_DATA " << nc << "\n";
  vtk_int_scalars(os, "color", nc, [&](std::size_t i) { return m.cell_color[i]; });
  vtk_vectors(os, "Pv", pv);
  vtk_vectors(os, "v_minus_Pv", perp);
  os << "POINT_DATA " << m.nodes.size() << "\n";
  vtk_scalars(os, "xi", m.nodes.size(), [&](std::size_t i) { return r.xi[i]; });
  vtk_scalars(os, "eta", m.nodes.size(), [&](std::size_t i) { return r.eta[i]; });
}

void write_gamma_csv(std::ostream& os, const Fields& f, const Coefficients& k) {
  os << "facet,x,y,u1n,u2n,p1,p2,r_flux,r_stress\n";
  for (const FacetTrace& t : f.gamma) {
    Vec2 x = t.midpoint;
    double rf = t.u1n - t.u2n - eval_checked(k.beta, x, "beta") * t.p2 - eval_checked(k.f_flux, x, "f_flux");
    double rs = t.p2 - t.p1 - eval_checked(k.f_stress, x, "f_stress");
    os << t.facet;
    for (double v : {x.x, x.y, t.u1n, t.u2n, t.p1, t.p2, rf, rs}) os << ',' << format_double(v);
    os << "\n";
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "level,h,e_u1_L2,e_p1_L2,e_p2_L2,e_p2_H1s,e_u2_L2,rate_u1_L2,rate_p1_L2,rate_p2_L2,rate_p2_H1s,rate_u2_L2\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const LevelResult& r = t.rows[i];
    os << r.level << ',' << format_double(r.h);
    for (double v : {r.errors.u1, r.errors.p1, r.errors.p2, r.errors.p2_h1, r.errors.u2}) os << ',' << format_double(v);
    if (i == 0) {
      os << ",,,,,";
    } else {
      ErrorNorms q = t.rates(i);
      for (double v : {q.u1, q.p1, q.p2, q.p2_h1, q.u2}) os << ',' << format_double(v);
    }
    os << "\n";
  }
}

Json quality_to_json(const MeshQuality& q) {
  return Json{{"num_nodes", q.num_nodes},
              {"num_cells", q.num_cells},
              {"min_angle_deg", q.min_angle_deg},
              {"max_angle_deg", q.max_angle_deg},
              {"h_min", q.h_min},
              {"h_max", q.h_max},
              {"facets",
               Json{{"interior", q.facet_counts[0]},
                    {"gamma", q.facet_counts[1]},
                    {"outer_d", q.facet_counts[2]},
                    {"outer_n", q.facet_counts[3]}}}};
}

Json verify_to_json(const VerifyReport& rep) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < rep.table.rows.size(); ++i) {
    const LevelResult& r = rep.table.rows[i];
    rows.push_back(Json{{"level", r.level},
                        {"h", r.h},
                        {"cells", r.cells},
                        {"dofs", r.dofs},
                        {"errors", errors_json(r.errors)},
                        {"rates", i == 0 ? Json(nullptr) : errors_json(rep.table.rates(i))},
                        {"interface", Json{{"flux", r.interface.flux}, {"stress", r.interface.stress}}},
                        {"conservation", r.conservation},
                        {"quadrature_error", r.quadrature_error},
                        {"residual", r.residual},
                        {"stability",
                         Json{{"solution_norm", r.stability.solution_norm},
                              {"data_norm", r.stability.data_norm},
                              {"ratio", r.stability.ratio()}}}});
  }
  Json checks = Json::array();
  for (const Check& c : rep.checks)
    checks.push_back(Json{{"name", c.name},
                          {"value", number_or_null(c.value)},
                          {"threshold", c.threshold},
                          {"bound", c.upper ? "max" : "min"},
                          {"passed", c.passed}});
  return Json{{"case", rep.case_name},
              {"levels", rep.levels},
              {"seed", rep.seed},
              {"passed", rep.passed()},
              {"rows", rows},
              {"inf_sup", rep.inf_sup},
              {"coercivity", Json{{"min_rayleigh", rep.coercivity.min_rayleigh}, {"bound", rep.coercivity.bound}}},
              {"checks", checks}};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace graphdarcy
