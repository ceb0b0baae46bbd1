#include "graphdarcy/cli.hpp"

#include "graphdarcy/map_builder.hpp"
#include "graphdarcy/mesh.hpp"
#include "graphdarcy/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace graphdarcy {

namespace fs = std::filesystem;

namespace {

Error bad_config(const std::string& what) { return Error(ErrorCode::InvalidArgument, "config: " + what); }

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw bad_config(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw bad_config("unknown key '" + it.key() + "' in " + where);
}

std::string get_string(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw bad_config(std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

double get_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw bad_config(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

int get_int(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw bad_config(std::string("'") + key + "' must be an integer");
  return j[key].get<int>();
}

bool get_bool(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw bad_config(std::string("'") + key + "' must be true or false");
  return j[key].get<bool>();
}

struct Domain {
  PlaneGraph graph;
  DownscalingMap map;
  ValidationReport report;
};

PlaneGraph load_graph(const RunConfig& cfg) {
  if (cfg.graph_file.empty()) throw bad_config("'graph_file' is required for domain 'graph'");
  fs::path p(cfg.graph_file);
  if (p.is_relative()) p = fs::path(cfg.base_dir) / p;
  GraphInput in = read_graph(p.string());
  return build_embedding(in.vertices, in.edges);
}

// Builds and validates the map. Validation failures are reported, not thrown.
Domain build_domain(const RunConfig& cfg) {
  Domain d;
  if (cfg.domain == "two_strip") {
    d.graph = two_strip_graph();
    d.map = two_strip_map();
  } else {
    d.graph = load_graph(cfg);
    const double eps = cfg.epsilon.value_or(0.0);
    if (cfg.map_kind == "tubular") {
      double e = eps > 0.0 ? eps : auto_epsilon(d.graph);
      d.map = assemble_map(d.graph, tubular_map(d.graph, e, cfg.n_arc), "tubular", e);
    } else {
      MapOptions opt;
      opt.epsilon = eps;
      opt.n_arc = cfg.n_arc;
      try {
        d.map = downscaling_map(d.graph, opt);
      } catch (const ValidationFailedError& e) {
        d.report = e.report();
        return d;
      }
    }
  }
  BBox box;
  for (const Polygon& l : d.map.domain)
    for (Vec2 p : l) box.add(p);
  d.report = validate_map(d.map, d.graph, cfg.tolerances.validation_relative * box.diagonal());
  return d;
}

Domain valid_domain(const RunConfig& cfg) {
  Domain d = build_domain(cfg);
  if (!d.report.passed()) {
    std::string which;
    for (int i : d.report.failed()) which += " " + d.report.conditions[i].name;
    throw ValidationFailedError(d.report, "map fails" + which);
  }
  return d;
}

Mesh build_mesh(const RunConfig& cfg, const DownscalingMap& map) {
  Mesh m = triangulate(map, cfg.h_target);
  for (int i = 0; i < cfg.refine_levels; ++i) m = refine(m);
  return m;
}

std::string out_path(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

template <class F>
std::string render(F f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Expr parse_named(const std::string& text, const char* name) {
  try {
    return parse(text);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("coefficient '") + name + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const Json& j, const std::string& base_dir) {
  only_keys(j,
            {"graph_file", "domain", "map_kind", "epsilon", "n_arc", "h_target", "refine_levels", "coefficients",
             "outputs", "tolerances", "case", "levels", "field"},
            "config");
  RunConfig c;
  c.base_dir = base_dir;
  c.graph_file = get_string(j, "graph_file", "");
  c.domain = get_string(j, "domain", c.domain);
  if (c.domain != "graph" && c.domain != "two_strip") throw bad_config("'domain' must be \"graph\" or \"two_strip\"");
  c.map_kind = get_string(j, "map_kind", c.map_kind);
  if (c.map_kind != "downscaling" && c.map_kind != "tubular")
    throw bad_config("'map_kind' must be \"downscaling\" or \"tubular\"");
  if (j.contains("epsilon")) {
    if (j["epsilon"].is_string() && j["epsilon"] == "auto") {
      c.epsilon.reset();
    } else if (j["epsilon"].is_number() && j["epsilon"].get<double>() > 0.0) {
      c.epsilon = j["epsilon"].get<double>();
    } else {
      throw bad_config("'epsilon' must be \"auto\" or a positive number");
    }
  }
  c.n_arc = get_int(j, "n_arc", c.n_arc);
  if (c.n_arc < 2) throw bad_config("'n_arc' must be at least 2");
  c.h_target = get_number(j, "h_target", c.h_target);
  if (!(c.h_target > 0.0)) throw bad_config("'h_target' must be positive");
  c.refine_levels = get_int(j, "refine_levels", c.refine_levels);
  if (c.refine_levels < 0) throw bad_config("'refine_levels' must be >= 0");
  if (j.contains("coefficients")) {
    const Json& k = j["coefficients"];
    only_keys(k, {"a", "beta", "gx", "gy", "F", "F2", "f_flux", "f_stress"}, "coefficients");
    auto& s = c.coefficients;
    s.a = get_string(k, "a", s.a);
    s.beta = get_string(k, "beta", s.beta);
    s.gx = get_string(k, "gx", s.gx);
    s.gy = get_string(k, "gy", s.gy);
    s.F = get_string(k, "F", s.F);
    s.F2 = get_string(k, "F2", s.F2);
    s.f_flux = get_string(k, "f_flux", s.f_flux);
    s.f_stress = get_string(k, "f_stress", s.f_stress);
  }
  if (j.contains("outputs")) {
    const Json& o = j["outputs"];
    only_keys(o, {"svg", "vtk", "csv", "report"}, "outputs");
    c.outputs.svg = get_bool(o, "svg", c.outputs.svg);
    c.outputs.vtk = get_bool(o, "vtk", c.outputs.vtk);
    c.outputs.csv = get_bool(o, "csv", c.outputs.csv);
    c.outputs.report = get_bool(o, "report", c.outputs.report);
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    only_keys(t, {"validation_relative", "solve_residual"}, "tolerances");
    c.tolerances.validation_relative = get_number(t, "validation_relative", c.tolerances.validation_relative);
    c.tolerances.solve_residual = get_number(t, "solve_residual", c.tolerances.solve_residual);
    if (!(c.tolerances.validation_relative > 0.0) || !(c.tolerances.solve_residual > 0.0))
      throw bad_config("tolerances must be positive");
  }
  c.case_name = get_string(j, "case", c.case_name);
  c.levels = get_int(j, "levels", c.levels);
  if (j.contains("field")) {
    const Json& f = j["field"];
    only_keys(f, {"vx", "vy"}, "field");
    c.field_vx = get_string(f, "vx", "");
    c.field_vy = get_string(f, "vy", "");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string text = read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw bad_config(path + ": " + e.what());
  }
  std::string dir = fs::path(path).parent_path().string();
  return parse_config(j, dir.empty() ? "." : dir);
}

Coefficients make_coefficients(const RunConfig& cfg) {
  const auto& s = cfg.coefficients;
  Coefficients k;
  k.a = parse_named(s.a, "a");
  k.beta = parse_named(s.beta, "beta");
  k.gx = parse_named(s.gx, "gx");
  k.gy = parse_named(s.gy, "gy");
  k.F = parse_named(s.F, "F");
  if (!s.F2.empty()) k.F2 = parse_named(s.F2, "F2");
  k.f_flux = parse_named(s.f_flux, "f_flux");
  k.f_stress = parse_named(s.f_stress, "f_stress");
  return k;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::UnknownCase:
    case ErrorCode::NotSimple:
    case ErrorCode::NotConnected:
    case ErrorCode::EdgeCrossing:
    case ErrorCode::DuplicateCoordinate:
    case ErrorCode::TooLarge:
      return 1;
    default:
      return 2;
  }
}

int cmd_map(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  Domain d = build_domain(cfg);
  if (cfg.outputs.report) write_json(out_path(out, "map_report.json"), report_to_json(d.report));
  if (!d.map.regions.empty()) {
    write_json(out_path(out, "map.json"), map_to_json(d.map));
    if (cfg.outputs.svg) write_text(out_path(out, "map.svg"), map_svg(d.map, d.graph));
  }
  log << "map: " << d.map.regions.size() << " regions, " << d.map.interfaces.size() << " interfaces, validation "
      << (d.report.passed() ? "passed" : "FAILED");
  for (int i : d.report.failed()) log << " " << d.report.conditions[i].name;
  log << "\n";
  return d.report.passed() ? 0 : 2;
}

int cmd_mesh(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  Domain d = valid_domain(cfg);
  Mesh m = build_mesh(cfg, d.map);
  MeshQuality q = mesh_quality(m);
  if (cfg.outputs.vtk) {
    write_text(out_path(out, "mesh.vtk"), render([&](std::ostream& os) { write_mesh_vtk(os, m); }));
    write_text(out_path(out, "facets.vtk"), render([&](std::ostream& os) { write_facets_vtk(os, m); }));
  }
  if (cfg.outputs.report) write_json(out_path(out, "mesh_report.json"), quality_to_json(q));
  log << "mesh: " << q.num_nodes << " nodes, " << q.num_cells << " cells, min angle " << q.min_angle_deg << "\n";
  return 0;
}

int cmd_solve(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  Coefficients k = make_coefficients(cfg);
  Domain d = valid_domain(cfg);
  Mesh m = build_mesh(cfg, d.map);
  SaddleSystem sys = assemble(m, k);
  Solution sol = solve(sys, cfg.tolerances.solve_residual);
  Fields f = postprocess(sol, m, sys.layout);
  InterfaceResiduals ir = interface_residuals(sol, k, m);
  double cons = conservation_residual(sol, k, m);
  if (cfg.outputs.vtk)
    write_text(out_path(out, "solution.vtk"), render([&](std::ostream& os) { write_solution_vtk(os, m, f); }));
  if (cfg.outputs.csv)
    write_text(out_path(out, "gamma.csv"), render([&](std::ostream& os) { write_gamma_csv(os, f, k); }));
  if (cfg.outputs.report) {
    const DofLayout& L = sys.layout;
    Json rep{{"residual", sol.residual},
             {"dofs", Json{{"u1", L.n_u1()}, {"p1", L.n_p1()}, {"p2", L.n_p2()}, {"eta", L.n_p2()}, {"mean_constraints", L.num_pieces}}},
             {"mesh", quality_to_json(mesh_quality(m))},
             {"interface", Json{{"flux", ir.flux}, {"stress", ir.stress}}},
             {"conservation", cons},
             {"p2_min", sol.p2.minCoeff()},
             {"p2_max", sol.p2.maxCoeff()}};
    write_json(out_path(out, "solve_report.json"), rep);
  }
  log << "solve: residual " << sol.residual << ", interface residuals " << ir.flux << " / " << ir.stress << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& out, std::uint64_t seed, std::ostream& log) {
  if (cfg.levels < 2) throw bad_config("'levels' must be at least 2");
  ManufacturedCase mc = builtin_case(cfg.case_name);
  VerifyReport rep = verify_case(mc, cfg.levels, seed);
  if (cfg.outputs.csv)
    write_text(out_path(out, "convergence.csv"), render([&](std::ostream& os) { write_convergence_csv(os, rep.table); }));
  if (cfg.outputs.report) write_json(out_path(out, "verify_report.json"), verify_to_json(rep));
  for (const Check& c : rep.checks)
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " " << c.value << (c.upper ? " <= " : " >= ") << c.threshold << "\n";
  return rep.passed() ? 0 : 2;
}

int cmd_project(const RunConfig& cfg, const std::string& out, std::ostream& log) {
  if (cfg.field_vx.empty() || cfg.field_vy.empty()) throw bad_config("'field' with 'vx' and 'vy' is required");
  Expr vx = parse_named(cfg.field_vx, "vx"), vy = parse_named(cfg.field_vy, "vy");
  Domain d = valid_domain(cfg);
  Mesh m = build_mesh(cfg, d.map);
  ProjectionResult r = project_onto_V(m, vx, vy);
  ProjectionMetrics pm = projection_metrics(m, vx, vy, r);
  if (cfg.outputs.vtk)
    write_text(out_path(out, "projection.vtk"),
               render([&](std::ostream& os) { write_projection_vtk(os, m, vx, vy, r); }));
  if (cfg.outputs.report)
    write_json(out_path(out, "projection_report.json"),
               Json{{"inner", pm.inner},
                    {"residual_L2", pm.residual_l2},
                    {"max_cell_divergence", pm.max_cell_divergence},
                    {"max_boundary_flux", pm.max_boundary_flux}});
  log << "project: <Pv, v - Pv> = " << pm.inner << ", ||v - Pv|| = " << pm.residual_l2 << "\n";
  return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphdarcy: plane graphs to partitioned domains and coupled Darcy solves"};
  app.require_subcommand(1);
  std::string config, out_dir = ".";
  std::uint64_t seed = 1;
  const char* names[] = {"map", "mesh", "solve", "verify", "project"};
  const char* help[] = {"build and validate the map of a graph", "mesh the map", "solve the coupled problem",
                        "manufactured-solution study and stability checks", "project a vector field onto gradients"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for randomized checks");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = load_config(config);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + out_dir + "': " + ec.message());
    if (cmd == "map") return cmd_map(cfg, out_dir, out);
    if (cmd == "mesh") return cmd_mesh(cfg, out_dir, out);
    if (cmd == "solve") return cmd_solve(cfg, out_dir, out);
    if (cmd == "verify") return cmd_verify(cfg, out_dir, seed, out);
    return cmd_project(cfg, out_dir, out);
  } catch (const Error& e) {
    err << cmd << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << cmd << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace graphdarcy
