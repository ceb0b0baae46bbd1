/**
 * @file io.hpp
 * @brief JSON, SVG, legacy VTK and CSV readers and writers.
 *
 * Floating-point values in CSV and VTK are printed with 17 significant digits; JSON uses
 * the shortest representation that round-trips.
 */
#pragma once

#include "graphdarcy/darcy_mixed.hpp"
#include "graphdarcy/map_builder.hpp"
#include "graphdarcy/mesh.hpp"
#include "graphdarcy/plane_graph.hpp"
#include "graphdarcy/verify.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace graphdarcy {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

struct GraphInput {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 2>> edges;
};

/// {"vertices": [[x, y], ...], "edges": [[i, j], ...]}. Throws InvalidArgument on schema errors.
GraphInput graph_from_json(const Json& j);
/// Throws Io if the file cannot be read.
GraphInput read_graph(const std::string& path);
Json graph_to_json(const GraphInput& g);

Json map_to_json(const DownscalingMap& map);
Json report_to_json(const ValidationReport& report);

/// Regions filled by color class, interfaces stroked, graph vertices dotted.
std::string map_svg(const DownscalingMap& map, const PlaneGraph& g);

void write_mesh_vtk(std::ostream& os, const Mesh& mesh);
/// Facets as poly-lines with their class (0 interior, 1 Gamma, 2 outer Dirichlet, 3 outer Neumann).
void write_facets_vtk(std::ostream& os, const Mesh& mesh);
void write_solution_vtk(std::ostream& os, const Mesh& mesh, const Fields& fields);
/// Projected field: potentials as point data, Pv and v - Pv as cell vectors on color 2.
void write_projection_vtk(std::ostream& os, const Mesh& mesh, const Expr& vx, const Expr& vy,
                          const ProjectionResult& r);

/// One row per Gamma facet with both interface residuals (signed).
void write_gamma_csv(std::ostream& os, const Fields& fields, const Coefficients& coeffs);
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);

Json quality_to_json(const MeshQuality& q);
Json verify_to_json(const VerifyReport& report);

/// Reads a whole file; throws Io.
std::string read_text(const std::string& path);
/// Writes a whole file (parent directory must exist); throws Io.
void write_text(const std::string& path, const std::string& text);

}  // namespace graphdarcy
