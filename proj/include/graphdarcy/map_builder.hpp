/**
 * @file map_builder.hpp
 * @brief Tubular maps, downscaling maps and their validation.
 *
 * Every region is assembled from corner pieces: one piece per (vertex, face) corner of the
 * embedding, so regions of neighbouring vertices share bitwise identical boundary vertices.
 */
#pragma once

#include "graphdarcy/error.hpp"
#include "graphdarcy/geometry.hpp"
#include "graphdarcy/plane_graph.hpp"

#include <string>
#include <vector>

namespace graphdarcy {

struct Region {
  int owner = -1;
  std::vector<Polygon> loops;  // loops[0] is the outer boundary (counterclockwise)
  int color = 0;               // 1 or 2; 0 when the graph has no two-coloring

  const Polygon& polygon() const { return loops.front(); }
  double area() const;
};

struct InterfaceSegment {
  int edge = -1;           // graph edge id
  int left_region = -1;    // color-1 side
  int right_region = -1;   // color-2 side
  std::vector<Vec2> polyline;  // left region lies to the left of the polyline direction

  /// Unit normal of segment i, pointing from the left (color 1) to the right (color 2).
  Vec2 normal(std::size_t i) const;
  double length() const;
};

struct DownscalingMap {
  std::string kind;  // "downscaling", "tubular", "barycentric", "two_strip"
  double epsilon = 0.0;
  std::vector<Region> regions;       // regions[v].owner == v
  std::vector<Polygon> domain;       // boundary loops of the closure of the union
  std::vector<InterfaceSegment> interfaces;

  /// Region pair -> interface index, -1 if none.
  int interface_between(int r0, int r1) const;
};

struct MapOptions {
  double epsilon = 0.0;  // <= 0 selects auto_epsilon
  int n_arc = 16;        // segments per half circle
};

struct ConditionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  double tolerance = 0.0;
  std::vector<ConditionResult> conditions;  // (i) .. (vi)
  double min_adjacent_shared_length = 0.0;
  double max_nonadjacent_shared_length = 0.0;
  std::vector<std::pair<int, int>> offending_pairs;
  int euler_characteristic = 0;
  int domain_loops = 0;
  double corridor_half_width = 0.0;
  double region_area_sum = 0.0;
  double domain_area = 0.0;

  bool passed() const;
  /// Indices (0-based) of failed conditions.
  std::vector<int> failed() const;
};

class ValidationFailedError : public Error {
 public:
  ValidationFailedError(ValidationReport report, const std::string& what)
      : Error(ErrorCode::ValidationFailed, what), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// 0.25 x min(vertex distance, vertex to non-incident edge distance).
double auto_epsilon(const PlaneGraph& g);

std::vector<Region> tubular_map(const PlaneGraph& g, double epsilon, int n_arc = 16);

/// Corner regions of a bridgeless component on its inner faces.
std::vector<Region> barycentric_regions(const PlaneGraph& g, const std::vector<int>& component,
                                        int n_arc = 16);

DownscalingMap downscaling_map(const PlaneGraph& g, const MapOptions& opt = {});

/// Wraps regions (indexed by owner) into a map: colors, domain loops and interfaces.
DownscalingMap assemble_map(const PlaneGraph& g, std::vector<Region> regions, const std::string& kind,
                            double epsilon);

/// The rectangles [0,1]x[0,1] (color 1) and [1,2]x[0,1] (color 2) with the graph
/// P2 at (0.5,0.5)-(1.5,0.5).
DownscalingMap two_strip_map();
PlaneGraph two_strip_graph();

ValidationReport validate_map(const DownscalingMap& map, const PlaneGraph& g, double tol);

/// Default validation tolerance: 1e-9 x bounding-box diagonal of the map.
double default_tolerance(const DownscalingMap& map);

/// Boundary loops of the union of counterclockwise pieces: oppositely directed copies of an
/// edge cancel, the rest is chained into loops. Exposed for tests.
std::vector<Polygon> union_boundary(const std::vector<Polygon>& pieces);

/// Chains directed edges into closed loops; at a vertex with several exits the first one
/// clockwise from the incoming edge is taken, so touching loops stay separate.
std::vector<Polygon> chain_loops(const std::vector<std::pair<Vec2, Vec2>>& directed);

}  // namespace graphdarcy
