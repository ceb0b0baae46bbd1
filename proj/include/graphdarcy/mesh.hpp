/**
 * @file mesh.hpp
 * @brief Conforming triangle meshes of a map with region tags and facet classes.
 */
#pragma once

#include "graphdarcy/geometry.hpp"
#include "graphdarcy/map_builder.hpp"

#include <array>
#include <vector>

namespace graphdarcy {

enum class FacetClass { Interior = 0, Gamma = 1, OuterD = 2, OuterN = 3 };

const char* facet_class_name(FacetClass c);

struct Facet {
  std::array<int, 2> nodes;           // cells[0] lies to the left of nodes[0] -> nodes[1]
  std::array<int, 2> cells{-1, -1};   // cells[1] == -1 on the outer boundary
  FacetClass cls = FacetClass::Interior;
  int interface = -1;                 // index into the map's interfaces for Gamma facets
  Vec2 normal;                        // unit, from cells[0] towards cells[1] (outward on the boundary)

  double length(const std::vector<Vec2>& nodes_xy) const;
};

struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> cells;      // counterclockwise
  std::vector<int> cell_region;
  std::vector<int> cell_color;                // 1 or 2
  std::vector<Facet> facets;
  std::vector<std::array<int, 3>> cell_facets;  // facet opposite local vertex i
  std::vector<std::array<int, 2>> interface_regions;  // (color-1 region, color-2 region) per interface

  int num_nodes() const { return int(nodes.size()); }
  int num_cells() const { return int(cells.size()); }
  double cell_area(int c) const;
  Vec2 cell_centroid(int c) const;
  /// Longest edge over all cells.
  double h() const;
};

struct MeshOptions {
  double min_angle_deg = 15.0;
  int max_points = 2000000;
};

/// Builds facets and their classes from tagged cells. Gamma facets separate regions of
/// different colors; their interface id is looked up in `interface_regions`.
/// Throws DegenerateGeometry for non-manifold facets or same-color region contact.
Mesh make_mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> cells, std::vector<int> cell_region,
               std::vector<int> cell_color, std::vector<std::array<int, 2>> interface_regions = {});

/// Conforming Delaunay mesh with every region boundary resolved by facets.
/// Throws InvalidArgument (h_target <= 0) or QualityFailure.
Mesh triangulate(const DownscalingMap& map, double h_target, const MeshOptions& opt = {});

/// Red refinement: every cell into four, tags inherited. New node ids follow facet order.
Mesh refine(const Mesh& mesh);

struct MeshQuality {
  double min_angle_deg = 0.0;
  double max_angle_deg = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  int num_nodes = 0;
  int num_cells = 0;
  std::array<int, 4> facet_counts{};  // indexed by FacetClass
};

MeshQuality mesh_quality(const Mesh& mesh);

}  // namespace graphdarcy
