// Graph corpus shared by the unit and acceptance tests.
#pragma once

#include "graphdarcy/plane_graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace corpus {

using graphdarcy::Vec2;

struct Graph {
  std::string name;
  std::vector<Vec2> pts;
  std::vector<std::array<int, 2>> edges;

  graphdarcy::PlaneGraph build() const { return graphdarcy::build_embedding(pts, edges); }
};

// Delaunay graphs of random points; odd entries keep only edges between BFS layers of
// different parity, which leaves a connected bipartite graph.
std::vector<Graph> random_delaunay(int count, int max_vertices, std::uint64_t seed);
// Spanning trees of random Delaunay graphs.
std::vector<Graph> random_trees(int count, int max_vertices, std::uint64_t seed);
// K3, planar K4, paths, stars, grids, bridged composites.
std::vector<Graph> named();
// Even cycles chained by bridges.
std::vector<Graph> cycle_chains();

std::vector<Graph> all(std::uint64_t seed = 20240611);

// Connectivity after deleting each edge in turn.
std::vector<int> brute_force_bridges(int n, const std::vector<std::array<int, 2>>& edges);

}  // namespace corpus
