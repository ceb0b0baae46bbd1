/**
 * @file plane_graph.hpp
 * @brief Straight-line plane graphs: rotation system, faces, dual, bridges, two-coloring.
 *
 * Half-edge convention: edge e = (u, v) owns half-edges 2e (u -> v) and 2e+1 (v -> u).
 * Faces lie to the left of their half-edges.
 */
#pragma once

#include "graphdarcy/geometry.hpp"

#include <array>
#include <optional>
#include <vector>

namespace graphdarcy {

struct Face {
  int id = -1;
  std::vector<int> boundary;  // half-edge ids in walk order
  bool is_outer = false;
};

class PlaneGraph {
 public:
  PlaneGraph() = default;

  int num_vertices() const { return int(vertices_.size()); }
  int num_edges() const { return int(edges_.size()); }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  Vec2 vertex(int v) const { return vertices_[v]; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  std::array<int, 2> edge(int e) const { return edges_[e]; }

  static int twin(int h) { return h ^ 1; }
  int origin(int h) const { return (h & 1) ? edges_[h >> 1][1] : edges_[h >> 1][0]; }
  int target(int h) const { return origin(h ^ 1); }
  Vec2 direction(int h) const { return vertex(target(h)) - vertex(origin(h)); }

  /// Outgoing half-edges at v, counterclockwise by angle (atan2 order).
  const std::vector<int>& rotation(int v) const { return rotation_[v]; }
  int degree(int v) const { return int(rotation_[v].size()); }
  int ccw_next(int h) const;
  int cw_next(int h) const;
  /// Next half-edge along the face to the left of h.
  int face_next(int h) const { return cw_next(h ^ 1); }

  const std::vector<Face>& faces() const { return faces_; }
  int face_of(int h) const { return face_of_[h]; }
  int outer_face() const { return outer_face_; }

  friend PlaneGraph build_embedding(const std::vector<Vec2>&, const std::vector<std::array<int, 2>>&);

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::vector<int>> rotation_;
  std::vector<int> rot_pos_;
  std::vector<Face> faces_;
  std::vector<int> face_of_;
  int outer_face_ = -1;
};

/// Validates the drawing and builds the rotation system and faces.
/// Throws NotSimple, NotConnected, EdgeCrossing, DuplicateCoordinate, InvalidArgument.
PlaneGraph build_embedding(const std::vector<Vec2>& vertices,
                           const std::vector<std::array<int, 2>>& edges);

const std::vector<Face>& faces(const PlaneGraph& g);

/// Multigraph with a combinatorial rotation system (loops and parallel edges allowed).
struct MultiGraph {
  int num_vertices = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<Vec2> positions;             // representational only
  std::vector<std::vector<int>> rotation;  // outgoing half-edges per vertex, cyclic order
};

/// Face walks of a combinatorial map (same next rule as PlaneGraph::face_next).
std::vector<std::vector<int>> map_faces(const MultiGraph& m);

MultiGraph dual(const PlaneGraph& g);
MultiGraph dual(const MultiGraph& m);
MultiGraph as_multigraph(const PlaneGraph& g);

/// Backtracking isomorphism test on adjacency multiplicities.
/// Throws IsomorphismTimeout above `cap` vertices.
bool is_isomorphic(const MultiGraph& a, const MultiGraph& b, int cap = 12);

bool double_dual_isomorphic(const PlaneGraph& g, int cap = 12);

/// Edge ids of all bridges, ascending.
std::vector<int> bridges(const PlaneGraph& g);

/// Bridges whose two half-edges both lie on the outer face walk. A bridge hanging
/// inside an inner face is not included.
std::vector<int> outer_bridges(const PlaneGraph& g);

/// Colors 1/2 per vertex with vertex 0 colored 1; nullopt if an odd cycle exists.
std::optional<std::vector<int>> bipartition(const PlaneGraph& g);

/// Vertex sequence of an odd cycle, or empty if g is bipartite.
std::vector<int> find_odd_cycle(const PlaneGraph& g);

struct BridgeTree {
  std::vector<std::vector<int>> components;   // sorted vertex ids
  std::vector<std::array<int, 3>> tree_edges;  // (component i, component j, edge id)
  std::vector<int> component_of;               // per vertex
};

BridgeTree bridge_component_tree(const PlaneGraph& g);

}  // namespace graphdarcy
