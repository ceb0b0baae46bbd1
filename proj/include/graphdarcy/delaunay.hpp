/**
 * @file delaunay.hpp
 * @brief Incremental Delaunay triangulation and conforming quality refinement.
 */
#pragma once

#include "graphdarcy/geometry.hpp"

#include <array>
#include <vector>

namespace graphdarcy {

/// Bowyer-Watson triangulation inside a large enclosing triangle; exact predicates.
class DelaunayTriangulation {
 public:
  explicit DelaunayTriangulation(const BBox& box);

  /// Inserts p and returns its vertex id (the existing id if p is already present).
  int insert(Vec2 p, int hint = -1);

  const std::vector<Vec2>& points() const { return pts_; }
  bool is_super(int v) const { return v < 3; }

  /// Live triangles not touching the enclosing triangle, counterclockwise.
  std::vector<std::array<int, 3>> triangles() const;

  /// True if a, b are joined by a triangulation edge.
  bool has_edge(int a, int b) const;
  /// Apexes of the (up to two) triangles on edge ab; -1 where absent.
  std::array<int, 2> edge_apexes(int a, int b) const;

  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // nb[i] lies across the edge opposite v[i]
    bool alive = true;
  };
  const std::vector<Tri>& raw() const { return tris_; }
  int last_triangle() const { return last_; }
  int triangle_of(int v) const { return vtri_[v]; }
  /// Live triangles incident to vertex v.
  std::vector<int> around(int v) const;

 private:
  int locate(Vec2 p, int hint) const;
  int new_tri(std::array<int, 3> v);

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<int> vtri_;  // one incident live triangle per vertex
  int last_ = 0;
  mutable unsigned rng_ = 12345u;
  std::vector<int> stamp_;
  int stamp_id_ = 0;
};

/// Plain Delaunay triangulation of a point set (duplicates merged).
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts);

struct ConformingOptions {
  double h_max = 0.0;            // longest allowed edge inside the domain
  double min_angle_deg = 15.0;   // quality floor
  int max_points = 2000000;
};

struct ConformingResult {
  std::vector<Vec2> points;
  std::vector<std::array<int, 3>> triangles;  // inside the domain only, counterclockwise
  std::vector<char> exempt;                   // triangle kept below the floor at a small input angle
  std::vector<int> component;                 // connected pieces separated by input segments
};

/// Conforming Delaunay refinement of a planar straight-line graph. Every input segment is
/// a union of output edges. `domain` lists the boundary loops that decide which triangles
/// are kept (nonzero winding of the centroid).
ConformingResult conforming_delaunay(const std::vector<Vec2>& points,
                                     const std::vector<std::array<int, 2>>& segments,
                                     const std::vector<Polygon>& domain, const ConformingOptions& opt);

}  // namespace graphdarcy
