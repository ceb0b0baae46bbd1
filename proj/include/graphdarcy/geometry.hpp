/**
 * @file geometry.hpp
 * @brief Points, exact sign predicates and polygon helpers.
 */
#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace graphdarcy {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }
inline bool operator<(Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 left_normal(Vec2 d) { return {-d.y, d.x}; }
inline Vec2 right_normal(Vec2 d) { return {d.y, -d.x}; }
inline Vec2 unit(Vec2 d) {
  double n = norm(d);
  return {d.x / n, d.y / n};
}
inline Vec2 midpoint(Vec2 a, Vec2 b) { return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5}; }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

/// Sign of the orientation of (a, b, c): +1 counterclockwise, -1 clockwise, 0 collinear.
/// Exact for all finite double inputs.
int orient2d(Vec2 a, Vec2 b, Vec2 c);

/// Sign of the in-circle determinant: +1 if d lies strictly inside the circle through
/// the counterclockwise triangle (a, b, c), -1 outside, 0 on it. Exact.
int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Exact sign of (a - p) . (b - p).
int dot_sign(Vec2 p, Vec2 a, Vec2 b);

/// Exact test: closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Exact test: p lies on the closed segment [a,b].
bool on_segment(Vec2 p, Vec2 a, Vec2 b);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

using Polygon = std::vector<Vec2>;  // closed implicitly, no repeated last point

double signed_area(const Polygon& poly);
Vec2 area_centroid(const Polygon& poly);
double perimeter(const Polygon& poly);

/// Winding number of a closed loop about p (p must not lie on the loop).
int winding_number(const Polygon& loop, Vec2 p);

/// Distance from p to the loop's boundary.
double boundary_distance(const Polygon& loop, Vec2 p);

/// True if the loop has no self-intersections (adjacent segments may only share
/// their common vertex). Exact.
bool is_simple_loop(const Polygon& loop);

/// Like is_simple_loop, but non-adjacent segments may meet at a common vertex
/// (a loop pinched at isolated points).
bool is_weakly_simple_loop(const Polygon& loop);

/// Length of the overlap of two segments if they are collinear within tol, else 0.
double collinear_overlap(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol);

struct BBox {
  double xmin = INFINITY, ymin = INFINITY, xmax = -INFINITY, ymax = -INFINITY;
  void add(Vec2 p) {
    xmin = std::fmin(xmin, p.x);
    ymin = std::fmin(ymin, p.y);
    xmax = std::fmax(xmax, p.x);
    ymax = std::fmax(ymax, p.y);
  }
  double diagonal() const { return std::hypot(xmax - xmin, ymax - ymin); }
  bool overlaps(const BBox& o, double pad) const {
    return xmin <= o.xmax + pad && o.xmin <= xmax + pad && ymin <= o.ymax + pad &&
           o.ymin <= ymax + pad;
  }
};

BBox bbox_of(const std::vector<Vec2>& pts);

/// Ear-clipping triangulation of a simple counterclockwise polygon using exact
/// predicates. Returns vertex-index triples; empty on failure.
std::vector<std::array<int, 3>> ear_clip(const Polygon& poly);

}  // namespace graphdarcy
