#include "graphdarcy/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace graphdarcy {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return distance(p, a + t * d);
}

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

double signed_area(const Polygon& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  Vec2 o = poly[0];
  for (std::size_t i = 1; i + 1 < n; ++i) s += cross(poly[i] - o, poly[i + 1] - o);
  return 0.5 * s;
}

Vec2 area_centroid(const Polygon& poly) {
  const std::size_t n = poly.size();
  Vec2 o = poly[0];
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    Vec2 p = poly[i] - o, q = poly[i + 1] - o;
    double w = cross(p, q);
    a += w;
    cx += w * (p.x + q.x);
    cy += w * (p.y + q.y);
  }
  if (a == 0.0) {
    Vec2 s{0, 0};
    for (auto& p : poly) s = s + p;
    return (1.0 / double(n)) * s;
  }
  return {o.x + cx / (3.0 * a), o.y + cy / (3.0 * a)};
}

double perimeter(const Polygon& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += distance(poly[i], poly[(i + 1) % poly.size()]);
  return s;
}

int winding_number(const Polygon& loop, Vec2 p) {
  int wn = 0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = loop[i], b = loop[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && orient2d(a, b, p) > 0) ++wn;
    } else {
      if (b.y <= p.y && orient2d(a, b, p) < 0) --wn;
    }
  }
  return wn;
}

double boundary_distance(const Polygon& loop, Vec2 p) {
  double d = INFINITY;
  for (std::size_t i = 0; i < loop.size(); ++i)
    d = std::min(d, point_segment_distance(p, loop[i], loop[(i + 1) % loop.size()]));
  return d;
}

namespace {

bool loop_simple(const Polygon& loop, bool allow_touching) {
  const int n = int(loop.size());
  if (n < 3) return false;
  for (int i = 0; i < n; ++i) {
    Vec2 a = loop[(i + n - 1) % n], b = loop[i], c = loop[(i + 1) % n];
    if (b == c) return false;
    if (orient2d(a, b, c) == 0 && dot_sign(b, a, c) > 0) return false;
  }
  struct Seg {
    double xmin, xmax;
    int i;
  };
  std::vector<Seg> segs(n);
  for (int i = 0; i < n; ++i) {
    Vec2 a = loop[i], b = loop[(i + 1) % n];
    segs[i] = {std::min(a.x, b.x), std::max(a.x, b.x), i};
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& s, const Seg& t) {
    return s.xmin < t.xmin || (s.xmin == t.xmin && s.i < t.i);
  });
  for (int s = 0; s < n; ++s) {
    const int i = segs[s].i;
    Vec2 a = loop[i], b = loop[(i + 1) % n];
    for (int t = s + 1; t < n && segs[t].xmin <= segs[s].xmax; ++t) {
      const int j = segs[t].i;
      Vec2 c = loop[j], d = loop[(j + 1) % n];
      if (std::max(c.y, d.y) < std::min(a.y, b.y) || std::max(a.y, b.y) < std::min(c.y, d.y)) continue;
      if ((i + 1) % n == j) {
        if (on_segment(d, a, b) || on_segment(a, c, d)) return false;
        continue;
      }
      if ((j + 1) % n == i) {
        if (on_segment(b, c, d) || on_segment(c, a, b)) return false;
        continue;
      }
      if (!segments_intersect(a, b, c, d)) continue;
      if (allow_touching) {
        bool ok = false;
        if (a == c) ok = !on_segment(b, c, d) && !on_segment(d, a, b);
        else if (a == d) ok = !on_segment(b, c, d) && !on_segment(c, a, b);
        else if (b == c) ok = !on_segment(a, c, d) && !on_segment(d, a, b);
        else if (b == d) ok = !on_segment(a, c, d) && !on_segment(c, a, b);
        if (ok) continue;
      }
      return false;
    }
  }
  return true;
}

}  // namespace

bool is_simple_loop(const Polygon& loop) { return loop_simple(loop, false); }

bool is_weakly_simple_loop(const Polygon& loop) { return loop_simple(loop, true); }

double collinear_overlap(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol) {
  double lab = distance(a, b), lcd = distance(c, d);
  if (lab == 0.0 || lcd == 0.0) return 0.0;
  Vec2 u = (1.0 / lab) * (b - a);
  if (std::fabs(cross(u, c - a)) > tol || std::fabs(cross(u, d - a)) > tol) return 0.0;
  Vec2 w = (1.0 / lcd) * (d - c);
  if (std::fabs(cross(w, a - c)) > tol || std::fabs(cross(w, b - c)) > tol) return 0.0;
  double sc = dot(c - a, u), sd = dot(d - a, u);
  double lo = std::max(0.0, std::min(sc, sd));
  double hi = std::min(lab, std::max(sc, sd));
  return std::max(0.0, hi - lo);
}

BBox bbox_of(const std::vector<Vec2>& pts) {
  BBox b;
  for (auto& p : pts) b.add(p);
  return b;
}

std::vector<std::array<int, 3>> ear_clip(const Polygon& poly) {
  const int n = int(poly.size());
  std::vector<std::array<int, 3>> tris;
  if (n < 3) return tris;
  std::vector<int> prev(n), next(n);
  for (int i = 0; i < n; ++i) {
    prev[i] = (i + n - 1) % n;
    next[i] = (i + 1) % n;
  }
  std::vector<char> alive(n, 1);
  auto is_ear = [&](int i) {
    int p = prev[i], q = next[i];
    if (orient2d(poly[p], poly[i], poly[q]) <= 0) return false;
    for (int k = next[q]; k != p; k = next[k]) {
      if (orient2d(poly[prev[k]], poly[k], poly[next[k]]) > 0) continue;  // only non-convex can block
      Vec2 r = poly[k];
      if (orient2d(poly[p], poly[i], r) >= 0 && orient2d(poly[i], poly[q], r) >= 0 &&
          orient2d(poly[q], poly[p], r) >= 0)
        return false;
    }
    return true;
  };
  int remaining = n;
  int i = 0;
  int stall = 0;
  while (remaining > 3) {
    if (is_ear(i)) {
      int p = prev[i], q = next[i];
      tris.push_back({p, i, q});
      alive[i] = 0;
      next[p] = q;
      prev[q] = p;
      --remaining;
      stall = 0;
      i = q;
    } else {
      i = next[i];
      if (++stall > remaining) return {};
    }
  }
  int p = prev[i], q = next[i];
  if (orient2d(poly[p], poly[i], poly[q]) <= 0) return {};
  tris.push_back({p, i, q});
  return tris;
}

}  // namespace graphdarcy
