#include "graphdarcy/delaunay.hpp"

#include "graphdarcy/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace graphdarcy {

DelaunayTriangulation::DelaunayTriangulation(const BBox& box) {
  double cx = 0.5 * (box.xmin + box.xmax), cy = 0.5 * (box.ymin + box.ymax);
  double d = std::max({box.xmax - box.xmin, box.ymax - box.ymin, 1e-300});
  if (!std::isfinite(d)) d = 1.0;
  double s = 64.0 * d;
  pts_ = {{cx - s, cy - s}, {cx + s, cy - s}, {cx, cy + s}};
  tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});
  vtri_ = {0, 0, 0};
}

int DelaunayTriangulation::new_tri(std::array<int, 3> v) {
  int id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
    tris_[id] = {v, {-1, -1, -1}, true};
  } else {
    id = int(tris_.size());
    tris_.push_back({v, {-1, -1, -1}, true});
  }
  return id;
}

int DelaunayTriangulation::locate(Vec2 p, int hint) const {
  int t = (hint >= 0 && hint < int(tris_.size()) && tris_[hint].alive) ? hint : last_;
  if (!tris_[t].alive) {
    for (t = 0; !tris_[t].alive; ++t) {
    }
  }
  for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
    const Tri& tr = tris_[t];
    rng_ = rng_ * 1103515245u + 12345u;
    int r = int((rng_ >> 16) % 3u);
    bool inside = true;
    for (int k = 0; k < 3; ++k) {
      int i = (r + k) % 3;
      int a = tr.v[(i + 1) % 3], b = tr.v[(i + 2) % 3];
      if (orient2d(pts_[a], pts_[b], p) < 0) {
        if (tr.nb[i] < 0) throw Error(ErrorCode::DegenerateGeometry, "point outside the enclosing triangle");
        t = tr.nb[i];
        inside = false;
        break;
      }
    }
    if (inside) return t;
  }
  // walk failed to converge; fall back to a scan
  for (int u = 0; u < int(tris_.size()); ++u) {
    if (!tris_[u].alive) continue;
    const auto& v = tris_[u].v;
    if (orient2d(pts_[v[0]], pts_[v[1]], p) >= 0 && orient2d(pts_[v[1]], pts_[v[2]], p) >= 0 &&
        orient2d(pts_[v[2]], pts_[v[0]], p) >= 0)
      return u;
  }
  throw Error(ErrorCode::DegenerateGeometry, "point location failed");
}

int DelaunayTriangulation::insert(Vec2 p, int hint) {
  int t = locate(p, hint);
  for (int v : tris_[t].v)
    if (pts_[v] == p) return v;

  if (stamp_.size() < tris_.size()) stamp_.resize(tris_.size() + 64, 0);
  ++stamp_id_;
  std::vector<int> cav{t};
  stamp_[t] = stamp_id_;
  for (std::size_t k = 0; k < cav.size(); ++k) {
    const Tri& c = tris_[cav[k]];
    for (int i = 0; i < 3; ++i) {
      int n = c.nb[i];
      if (n < 0 || stamp_[n] == stamp_id_) continue;
      const Tri& nt = tris_[n];
      if (incircle(pts_[nt.v[0]], pts_[nt.v[1]], pts_[nt.v[2]], p) > 0) {
        stamp_[n] = stamp_id_;
        cav.push_back(n);
      }
    }
  }

  struct Bnd {
    int a, b, out, slot;
  };
  std::vector<Bnd> bnd;
  for (int c : cav) {
    const Tri& tr = tris_[c];
    for (int i = 0; i < 3; ++i) {
      int n = tr.nb[i];
      if (n >= 0 && stamp_[n] == stamp_id_) continue;
      int slot = -1;
      if (n >= 0)
        for (int j = 0; j < 3; ++j)
          if (tris_[n].nb[j] == c) slot = j;
      bnd.push_back({tr.v[(i + 1) % 3], tr.v[(i + 2) % 3], n, slot});
    }
  }

  int pid = int(pts_.size());
  pts_.push_back(p);
  vtri_.push_back(-1);
  for (int c : cav) {
    tris_[c].alive = false;
    free_.push_back(c);
  }

  std::unordered_map<int, int> by_start, by_end;
  std::vector<int> created;
  created.reserve(bnd.size());
  for (const Bnd& e : bnd) {
    int id = new_tri({pid, e.a, e.b});
    if (id >= int(stamp_.size())) stamp_.resize(id + 64, 0);
    tris_[id].nb[0] = e.out;
    if (e.out >= 0) tris_[e.out].nb[e.slot] = id;
    by_start[e.a] = id;
    by_end[e.b] = id;
    created.push_back(id);
    vtri_[e.a] = id;
  }
  for (int id : created) {
    Tri& tr = tris_[id];
    tr.nb[1] = by_start.at(tr.v[2]);
    tr.nb[2] = by_end.at(tr.v[1]);
  }
  vtri_[pid] = created.front();
  last_ = created.front();
  return pid;
}

std::vector<int> DelaunayTriangulation::around(int a) const {
  std::vector<int> out;
  int start = vtri_[a];
  if (start < 0) return out;
  auto idx = [&](int t) {
    for (int i = 0; i < 3; ++i)
      if (tris_[t].v[i] == a) return i;
    return -1;
  };
  int t = start;
  bool closed = false;
  for (;;) {
    out.push_back(t);
    int i = idx(t);
    int n = tris_[t].nb[(i + 2) % 3];
    if (n < 0) break;
    if (n == start) {
      closed = true;
      break;
    }
    t = n;
  }
  if (!closed) {
    t = start;
    for (;;) {
      int i = idx(t);
      int n = tris_[t].nb[(i + 1) % 3];
      if (n < 0) break;
      out.push_back(n);
      t = n;
    }
  }
  return out;
}

bool DelaunayTriangulation::has_edge(int a, int b) const {
  for (int t : around(a))
    for (int v : tris_[t].v)
      if (v == b) return true;
  return false;
}

std::array<int, 2> DelaunayTriangulation::edge_apexes(int a, int b) const {
  std::array<int, 2> out{-1, -1};
  int k = 0;
  for (int t : around(a)) {
    const auto& v = tris_[t].v;
    if (v[0] != b && v[1] != b && v[2] != b) continue;
    for (int x : v)
      if (x != a && x != b && k < 2) out[k++] = x;
  }
  return out;
}

std::vector<std::array<int, 3>> DelaunayTriangulation::triangles() const {
  std::vector<std::array<int, 3>> out;
  for (const Tri& t : tris_)
    if (t.alive && !is_super(t.v[0]) && !is_super(t.v[1]) && !is_super(t.v[2])) out.push_back(t.v);
  return out;
}

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts) {
  if (pts.empty()) return {};
  DelaunayTriangulation dt(bbox_of(pts));
  std::vector<int> to_input;
  for (int i = 0; i < int(pts.size()); ++i) {
    int id = dt.insert(pts[i]);
    if (id >= int(to_input.size())) to_input.resize(id + 1, -1);
    if (to_input[id] < 0) to_input[id] = i;
  }
  auto tris = dt.triangles();
  for (auto& t : tris)
    for (int& v : t) v = to_input[v];
  std::sort(tris.begin(), tris.end());
  return tris;
}

namespace {

struct Sub {
  int a, b, parent;
  bool alive = true;
};

std::uint64_t key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}

Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  Vec2 ba = b - a, ca = c - a;
  double bl = dot(ba, ba), cl = dot(ca, ca);
  double d = 2.0 * cross(ba, ca);
  return {a.x + (ca.y * bl - ba.y * cl) / d, a.y + (ba.x * cl - ca.x * bl) / d};
}

// Splits input segments at input points lying in their interior.
void split_t_junctions(const std::vector<Vec2>& pts, std::vector<std::array<int, 2>>& segs) {
  std::vector<int> order(pts.size());
  for (int i = 0; i < int(pts.size()); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return pts[i].x < pts[j].x; });
  std::vector<std::array<int, 2>> out;
  for (auto [a, b] : segs) {
    double x0 = std::min(pts[a].x, pts[b].x), x1 = std::max(pts[a].x, pts[b].x);
    auto lo = std::lower_bound(order.begin(), order.end(), x0, [&](int i, double x) { return pts[i].x < x; });
    std::vector<std::pair<double, int>> on;
    Vec2 d = pts[b] - pts[a];
    for (auto it = lo; it != order.end() && pts[*it].x <= x1; ++it) {
      int p = *it;
      if (p == a || p == b || pts[p] == pts[a] || pts[p] == pts[b]) continue;
      if (on_segment(pts[p], pts[a], pts[b])) on.push_back({dot(pts[p] - pts[a], d), p});
    }
    if (on.empty()) {
      out.push_back({a, b});
      continue;
    }
    std::sort(on.begin(), on.end());
    int prev = a;
    for (auto& [t, p] : on) {
      out.push_back({prev, p});
      prev = p;
    }
    out.push_back({prev, b});
  }
  segs = std::move(out);
}

class Refiner {
 public:
  Refiner(const std::vector<Vec2>& pts, std::vector<std::array<int, 2>> segs,
          const std::vector<Polygon>& domain, const ConformingOptions& opt)
      : dt_(make_box(pts)), domain_(domain), opt_(opt) {
    split_t_junctions(pts, segs);
    std::vector<int> vid(pts.size());
    for (int i = 0; i < int(pts.size()); ++i) {
      vid[i] = dt_.insert(pts[i]);
      grow();
      input_[vid[i]] = 1;
    }
    // small input angles between segments sharing a vertex
    std::unordered_map<int, std::vector<int>> at;
    for (int s = 0; s < int(segs.size()); ++s) {
      int a = vid[segs[s][0]], b = vid[segs[s][1]];
      if (a == b) continue;
      at[a].push_back(s);
      at[b].push_back(s);
      segs_of_[a].push_back(s);
      segs_of_[b].push_back(s);
    }
    for (auto& [v, list] : at) {
      Vec2 p = dt_.points()[v];
      for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          auto far = [&](int s) {
            int a = vid[segs[s][0]];
            return a == v ? dt_.points()[vid[segs[s][1]]] : dt_.points()[a];
          };
          Vec2 u = unit(far(list[i]) - p), w = unit(far(list[j]) - p);
          double ang = std::atan2(std::fabs(cross(u, w)), dot(u, w));
          if (ang < std::numbers::pi / 3.0) small_pairs_.insert(key(list[i], list[j]));
        }
    }
    for (int s = 0; s < int(segs.size()); ++s) {
      int a = vid[segs[s][0]], b = vid[segs[s][1]];
      if (a == b) continue;
      Vec2 pa = dt_.points()[a], pb = dt_.points()[b];
      int k = 1;
      if (opt_.h_max > 0.0) k = std::max(1, int(std::ceil(distance(pa, pb) / opt_.h_max - 1e-9)));
      int prev = a;
      for (int i = 1; i <= k; ++i) {
        int q = b;
        if (i < k) {
          double t = double(i) / k;
          q = dt_.insert(pa + t * (pb - pa), dt_.triangle_of(prev));
          grow();
          segs_of_[q].push_back(s);
        }
        subs_.push_back({prev, q, s});
        prev = q;
      }
    }
  }

  void run() {
    double floor = opt_.min_angle_deg * std::numbers::pi / 180.0;
    for (int round = 0;; ++round) {
      recover();
      classify();
      std::vector<std::pair<int, std::array<int, 3>>> bad;
      const auto& tris = dt_.raw();
      for (int t = 0; t < int(tris.size()); ++t) {
        if (!tris[t].alive || state_[t] != 1) continue;
        auto q = quality(tris[t].v, floor);
        if (q.bad) bad.push_back({t, tris[t].v});
      }
      if (bad.empty()) break;
      for (auto& [t, v] : bad) {
        const auto& tr = dt_.raw()[t];
        if (!tr.alive || tr.v != v) continue;
        const auto& P = dt_.points();
        Vec2 c = circumcenter(P[v[0]], P[v[1]], P[v[2]]);
        Vec2 g = (1.0 / 3.0) * (P[v[0]] + P[v[1]] + P[v[2]]);
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) continue;
        std::vector<int> enc;
        BBox box;
        box.add(c);
        box.add(g);
        for (int s = 0; s < int(subs_.size()); ++s) {
          if (!subs_[s].alive) continue;
          Vec2 a = P[subs_[s].a], b = P[subs_[s].b];
          Vec2 m = midpoint(a, b);
          double r = 0.5 * distance(a, b);
          bool near_c = distance(c, m) <= r * (1.0 + 1e-9);
          BBox sb;
          sb.add(a);
          sb.add(b);
          if (near_c && dot_sign(c, a, b) < 0) {
            enc.push_back(s);
          } else if (sb.overlaps(box, 0.0) && segments_intersect(g, c, a, b)) {
            enc.push_back(s);
          }
        }
        if (!enc.empty()) {
          for (int s : enc)
            if (subs_[s].alive) split(s);
          recover();
          continue;
        }
        dt_.insert(c, t);
        grow();
        check_size();
      }
    }
  }

  ConformingResult result() {
    classify();
    double floor = opt_.min_angle_deg * std::numbers::pi / 180.0;
    ConformingResult r;
    const auto& P = dt_.points();
    r.points.assign(P.begin() + 3, P.end());
    const auto& tris = dt_.raw();
    std::unordered_map<int, int> comp_ids;
    for (int t = 0; t < int(tris.size()); ++t) {
      if (!tris[t].alive || state_[t] != 1) continue;
      auto v = tris[t].v;
      auto q = quality(v, floor);
      r.triangles.push_back({v[0] - 3, v[1] - 3, v[2] - 3});
      r.exempt.push_back(q.angle_bad && q.exempt ? 1 : 0);
      auto it = comp_ids.find(comp_[t]);
      if (it == comp_ids.end()) it = comp_ids.emplace(comp_[t], int(comp_ids.size())).first;
      r.component.push_back(it->second);
    }
    return r;
  }

 private:
  static BBox make_box(const std::vector<Vec2>& pts) {
    BBox b = bbox_of(pts);
    if (pts.empty()) b.add({0, 0});
    return b;
  }

  void grow() {
    std::size_t n = dt_.points().size();
    if (input_.size() < n) {
      input_.resize(n, 0);
      segs_of_.resize(n);
    }
  }

  void check_size() {
    if (int(dt_.points().size()) > opt_.max_points + 3)
      throw Error(ErrorCode::QualityFailure, "refinement exceeded " + std::to_string(opt_.max_points) + " points");
  }

  bool encroached(const Sub& s) const {
    const auto& P = dt_.points();
    for (int c : dt_.edge_apexes(s.a, s.b))
      if (c >= 0 && !dt_.is_super(c) && dot_sign(P[c], P[s.a], P[s.b]) < 0) return true;
    return false;
  }

  void split(int si) {
    Sub s = subs_[si];
    const auto& P = dt_.points();
    Vec2 a = P[s.a], b = P[s.b];
    double len = distance(a, b);
    Vec2 q = midpoint(a, b);
    bool ia = input_[s.a], ib = input_[s.b];
    if (ia != ib) {
      double d = std::exp2(std::round(std::log2(0.5 * len)));
      if (d > 0.25 * len && d < 0.75 * len) q = ia ? a + (d / len) * (b - a) : b + (d / len) * (a - b);
    }
    if (q == a || q == b) throw Error(ErrorCode::QualityFailure, "segment split below floating-point resolution");
    subs_[si].alive = false;
    int qi = dt_.insert(q, dt_.triangle_of(s.a));
    grow();
    segs_of_[qi].push_back(s.parent);
    subs_.push_back({s.a, qi, s.parent});
    subs_.push_back({qi, s.b, s.parent});
    check_size();
  }

  void recover() {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < subs_.size(); ++s) {
        if (!subs_[s].alive) continue;
        if (!dt_.has_edge(subs_[s].a, subs_[s].b) || encroached(subs_[s])) {
          split(int(s));
          changed = true;
        }
      }
    }
  }

  // state_: 1 inside the domain, 0 outside; comp_: flood-fill piece
  void classify() {
    std::unordered_set<std::uint64_t> constrained;
    for (const Sub& s : subs_)
      if (s.alive) constrained.insert(key(s.a, s.b));
    const auto& tris = dt_.raw();
    state_.assign(tris.size(), -1);
    comp_.assign(tris.size(), -1);
    int ncomp = 0;
    for (int t0 = 0; t0 < int(tris.size()); ++t0) {
      if (!tris[t0].alive || comp_[t0] >= 0) continue;
      std::vector<int> stack{t0}, members;
      comp_[t0] = ncomp;
      bool super = false;
      while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        members.push_back(t);
        const auto& tr = tris[t];
        for (int v : tr.v) super = super || dt_.is_super(v);
        for (int i = 0; i < 3; ++i) {
          int n = tr.nb[i];
          if (n < 0 || comp_[n] >= 0) continue;
          if (constrained.count(key(tr.v[(i + 1) % 3], tr.v[(i + 2) % 3]))) continue;
          comp_[n] = ncomp;
          stack.push_back(n);
        }
      }
      int inside = 0;
      if (!super) {
        const auto& P = dt_.points();
        const auto& v = tris[t0].v;
        Vec2 g = (1.0 / 3.0) * (P[v[0]] + P[v[1]] + P[v[2]]);
        int w = 0;
        for (const Polygon& loop : domain_) w += winding_number(loop, g);
        inside = w != 0;
      }
      for (int t : members) state_[t] = inside;
      ++ncomp;
    }
  }

  struct Quality {
    bool bad = false, angle_bad = false, exempt = false;
  };

  Quality quality(const std::array<int, 3>& v, double floor) const {
    const auto& P = dt_.points();
    double l[3];
    for (int i = 0; i < 3; ++i) l[i] = distance(P[v[(i + 1) % 3]], P[v[(i + 2) % 3]]);
    int s = int(std::min_element(l, l + 3) - l);
    double lmax = std::max({l[0], l[1], l[2]});
    double area2 = std::fabs(cross(P[v[1]] - P[v[0]], P[v[2]] - P[v[0]]));
    double sin_min = area2 / (l[(s + 1) % 3] * l[(s + 2) % 3]);
    Quality q;
    q.angle_bad = std::asin(std::min(1.0, sin_min)) < floor;
    if (q.angle_bad) {
      int p = v[(s + 1) % 3], r = v[(s + 2) % 3];
      for (int s1 : segs_of_[p])
        for (int s2 : segs_of_[r])
          if (s1 != s2 && small_pairs_.count(key(s1, s2))) q.exempt = true;
    }
    bool size_bad = opt_.h_max > 0.0 && lmax > opt_.h_max * (1.0 + 1e-9);
    q.bad = size_bad || (q.angle_bad && !q.exempt);
    return q;
  }

  DelaunayTriangulation dt_;
  const std::vector<Polygon>& domain_;
  ConformingOptions opt_;
  std::vector<char> input_;
  std::vector<std::vector<int>> segs_of_;
  std::set<std::uint64_t> small_pairs_;
  std::vector<Sub> subs_;
  std::vector<int> state_, comp_;
};

}  // namespace

ConformingResult conforming_delaunay(const std::vector<Vec2>& points,
                                     const std::vector<std::array<int, 2>>& segments,
                                     const std::vector<Polygon>& domain, const ConformingOptions& opt) {
  if (!(opt.h_max >= 0.0) || !std::isfinite(opt.h_max))
    throw Error(ErrorCode::InvalidArgument, "h_max must be finite and non-negative");
  Refiner r(points, segments, domain, opt);
  r.run();
  return r.result();
}

}  // namespace graphdarcy
