#include "graphdarcy/map_builder.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace graphdarcy {

namespace bg = boost::geometry;

bool ValidationReport::passed() const {
  if (conditions.size() != 6) return false;
  for (auto& c : conditions)
    if (!c.passed) return false;
  return true;
}

std::vector<int> ValidationReport::failed() const {
  std::vector<int> out;
  for (int i = 0; i < int(conditions.size()); ++i)
    if (!conditions[i].passed) out.push_back(i);
  return out;
}

double default_tolerance(const DownscalingMap& map) {
  BBox b;
  for (auto& r : map.regions)
    for (auto& l : r.loops)
      for (auto& p : l) b.add(p);
  return 1e-9 * b.diagonal();
}

namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, false, true>;
using BMulti = bg::model::multi_polygon<BPolygon>;

BPolygon to_boost(const Region& r) {
  BPolygon p;
  for (auto& q : r.loops[0]) bg::append(p.outer(), BPoint(q.x, q.y));
  bg::append(p.outer(), BPoint(r.loops[0][0].x, r.loops[0][0].y));
  for (std::size_t i = 1; i < r.loops.size(); ++i) {
    p.inners().emplace_back();
    for (auto& q : r.loops[i]) bg::append(p.inners().back(), BPoint(q.x, q.y));
    bg::append(p.inners().back(), BPoint(r.loops[i][0].x, r.loops[i][0].y));
  }
  bg::correct(p);
  return p;
}

struct Seg {
  Vec2 a, b;
  int tag;  // region index, or -1 for the domain boundary
};

// Uniform grid over segment bounding boxes.
class SegmentGrid {
 public:
  SegmentGrid(const std::vector<Seg>& segs, const BBox& box, double pad) : segs_(segs), box_(box), pad_(pad) {
    const double w = std::max(box.xmax - box.xmin, 1e-300), h = std::max(box.ymax - box.ymin, 1e-300);
    const double n = std::max(1.0, std::sqrt(double(segs.size())));
    cell_ = std::max(w, h) / n;
    nx_ = std::max(1, int(std::ceil(w / cell_)) + 1);
    ny_ = std::max(1, int(std::ceil(h / cell_)) + 1);
    cells_.resize(std::size_t(nx_) * ny_);
    for (int i = 0; i < int(segs.size()); ++i) visit(segs[i].a, segs[i].b, [&](int c) { cells_[c].push_back(i); });
    stamp_.assign(segs.size(), -1);
  }

  template <class F>
  void query(Vec2 a, Vec2 b, int id, F&& f) {
    visit(a, b, [&](int c) {
      for (int j : cells_[c]) {
        if (stamp_[j] == id) continue;
        stamp_[j] = id;
        f(j);
      }
    });
  }

 private:
  template <class F>
  void visit(Vec2 a, Vec2 b, F&& f) const {
    int x0 = cx(std::min(a.x, b.x) - pad_), x1 = cx(std::max(a.x, b.x) + pad_);
    int y0 = cy(std::min(a.y, b.y) - pad_), y1 = cy(std::max(a.y, b.y) + pad_);
    for (int i = x0; i <= x1; ++i)
      for (int j = y0; j <= y1; ++j) f(j * nx_ + i);
  }
  int cx(double x) const { return std::clamp(int((x - box_.xmin) / cell_), 0, nx_ - 1); }
  int cy(double y) const { return std::clamp(int((y - box_.ymin) / cell_), 0, ny_ - 1); }

  const std::vector<Seg>& segs_;
  BBox box_;
  double pad_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
  std::vector<int> stamp_;
};

// Weld points within tol, split edges at welded points lying on them, and return the
// resulting directed edges (as welded point ids) together with the point list.
struct Complex {
  std::vector<Vec2> pts;
  std::vector<std::pair<int, int>> directed;
};

Complex build_complex(const DownscalingMap& map, double tol) {
  std::vector<Vec2> raw;
  std::vector<std::pair<int, int>> raw_edges;
  for (auto& r : map.regions)
    for (auto& l : r.loops) {
      int base = int(raw.size());
      for (auto& p : l) raw.push_back(p);
      for (int i = 0; i < int(l.size()); ++i) raw_edges.push_back({base + i, base + (i + 1) % int(l.size())});
    }
  const int n = int(raw.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return raw[a] < raw[b]; });
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n && raw[order[j]].x - raw[order[i]].x <= tol; ++j)
      if (distance(raw[order[i]], raw[order[j]]) <= tol) parent[find(order[j])] = find(order[i]);
  Complex c;
  std::vector<int> id(n, -1);
  for (int i : order) {
    int r = find(i);
    if (id[r] < 0) {
      id[r] = int(c.pts.size());
      c.pts.push_back(raw[r]);
    }
    id[i] = id[r];
  }
  // split at T-junctions
  std::vector<Seg> segs;
  BBox box;
  for (auto& p : c.pts) box.add(p);
  for (auto [a, b] : raw_edges) segs.push_back({raw[a], raw[b], 0});
  std::vector<Seg> point_segs;
  for (auto& p : c.pts) point_segs.push_back({p, p, 0});
  SegmentGrid grid(point_segs, box, tol);
  for (int k = 0; k < int(raw_edges.size()); ++k) {
    int ia = id[raw_edges[k].first], ib = id[raw_edges[k].second];
    if (ia == ib) continue;
    Vec2 a = c.pts[ia], b = c.pts[ib];
    std::vector<std::pair<double, int>> inner;
    double len = distance(a, b);
    grid.query(a, b, k, [&](int j) {
      if (j == ia || j == ib) return;
      Vec2 p = c.pts[j];
      if (point_segment_distance(p, a, b) > tol) return;
      double t = dot(p - a, b - a) / (len * len);
      if (t <= 0.0 || t >= 1.0) return;
      inner.push_back({t, j});
    });
    std::sort(inner.begin(), inner.end());
    int prev = ia;
    for (auto& [t, j] : inner) {
      c.directed.push_back({prev, j});
      prev = j;
    }
    c.directed.push_back({prev, ib});
  }
  return c;
}

}  // namespace

ValidationReport validate_map(const DownscalingMap& map, const PlaneGraph& g, double tol) {
  ValidationReport rep;
  rep.tolerance = tol;
  rep.corridor_half_width = map.epsilon;
  const int n = int(map.regions.size());
  auto fail_all = [&](const std::string& why) {
    for (const char* nm : {"(i) owner inside", "(ii) disjoint", "(iii) simply connected regions",
                           "(iv) simply connected domain", "(v) shared boundary iff adjacent", "(vi) coast"})
      rep.conditions.push_back({nm, false, why});
    return rep;
  };
  if (n != g.num_vertices()) return fail_all("region count differs from vertex count");
  for (int i = 0; i < n; ++i)
    if (map.regions[i].loops.empty() || map.regions[i].loops[0].size() < 3) return fail_all("empty region");

  // (i)
  {
    ConditionResult c{"(i) owner inside", true, ""};
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
      const Region& r = map.regions[i];
      Vec2 p = g.vertex(r.owner);
      int wn = 0;
      double bd = INFINITY;
      for (auto& l : r.loops) {
        wn += winding_number(l, p);
        bd = std::min(bd, boundary_distance(l, p));
      }
      if (r.owner != i || wn == 0 || bd <= tol) {
        c.passed = false;
        os << "region " << i << " (owner " << r.owner << ") misses its vertex; ";
      }
    }
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  std::vector<BBox> boxes(n);
  for (int i = 0; i < n; ++i)
    for (auto& p : map.regions[i].loops[0]) boxes[i].add(p);

  // (ii)
  {
    ConditionResult c{"(ii) disjoint", true, ""};
    std::ostringstream os;
    std::vector<BPolygon> polys(n);
    for (int i = 0; i < n; ++i) polys[i] = to_boost(map.regions[i]);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!boxes[i].overlaps(boxes[j], 0.0)) continue;
        double area = 0.0;
        try {
          BMulti out;
          bg::intersection(polys[i], polys[j], out);
          area = bg::area(out);
        } catch (const std::exception& ex) {
          c.passed = false;
          os << "overlay failed for " << i << "," << j << "; ";
          continue;
        }
        worst = std::max(worst, area);
        if (area >= tol * tol) {
          c.passed = false;
          os << "regions " << i << "," << j << " overlap by " << area << "; ";
        }
      }
    os << "max overlap area " << worst;
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  // (iii)
  {
    ConditionResult c{"(iii) simply connected regions", true, ""};
    std::ostringstream os;
    for (int i = 0; i < n; ++i) {
      const Region& r = map.regions[i];
      if (r.loops.size() != 1 || !is_weakly_simple_loop(r.loops[0]) || signed_area(r.loops[0]) <= 0.0) {
        c.passed = false;
        os << "region " << i << " has " << r.loops.size() << " loop(s)"
           << (r.loops.size() == 1 ? " and is not a simple positive loop" : "") << "; ";
      }
    }
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  // (iv)
  {
    ConditionResult c{"(iv) simply connected domain", true, ""};
    Complex cx = build_complex(map, tol);
    std::set<std::pair<int, int>> undirected;
    std::set<int> used;
    for (auto [a, b] : cx.directed) {
      if (a == b) continue;
      undirected.insert({std::min(a, b), std::max(a, b)});
      used.insert(a);
      used.insert(b);
    }
    int faces = 0;
    for (auto& r : map.regions) faces += 1 - (int(r.loops.size()) - 1);
    rep.euler_characteristic = int(used.size()) - int(undirected.size()) + faces;
    std::vector<std::pair<Vec2, Vec2>> boundary;
    // boundary loops: cancel opposite directed edges, then chain
    std::map<std::pair<int, int>, int> cnt;
    for (auto [a, b] : cx.directed) {
      if (a == b) continue;
      auto it = cnt.find({b, a});
      if (it != cnt.end() && it->second > 0) {
        if (--it->second == 0) cnt.erase(it);
      } else {
        ++cnt[{a, b}];
      }
    }
    for (auto& [k, m] : cnt)
      for (int i = 0; i < m; ++i) boundary.push_back({cx.pts[k.first], cx.pts[k.second]});
    auto loops = chain_loops(boundary);
    rep.domain_loops = int(loops.size());
    rep.domain_area = 0.0;
    for (auto& l : loops) rep.domain_area += signed_area(l);
    rep.region_area_sum = 0.0;
    for (auto& r : map.regions) rep.region_area_sum += r.area();
    c.passed = rep.euler_characteristic == 1 && rep.domain_loops == 1;
    c.detail = "euler characteristic " + std::to_string(rep.euler_characteristic) + ", boundary loops " +
               std::to_string(rep.domain_loops);
    rep.conditions.push_back(c);
  }

  // shared lengths via a segment grid
  std::vector<Seg> segs;
  BBox all;
  for (int i = 0; i < n; ++i)
    for (auto& l : map.regions[i].loops)
      for (std::size_t k = 0; k < l.size(); ++k) {
        segs.push_back({l[k], l[(k + 1) % l.size()], i});
        all.add(l[k]);
      }
  for (auto& l : map.domain)
    for (std::size_t k = 0; k < l.size(); ++k) segs.push_back({l[k], l[(k + 1) % l.size()], -1});
  std::map<std::pair<int, int>, double> shared;
  std::vector<double> coast(n, 0.0);
  {
    SegmentGrid grid(segs, all, tol);
    for (int s = 0; s < int(segs.size()); ++s) {
      if (segs[s].tag < 0) continue;
      grid.query(segs[s].a, segs[s].b, s, [&](int t) {
        if (t == s) return;
        int ta = segs[s].tag, tb = segs[t].tag;
        if (tb == ta) return;
        if (tb >= 0 && tb < ta) return;  // count each region pair once
        double ov = collinear_overlap(segs[s].a, segs[s].b, segs[t].a, segs[t].b, tol);
        if (ov <= 0.0) return;
        if (tb < 0)
          coast[ta] += ov;
        else
          shared[{ta, tb}] += ov;
      });
    }
  }

  // (v)
  {
    ConditionResult c{"(v) shared boundary iff adjacent", true, ""};
    std::ostringstream os;
    std::set<std::pair<int, int>> adj;
    for (auto [a, b] : g.edges()) adj.insert({std::min(a, b), std::max(a, b)});
    rep.min_adjacent_shared_length = INFINITY;
    rep.max_nonadjacent_shared_length = 0.0;
    for (auto& pr : adj) {
      double len = shared.count(pr) ? shared[pr] : 0.0;
      rep.min_adjacent_shared_length = std::min(rep.min_adjacent_shared_length, len);
      if (len <= tol) {
        c.passed = false;
        rep.offending_pairs.push_back(pr);
        os << "adjacent " << pr.first << "," << pr.second << " share " << len << "; ";
      }
    }
    for (auto& [pr, len] : shared) {
      if (adj.count(pr)) continue;
      rep.max_nonadjacent_shared_length = std::max(rep.max_nonadjacent_shared_length, len);
      if (len > tol) {
        c.passed = false;
        rep.offending_pairs.push_back(pr);
        os << "non-adjacent " << pr.first << "," << pr.second << " share " << len << "; ";
      }
    }
    if (adj.empty()) rep.min_adjacent_shared_length = 0.0;
    c.detail = os.str();
    rep.conditions.push_back(c);
  }

  // (vi)
  {
    ConditionResult c{"(vi) coast", true, ""};
    std::ostringstream os;
    std::set<int> outer;
    if (g.num_edges() == 0) {
      outer.insert(0);
    } else {
      for (int h : g.faces()[g.outer_face()].boundary) outer.insert(g.origin(h));
    }
    for (int v : outer)
      if (coast[v] <= tol) {
        c.passed = false;
        os << "outer vertex " << v << " touches the boundary over " << coast[v] << "; ";
      }
    c.detail = os.str();
    rep.conditions.push_back(c);
  }
  return rep;
}

}  // namespace graphdarcy
