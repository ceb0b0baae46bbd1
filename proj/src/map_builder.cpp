#include "graphdarcy/map_builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

namespace graphdarcy {

double Region::area() const {
  double s = 0.0;
  for (auto& l : loops) s += signed_area(l);
  return s;
}

Vec2 InterfaceSegment::normal(std::size_t i) const {
  return unit(right_normal(polyline[i + 1] - polyline[i]));
}

double InterfaceSegment::length() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) s += distance(polyline[i], polyline[i + 1]);
  return s;
}

int DownscalingMap::interface_between(int r0, int r1) const {
  for (int i = 0; i < int(interfaces.size()); ++i) {
    const auto& s = interfaces[i];
    if ((s.left_region == r0 && s.right_region == r1) || (s.left_region == r1 && s.right_region == r0)) return i;
  }
  return -1;
}

namespace {

using EdgeKey = std::pair<Vec2, Vec2>;

double clockwise_angle(Vec2 from, Vec2 to) {
  // angle in (0, 2pi] rotating clockwise from `from` to `to`
  double a = std::atan2(cross(to, from), dot(from, to));
  if (a <= 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

std::vector<Polygon> chain_loops(const std::vector<std::pair<Vec2, Vec2>>& directed) {
  std::map<Vec2, std::vector<Vec2>> out;
  for (auto& [a, b] : directed) out[a].push_back(b);
  std::vector<Polygon> loops;
  while (!out.empty()) {
    Vec2 start = out.begin()->first;
    Polygon loop{start};
    Vec2 prev = start;
    Vec2 cur, first;
    {
      auto& lst = out.begin()->second;
      cur = first = lst.front();
      lst.erase(lst.begin());
      if (lst.empty()) out.erase(out.begin());
    }
    for (;;) {
      Vec2 back = prev - cur;
      auto it = out.find(cur);
      if (cur == start) {
        // closed unless the loop passes through start again (pinch at start)
        if (it == out.end()) break;
        double to_first = clockwise_angle(back, first - cur);
        bool other = false;
        for (Vec2 q : it->second) other = other || clockwise_angle(back, q - cur) < to_first;
        if (!other) break;
      }
      loop.push_back(cur);
      if (it == out.end()) break;  // open chain: malformed input
      auto& lst = it->second;
      std::size_t pick = 0;
      if (lst.size() > 1) {
        double best = INFINITY;
        for (std::size_t j = 0; j < lst.size(); ++j) {
          double a = clockwise_angle(back, lst[j] - cur);
          if (a < best) {
            best = a;
            pick = j;
          }
        }
      }
      Vec2 nxt = lst[pick];
      lst.erase(lst.begin() + long(pick));
      if (lst.empty()) out.erase(it);
      prev = cur;
      cur = nxt;
    }
    loops.push_back(std::move(loop));
  }
  std::stable_sort(loops.begin(), loops.end(),
                   [](const Polygon& a, const Polygon& b) { return signed_area(a) > signed_area(b); });
  return loops;
}

std::vector<Polygon> union_boundary(const std::vector<Polygon>& pieces) {
  std::map<EdgeKey, int> count;
  for (const auto& piece : pieces) {
    const std::size_t n = piece.size();
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 a = piece[i], b = piece[(i + 1) % n];
      if (a == b) continue;
      auto rev = count.find({b, a});
      if (rev != count.end() && rev->second > 0) {
        if (--rev->second == 0) count.erase(rev);
      } else {
        ++count[{a, b}];
      }
    }
  }
  std::vector<std::pair<Vec2, Vec2>> directed;
  for (auto& [k, c] : count)
    for (int i = 0; i < c; ++i) directed.push_back(k);
  return chain_loops(directed);
}

namespace {

enum class FaceMode { None, Band, Fill };

struct Port {
  int edge = 0;       // boundary edge (start vertex index) of the part polygon
  double s = 0.0;     // parameter along that edge
  Vec2 pt;
  int owner_after = -1;  // owner of the boundary portion following this port
};

struct Part {
  Polygon poly;
  std::vector<Port> ports;  // boundary order
};

class Builder {
 public:
  Builder(const PlaneGraph& g, double eps, int n_arc) : g_(g), eps_(eps), n_arc_(n_arc) {
    const int m = g.num_edges();
    mid_.resize(m);
    port_.resize(2 * m);
    nrm_.resize(2 * m);
    wedge_.resize(2 * m);
    for (int e = 0; e < m; ++e) mid_[e] = midpoint(g.vertex(g.edge(e)[0]), g.vertex(g.edge(e)[1]));
    for (int h = 0; h < 2 * m; ++h) {
      nrm_[h] = unit(left_normal(g.direction(h)));
      port_[h] = mid_[h >> 1] + eps_ * nrm_[h];
    }
    for (int h = 0; h < 2 * m; ++h) wedge_[h] = make_wedge(prev_in_face(h), h);
    pieces_.resize(g.num_vertices());
  }

  void run(const std::vector<FaceMode>& modes) {
    for (const Face& f : g_.faces()) {
      if (f.boundary.empty()) continue;
      switch (modes[f.id]) {
        case FaceMode::None: break;
        case FaceMode::Band: band_pieces(f); break;
        case FaceMode::Fill:
          if (!star_pieces(f)) {
            band_pieces(f);
            routed_pieces(f);
          }
          break;
      }
    }
  }

  std::vector<Region> regions() const {
    std::vector<Region> out(g_.num_vertices());
    for (int v = 0; v < g_.num_vertices(); ++v) {
      out[v].owner = v;
      out[v].loops = union_boundary(pieces_[v]);
      if (out[v].loops.empty())
        throw Error(ErrorCode::UnionFailure, "region of vertex " + std::to_string(v) + " is empty");
    }
    return out;
  }

 private:
  int prev_in_face(int h) const {
    // the half-edge h_in with face_next(h_in) == h
    return g_.twin(g_.ccw_next(h));
  }

  std::vector<Vec2> make_wedge(int h_in, int h_out) const {
    const int v = g_.origin(h_out);
    Vec2 pv = g_.vertex(v);
    Vec2 n_in = nrm_[h_in], n_out = nrm_[h_out];
    double alpha;
    if (h_in == g_.twin(h_out)) {
      alpha = 2.0 * std::numbers::pi;
    } else {
      Vec2 w = g_.vertex(g_.target(h_out)), u = g_.vertex(g_.origin(h_in));
      if (orient2d(pv, w, u) == 0 && dot_sign(pv, w, u) < 0) {
        return {pv + eps_ * n_out};
      }
      Vec2 d_out = w - pv, d_back = u - pv;
      alpha = std::atan2(cross(d_out, d_back), dot(d_out, d_back));
      if (alpha <= 0.0) alpha += 2.0 * std::numbers::pi;
    }
    if (alpha < std::numbers::pi) {
      double k = eps_ / (1.0 + dot(n_in, n_out));
      return {pv + k * (n_in + n_out)};
    }
    const double sweep = alpha - std::numbers::pi;
    int segs = std::max(1, int(std::ceil(n_arc_ * sweep / std::numbers::pi - 1e-9)));
    double t0 = std::atan2(n_in.y, n_in.x);
    std::vector<Vec2> pts;
    pts.push_back(pv + eps_ * n_in);
    for (int k = 1; k < segs; ++k) {
      double t = t0 - sweep * double(k) / double(segs);
      pts.push_back(pv + eps_ * Vec2{std::cos(t), std::sin(t)});
    }
    pts.push_back(pv + eps_ * n_out);
    return pts;
  }

  void band_pieces(const Face& f) {
    for (int h_out : f.boundary) {
      int h_in = prev_in_face(h_out);
      int v = g_.origin(h_out);
      Polygon piece{g_.vertex(v), mid_[h_out >> 1], port_[h_out]};
      const auto& w = wedge_[h_out];
      for (auto it = w.rbegin(); it != w.rend(); ++it) piece.push_back(*it);
      piece.push_back(port_[h_in]);
      piece.push_back(mid_[h_in >> 1]);
      pieces_[v].push_back(std::move(piece));
    }
  }

  bool star_pieces(const Face& f) {
    Polygon walk;
    std::vector<int> seen;
    for (int h : f.boundary) {
      walk.push_back(g_.vertex(g_.origin(h)));
      seen.push_back(g_.origin(h));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    Vec2 c = area_centroid(walk);
    const std::size_t n = walk.size();
    for (std::size_t i = 0; i < n; ++i)
      if (orient2d(walk[i], walk[(i + 1) % n], c) <= 0) return false;
    for (int h_out : f.boundary) {
      int h_in = prev_in_face(h_out);
      int v = g_.origin(h_out);
      pieces_[v].push_back(Polygon{g_.vertex(v), mid_[h_out >> 1], c, mid_[h_in >> 1]});
    }
    return true;
  }

  void routed_pieces(const Face& f) {
    Part R;
    for (int h_out : f.boundary) {
      const auto& w = wedge_[h_out];
      R.poly.insert(R.poly.end(), w.begin(), w.end());
      Port p;
      p.edge = int(R.poly.size()) - 1;
      p.pt = port_[h_out];
      p.owner_after = g_.target(h_out);
      R.ports.push_back(p);
    }
    // port parameters along their offset segments
    const int n = int(R.poly.size());
    for (auto& p : R.ports) {
      Vec2 a = R.poly[p.edge], b = R.poly[(p.edge + 1) % n];
      p.s = distance(a, p.pt) / distance(a, b);
    }
    if (!is_simple_loop(R.poly) || signed_area(R.poly) <= 0.0)
      throw Error(ErrorCode::UnionFailure, "inner offset of face " + std::to_string(f.id) + " is not simple");
    emit_part(R, f.id);
  }

  struct Triangulation {
    std::vector<std::array<int, 3>> tris;
    std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  };

  Triangulation triangulate(const Polygon& poly, int face) const {
    Triangulation T;
    T.tris = ear_clip(poly);
    if (T.tris.empty()) throw Error(ErrorCode::UnionFailure, "cannot triangulate face " + std::to_string(face));
    for (int t = 0; t < int(T.tris.size()); ++t)
      for (int i = 0; i < 3; ++i) {
        int a = T.tris[t][i], b = T.tris[t][(i + 1) % 3];
        T.edge_tris[{std::min(a, b), std::max(a, b)}].push_back(t);
      }
    return T;
  }

  static Vec2 tri_centroid(const Polygon& poly, const std::array<int, 3>& t) {
    return (1.0 / 3.0) * (poly[t[0]] + poly[t[1]] + poly[t[2]]);
  }

  void emit_part(const Part& P, int face) {
    const int n = int(P.poly.size());
    const int k = int(P.ports.size());
    Triangulation T = triangulate(P.poly, face);
    const int nt = int(T.tris.size());
    int root = 0;
    double best = -1.0;
    for (int t = 0; t < nt; ++t) {
      double a = signed_area({P.poly[T.tris[t][0]], P.poly[T.tris[t][1]], P.poly[T.tris[t][2]]});
      if (a > best) {
        best = a;
        root = t;
      }
    }
    Vec2 c = tri_centroid(P.poly, T.tris[root]);
    // BFS tree from the root
    std::vector<int> parent(nt, -2), order;
    std::vector<std::array<int, 2>> pdiag(nt);  // diagonal shared with parent, oriented ccw in the child
    parent[root] = -1;
    order.push_back(root);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      int t = order[qi];
      for (int i = 0; i < 3; ++i) {
        int a = T.tris[t][i], b = T.tris[t][(i + 1) % 3];
        for (int u : T.edge_tris.at({std::min(a, b), std::max(a, b)})) {
          if (parent[u] != -2) continue;
          parent[u] = t;
          // in u the shared edge runs b -> a
          pdiag[u] = {b, a};
          order.push_back(u);
        }
      }
    }
    // triangle owning each boundary edge
    auto edge_owner = [&](int e) {
      int a = e, b = (e + 1) % n;
      const auto& ts = T.edge_tris.at({std::min(a, b), std::max(a, b)});
      return ts.front();
    };
    std::vector<std::vector<int>> through(nt);  // port indices passing up through t's parent diagonal
    for (int j = 0; j < k; ++j) through[edge_owner(P.ports[j].edge)].push_back(j);
    std::vector<std::vector<Vec2>> route(k);
    for (int j = 0; j < k; ++j) route[j].push_back(P.ports[j].pt);
    for (int idx = nt - 1; idx >= 1; --idx) {
      int t = order[idx];
      auto& lst = through[t];
      // the child side of diagonal (x -> y) is the boundary arc from x counterclockwise to y;
      // pdiag[t] = (p, q) is ccw in t, so the arc starts at q
      int x = pdiag[t][1], y = pdiag[t][0];
      auto key = [&](int j) { return double(((P.ports[j].edge - x) % n + n) % n) + P.ports[j].s; };
      std::sort(lst.begin(), lst.end(), [&](int a, int b) { return key(a) < key(b); });
      const double cnt = double(lst.size());
      for (std::size_t r = 0; r < lst.size(); ++r) {
        double s = double(r + 1) / (cnt + 1.0);
        route[lst[r]].push_back(P.poly[x] + s * (P.poly[y] - P.poly[x]));
      }
      auto& up = through[parent[t]];
      up.insert(up.end(), lst.begin(), lst.end());
    }
    for (int j = 0; j < k; ++j) route[j].push_back(c);
    for (int j = 0; j < k; ++j) {
      const Port& a = P.ports[j];
      const Port& b = P.ports[(j + 1) % k];
      Polygon piece{a.pt};
      int v = (a.edge + 1) % n;
      if (!(a.edge == b.edge && b.s > a.s && k > 1)) {
        for (;;) {
          piece.push_back(P.poly[v]);
          if (v == b.edge) break;
          v = (v + 1) % n;
        }
      }
      piece.push_back(b.pt);
      const auto& rb = route[(j + 1) % k];
      piece.insert(piece.end(), rb.begin() + 1, rb.end());
      const auto& ra = route[j];
      for (int i = int(ra.size()) - 2; i >= 1; --i) piece.push_back(ra[i]);
      pieces_[a.owner_after].push_back(std::move(piece));
    }
  }

  const PlaneGraph& g_;
  double eps_;
  int n_arc_;
  std::vector<Vec2> mid_, port_, nrm_;
  std::vector<std::vector<Vec2>> wedge_;  // per outgoing half-edge, in face-walk order
  std::vector<std::vector<Polygon>> pieces_;
};

Polygon disk(Vec2 c, double r, int n_arc) {
  Polygon p;
  const int n = 2 * n_arc;
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * std::numbers::pi * double(i) / double(n);
    p.push_back(c + r * Vec2{std::cos(t), std::sin(t)});
  }
  return p;
}

double max_valid_epsilon(const PlaneGraph& g) {
  double lim = INFINITY;
  const int n = g.num_vertices();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) lim = std::min(lim, 0.5 * distance(g.vertex(a), g.vertex(b)));
  for (int e = 0; e < g.num_edges(); ++e)
    for (int f = e + 1; f < g.num_edges(); ++f) {
      auto [a, b] = g.edge(e);
      auto [c, d] = g.edge(f);
      if (a == c || a == d || b == c || b == d) continue;
      lim = std::min(lim, 0.5 * segment_segment_distance(g.vertex(a), g.vertex(b), g.vertex(c), g.vertex(d)));
    }
  for (int h = 0; h < 2 * g.num_edges(); ++h) {
    int h_in = g.twin(g.ccw_next(h));
    if (h_in == g.twin(h)) continue;
    Vec2 v = g.vertex(g.origin(h));
    Vec2 d_out = g.direction(h), d_back = g.vertex(g.origin(h_in)) - v;
    double alpha = std::atan2(cross(d_out, d_back), dot(d_out, d_back));
    if (alpha <= 0.0) alpha += 2.0 * std::numbers::pi;
    if (alpha >= std::numbers::pi) continue;
    double half = 0.5 * std::min(norm(d_out), norm(d_back));
    lim = std::min(lim, half * std::tan(0.5 * alpha));
  }
  return lim;
}

void check_epsilon(const PlaneGraph& g, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  double lim = max_valid_epsilon(g);
  if (eps >= lim)
    throw Error(ErrorCode::EpsilonTooLarge,
                "epsilon " + std::to_string(eps) + " reaches the tube overlap limit " + std::to_string(lim));
}

std::vector<Region> build_regions(const PlaneGraph& g, double eps, int n_arc, FaceMode inner, FaceMode outer) {
  if (g.num_edges() == 0) {
    Region r;
    r.owner = 0;
    r.loops = {disk(g.vertex(0), eps, n_arc)};
    return {r};
  }
  std::vector<FaceMode> modes;
  for (const Face& f : g.faces()) modes.push_back(f.is_outer ? outer : inner);
  Builder b(g, eps, n_arc);
  b.run(modes);
  return b.regions();
}

}  // namespace

double auto_epsilon(const PlaneGraph& g) {
  if (g.num_edges() == 0) throw Error(ErrorCode::InvalidArgument, "auto_epsilon needs at least one edge");
  const int n = g.num_vertices();
  double dmin = INFINITY;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) dmin = std::min(dmin, distance(g.vertex(a), g.vertex(b)));
  for (int v = 0; v < n; ++v)
    for (int e = 0; e < g.num_edges(); ++e) {
      auto [a, b] = g.edge(e);
      if (a == v || b == v) continue;
      dmin = std::min(dmin, point_segment_distance(g.vertex(v), g.vertex(a), g.vertex(b)));
    }
  double diag = bbox_of(g.vertices()).diagonal();
  if (dmin < 1e-9 * diag)
    throw Error(ErrorCode::DegenerateGeometry, "minimum feature size " + std::to_string(dmin) + " is degenerate");
  return 0.25 * dmin;
}

std::vector<Region> tubular_map(const PlaneGraph& g, double epsilon, int n_arc) {
  if (g.num_edges() > 0) check_epsilon(g, epsilon);
  auto regions = build_regions(g, epsilon, n_arc, FaceMode::Band, FaceMode::Band);
  if (auto col = bipartition(g))
    for (auto& r : regions) r.color = (*col)[r.owner];
  return regions;
}

std::vector<Region> barycentric_regions(const PlaneGraph& g, const std::vector<int>& component, int n_arc) {
  std::vector<int> local(g.num_vertices(), -1);
  std::vector<Vec2> pts;
  for (int v : component) {
    local[v] = int(pts.size());
    pts.push_back(g.vertex(v));
  }
  std::vector<std::array<int, 2>> edges;
  for (auto [a, b] : g.edges())
    if (local[a] >= 0 && local[b] >= 0) edges.push_back({local[a], local[b]});
  if (component.size() == 1) {
    double r = g.num_edges() > 0 ? auto_epsilon(g) : 1.0;
    Region reg;
    reg.owner = component[0];
    reg.loops = {disk(g.vertex(component[0]), r, n_arc)};
    return {reg};
  }
  if (component.size() < 3) throw Error(ErrorCode::TooSmall, "component needs one or at least three vertices");
  PlaneGraph sub = build_embedding(pts, edges);
  if (!bridges(sub).empty()) throw Error(ErrorCode::HasBridge, "component has a bridge");
  double eps = auto_epsilon(sub);
  auto regions = build_regions(sub, eps, n_arc, FaceMode::Fill, FaceMode::None);
  auto col = bipartition(g);
  for (auto& r : regions) {
    r.owner = component[r.owner];
    if (col) r.color = (*col)[r.owner];
  }
  return regions;
}

namespace {

std::vector<InterfaceSegment> extract_interfaces(const PlaneGraph& g, const std::vector<Region>& regions) {
  std::map<EdgeKey, int> owner;
  for (const Region& r : regions)
    for (const auto& loop : r.loops)
      for (std::size_t i = 0; i < loop.size(); ++i) owner[{loop[i], loop[(i + 1) % loop.size()]}] = r.owner;
  std::vector<InterfaceSegment> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge(e);
    int L = a, M = b;
    if (regions[a].color == 2 && regions[b].color == 1) std::swap(L, M);
    InterfaceSegment seg;
    seg.edge = e;
    seg.left_region = L;
    seg.right_region = M;
    for (const auto& loop : regions[L].loops) {
      const std::size_t n = loop.size();
      std::vector<char> mark(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        auto it = owner.find({loop[(i + 1) % n], loop[i]});
        mark[i] = (it != owner.end() && it->second == M);
      }
      std::size_t cnt = std::count(mark.begin(), mark.end(), 1);
      if (cnt == 0) continue;
      if (!seg.polyline.empty())
        throw Error(ErrorCode::UnionFailure, "interface of edge " + std::to_string(e) + " is disconnected");
      std::size_t start = 0;
      if (cnt < n) {
        while (!(mark[start] && !mark[(start + n - 1) % n])) ++start;
      }
      std::size_t len = 0;
      while (len < n && mark[(start + len) % n]) ++len;
      if (len != cnt)
        throw Error(ErrorCode::UnionFailure, "interface of edge " + std::to_string(e) + " is disconnected");
      for (std::size_t i = 0; i <= len; ++i) seg.polyline.push_back(loop[(start + i) % n]);
    }
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace

DownscalingMap assemble_map(const PlaneGraph& g, std::vector<Region> regions, const std::string& kind,
                            double epsilon) {
  DownscalingMap m;
  m.kind = kind;
  m.epsilon = epsilon;
  auto col = bipartition(g);
  for (auto& r : regions) r.color = col ? (*col)[r.owner] : 0;
  std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.owner < b.owner; });
  std::vector<Polygon> all;
  for (auto& r : regions)
    for (auto& l : r.loops) all.push_back(l);
  m.domain = union_boundary(all);
  m.interfaces = extract_interfaces(g, regions);
  m.regions = std::move(regions);
  return m;
}

DownscalingMap downscaling_map(const PlaneGraph& g, const MapOptions& opt) {
  if (!bipartition(g)) throw Error(ErrorCode::NotBipartite, "graph has an odd cycle");
  double eps;
  if (g.num_edges() == 0) {
    eps = opt.epsilon > 0.0 ? opt.epsilon : 1.0;
  } else if (opt.epsilon > 0.0) {
    check_epsilon(g, opt.epsilon);
    eps = opt.epsilon;
  } else {
    eps = auto_epsilon(g);
  }
  auto regions = build_regions(g, eps, opt.n_arc, FaceMode::Fill, FaceMode::Band);
  DownscalingMap m = assemble_map(g, std::move(regions), "downscaling", eps);
  ValidationReport rep = validate_map(m, g, default_tolerance(m));
  if (!rep.passed()) {
    std::string which;
    for (int i : rep.failed()) which += " " + rep.conditions[i].name;
    throw ValidationFailedError(rep, "downscaling map fails" + which);
  }
  return m;
}

PlaneGraph two_strip_graph() { return build_embedding({{0.5, 0.5}, {1.5, 0.5}}, {{0, 1}}); }

DownscalingMap two_strip_map() {
  PlaneGraph g = two_strip_graph();
  Region L, M;
  L.owner = 0;
  L.loops = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  M.owner = 1;
  M.loops = {{{1, 0}, {2, 0}, {2, 1}, {1, 1}}};
  return assemble_map(g, {L, M}, "two_strip", 0.0);
}

}  // namespace graphdarcy
