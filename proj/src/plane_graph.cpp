#include "graphdarcy/plane_graph.hpp"

#include "graphdarcy/error.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <string>

namespace graphdarcy {

namespace {

// Angular order matching atan2 in (-pi, pi]: lower half-plane first.
bool angle_less(Vec2 o, Vec2 p, Vec2 q) {
  Vec2 d1 = p - o, d2 = q - o;
  int g1 = d1.y < 0 ? 0 : 1;
  int g2 = d2.y < 0 ? 0 : 1;
  if (g1 != g2) return g1 < g2;
  int s = orient2d(o, p, q);
  if (s != 0) return s > 0;
  return d1.x > d2.x;  // 0 before pi in the upper group
}

std::vector<std::vector<int>> walk_faces(int num_half, const std::function<int(int)>& next) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(num_half, 0);
  for (int h = 0; h < num_half; ++h) {
    if (seen[h]) continue;
    std::vector<int> walk;
    int c = h;
    while (!seen[c]) {
      seen[c] = 1;
      walk.push_back(c);
      c = next(c);
    }
    out.push_back(std::move(walk));
  }
  return out;
}

}  // namespace

int PlaneGraph::ccw_next(int h) const {
  const auto& r = rotation_[origin(h)];
  return r[(rot_pos_[h] + 1) % r.size()];
}

int PlaneGraph::cw_next(int h) const {
  const auto& r = rotation_[origin(h)];
  return r[(rot_pos_[h] + r.size() - 1) % r.size()];
}

PlaneGraph build_embedding(const std::vector<Vec2>& vertices,
                           const std::vector<std::array<int, 2>>& edges) {
  const int n = int(vertices.size());
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "graph needs at least one vertex");
  for (auto& p : vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [u, v] = edges[e];
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(e) + " references unknown vertex");
    if (u == v) throw Error(ErrorCode::NotSimple, "self-loop at vertex " + std::to_string(u));
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
      throw Error(ErrorCode::NotSimple,
                  "multi-edge between " + std::to_string(u) + " and " + std::to_string(v));
  }

  BBox box = bbox_of(vertices);
  const double snap = 1e-12 * std::max(1.0, box.diagonal());

  {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vertices[a] < vertices[b]; });
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n && vertices[order[j]].x - vertices[order[i]].x <= snap; ++j)
        if (distance(vertices[order[i]], vertices[order[j]]) <= snap)
          throw Error(ErrorCode::DuplicateCoordinate, "vertices " + std::to_string(order[i]) + " and " +
                                                         std::to_string(order[j]) + " coincide");
  }

  const int m = int(edges.size());
  {
    std::vector<int> order(m);
    for (int e = 0; e < m; ++e) order[e] = e;
    auto xmin = [&](int e) { return std::min(vertices[edges[e][0]].x, vertices[edges[e][1]].x); };
    auto xmax = [&](int e) { return std::max(vertices[edges[e][0]].x, vertices[edges[e][1]].x); };
    std::sort(order.begin(), order.end(), [&](int a, int b) { return xmin(a) < xmin(b) || (xmin(a) == xmin(b) && a < b); });
    for (int s = 0; s < m; ++s) {
      int e = order[s];
      for (int t = s + 1; t < m && xmin(order[t]) <= xmax(e) + snap; ++t) {
        int f = order[t];
        auto [a, b] = edges[e];
        auto [c, d] = edges[f];
        Vec2 pa = vertices[a], pb = vertices[b], pc = vertices[c], pd = vertices[d];
        int shared = -1;
        if (a == c || a == d) shared = a;
        if (b == c || b == d) shared = b;
        bool bad = false;
        if (shared >= 0) {
          int x = (shared == a) ? b : a;
          int y = (shared == c) ? d : c;
          Vec2 s0 = vertices[shared];
          if (orient2d(s0, vertices[x], vertices[y]) == 0 && dot_sign(s0, vertices[x], vertices[y]) > 0) bad = true;
          if (!bad && (point_segment_distance(vertices[x], s0, vertices[y]) <= snap ||
                       point_segment_distance(vertices[y], s0, vertices[x]) <= snap))
            bad = true;
        } else {
          bad = segments_intersect(pa, pb, pc, pd) || segment_segment_distance(pa, pb, pc, pd) <= snap;
        }
        if (bad) {
          int lo = std::min(e, f), hi = std::max(e, f);
          throw EdgeCrossingError(lo, hi, "edges " + std::to_string(lo) + " and " + std::to_string(hi) + " cross");
        }
      }
    }
  }

  PlaneGraph g;
  g.vertices_ = vertices;
  g.edges_ = edges;
  g.rotation_.assign(n, {});
  for (int e = 0; e < m; ++e) {
    g.rotation_[edges[e][0]].push_back(2 * e);
    g.rotation_[edges[e][1]].push_back(2 * e + 1);
  }

  {
    std::vector<std::vector<int>> adj(n);
    for (auto& e : edges) {
      adj[e[0]].push_back(e[1]);
      adj[e[1]].push_back(e[0]);
    }
    std::vector<char> vis(n, 0);
    std::vector<int> stack{0};
    vis[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u])
        if (!vis[w]) {
          vis[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    if (count != n) {
      int first = int(std::find(vis.begin(), vis.end(), 0) - vis.begin());
      throw Error(ErrorCode::NotConnected, "vertex " + std::to_string(first) + " unreachable from vertex 0");
    }
  }

  g.rot_pos_.assign(2 * m, 0);
  for (int v = 0; v < n; ++v) {
    auto& r = g.rotation_[v];
    Vec2 o = vertices[v];
    std::sort(r.begin(), r.end(), [&](int h1, int h2) {
      return angle_less(o, vertices[g.target(h1)], vertices[g.target(h2)]);
    });
    for (int i = 0; i < int(r.size()); ++i) g.rot_pos_[r[i]] = i;
  }

  auto walks = walk_faces(2 * m, [&](int h) { return g.face_next(h); });
  g.face_of_.assign(2 * m, -1);
  for (int f = 0; f < int(walks.size()); ++f) {
    Face face;
    face.id = f;
    face.boundary = std::move(walks[f]);
    for (int h : face.boundary) g.face_of_[h] = f;
    g.faces_.push_back(std::move(face));
  }
  if (m == 0) {
    g.faces_.push_back(Face{0, {}, true});
    g.outer_face_ = 0;
  } else {
    int lm = 0;
    for (int v = 1; v < n; ++v)
      if (vertices[v] < vertices[lm]) lm = v;
    g.outer_face_ = g.face_of_[g.rotation_[lm].back()];
    g.faces_[g.outer_face_].is_outer = true;
  }
  return g;
}

const std::vector<Face>& faces(const PlaneGraph& g) { return g.faces(); }

std::vector<std::vector<int>> map_faces(const MultiGraph& mg) {
  const int nh = 2 * int(mg.edges.size());
  // an isolated vertex bounds a single face with an empty walk
  if (nh == 0) return std::vector<std::vector<int>>(mg.num_vertices > 0 ? 1 : 0);
  std::vector<int> pos(nh, -1);
  for (auto& r : mg.rotation)
    for (int i = 0; i < int(r.size()); ++i) pos[r[i]] = i;
  auto origin = [&](int h) { return (h & 1) ? mg.edges[h >> 1][1] : mg.edges[h >> 1][0]; };
  return walk_faces(nh, [&](int h) {
    int t = h ^ 1;
    const auto& r = mg.rotation[origin(t)];
    return r[(pos[t] + r.size() - 1) % r.size()];
  });
}

MultiGraph as_multigraph(const PlaneGraph& g) {
  MultiGraph m;
  m.num_vertices = g.num_vertices();
  m.edges = g.edges();
  m.positions = g.vertices();
  m.rotation.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) m.rotation[v] = g.rotation(v);
  return m;
}

namespace {

MultiGraph dual_from_walks(const std::vector<std::vector<int>>& walks, int num_edges,
                           const std::vector<Vec2>& positions) {
  MultiGraph d;
  d.num_vertices = int(walks.size());
  d.positions = positions;
  std::vector<int> face_of(2 * num_edges, -1);
  for (int f = 0; f < int(walks.size()); ++f)
    for (int h : walks[f]) face_of[h] = f;
  d.edges.resize(num_edges);
  for (int e = 0; e < num_edges; ++e) d.edges[e] = {face_of[2 * e], face_of[2 * e + 1]};
  // Dual half-edge h crosses primal half-edge h from its left face to its right face.
  d.rotation = walks;
  return d;
}

}  // namespace

MultiGraph dual(const PlaneGraph& g) {
  std::vector<std::vector<int>> walks;
  std::vector<Vec2> pos;
  BBox box = bbox_of(g.vertices());
  double pad = std::max(1.0, box.diagonal());
  for (auto& f : g.faces()) {
    walks.push_back(f.boundary);
    if (f.is_outer) {
      pos.push_back({box.xmax + pad, 0.5 * (box.ymin + box.ymax)});
    } else {
      Polygon poly;
      for (int h : f.boundary) poly.push_back(g.vertex(g.origin(h)));
      pos.push_back(area_centroid(poly));
    }
  }
  return dual_from_walks(walks, g.num_edges(), pos);
}

MultiGraph dual(const MultiGraph& m) {
  auto walks = map_faces(m);
  std::vector<Vec2> pos;
  auto origin = [&](int h) { return (h & 1) ? m.edges[h >> 1][1] : m.edges[h >> 1][0]; };
  for (auto& w : walks) {
    Vec2 s{0, 0};
    if (!m.positions.empty())
      for (int h : w) s = s + m.positions[origin(h)];
    pos.push_back(w.empty() ? s : (1.0 / double(w.size())) * s);
  }
  return dual_from_walks(walks, int(m.edges.size()), pos);
}

bool is_isomorphic(const MultiGraph& a, const MultiGraph& b, int cap) {
  const int n = a.num_vertices;
  if (n > cap || b.num_vertices > cap)
    throw Error(ErrorCode::IsomorphismTimeout,
                "isomorphism check limited to " + std::to_string(cap) + " vertices");
  if (n != b.num_vertices || a.edges.size() != b.edges.size()) return false;
  auto adjacency = [](const MultiGraph& m) {
    std::vector<std::vector<int>> A(m.num_vertices, std::vector<int>(m.num_vertices, 0));
    for (auto& e : m.edges) {
      if (e[0] == e[1]) {
        A[e[0]][e[0]] += 1;
      } else {
        A[e[0]][e[1]] += 1;
        A[e[1]][e[0]] += 1;
      }
    }
    return A;
  };
  auto A = adjacency(a), B = adjacency(b);
  auto degrees = [n](const std::vector<std::vector<int>>& M) {
    std::vector<int> d(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i] += (i == j) ? 2 * M[i][j] : M[i][j];
    return d;
  };
  auto da = degrees(A), db = degrees(B);
  {
    auto sa = da, sb = db;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return da[x] > da[y]; });
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(int)> extend = [&](int k) {
    if (k == n) return true;
    int u = order[k];
    for (int w = 0; w < n; ++w) {
      if (used[w] || db[w] != da[u] || B[w][w] != A[u][u]) continue;
      bool ok = true;
      for (int j = 0; j < k && ok; ++j) {
        int uj = order[j];
        if (A[u][uj] != B[w][map[uj]]) ok = false;
      }
      if (!ok) continue;
      map[u] = w;
      used[w] = 1;
      if (extend(k + 1)) return true;
      used[w] = 0;
      map[u] = -1;
    }
    return false;
  };
  return extend(0);
}

bool double_dual_isomorphic(const PlaneGraph& g, int cap) {
  if (g.num_vertices() > cap)
    throw Error(ErrorCode::IsomorphismTimeout,
                "isomorphism check limited to " + std::to_string(cap) + " vertices");
  MultiGraph dd = dual(dual(g));
  return is_isomorphic(as_multigraph(g), dd, cap);
}

std::vector<int> bridges(const PlaneGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<int> out;
  int timer = 0;
  // Iterative DFS: frame = (vertex, entering edge, next rotation index).
  struct Frame {
    int v, via, idx;
  };
  std::vector<Frame> stack;
  disc[0] = low[0] = timer++;
  stack.push_back({0, -1, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& rot = g.rotation(f.v);
    if (f.idx < int(rot.size())) {
      int h = rot[f.idx++];
      int e = h >> 1;
      if (e == f.via) continue;
      int w = g.target(h);
      if (disc[w] < 0) {
        disc[w] = low[w] = timer++;
        stack.push_back({w, e, 0});
      } else {
        low[f.v] = std::min(low[f.v], disc[w]);
      }
    } else {
      Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        int p = stack.back().v;
        low[p] = std::min(low[p], low[done.v]);
        if (low[done.v] > disc[p]) out.push_back(done.via);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> outer_bridges(const PlaneGraph& g) {
  std::vector<int> out;
  int of = g.outer_face();
  for (int e : bridges(g))
    if (g.face_of(2 * e) == of && g.face_of(2 * e + 1) == of) out.push_back(e);
  return out;
}

namespace {

struct BfsResult {
  std::vector<int> color, parent, depth;
  int bad_edge = -1;
};

BfsResult bfs_color(const PlaneGraph& g) {
  const int n = g.num_vertices();
  BfsResult r;
  r.color.assign(n, 0);
  r.parent.assign(n, -1);
  r.depth.assign(n, 0);
  std::queue<int> q;
  r.color[0] = 1;
  q.push(0);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int h : g.rotation(u)) {
      int w = g.target(h);
      if (r.color[w] == 0) {
        r.color[w] = 3 - r.color[u];
        r.parent[w] = u;
        r.depth[w] = r.depth[u] + 1;
        q.push(w);
      } else if (r.color[w] == r.color[u] && r.bad_edge < 0) {
        r.bad_edge = h >> 1;
      }
    }
  }
  return r;
}

}  // namespace

std::optional<std::vector<int>> bipartition(const PlaneGraph& g) {
  auto r = bfs_color(g);
  if (r.bad_edge >= 0) return std::nullopt;
  return r.color;
}

std::vector<int> find_odd_cycle(const PlaneGraph& g) {
  auto r = bfs_color(g);
  if (r.bad_edge < 0) return {};
  int u = g.edge(r.bad_edge)[0], w = g.edge(r.bad_edge)[1];
  std::vector<int> pu{u}, pw{w};
  while (pu.back() != pw.back()) {
    if (r.depth[pu.back()] >= r.depth[pw.back()])
      pu.push_back(r.parent[pu.back()]);
    else
      pw.push_back(r.parent[pw.back()]);
  }
  std::vector<int> cycle(pu.begin(), pu.end());
  for (int i = int(pw.size()) - 2; i >= 0; --i) cycle.push_back(pw[i]);
  return cycle;
}

BridgeTree bridge_component_tree(const PlaneGraph& g) {
  const int n = g.num_vertices();
  auto ob = outer_bridges(g);
  std::vector<char> removed(g.num_edges(), 0);
  for (int e : ob) removed[e] = 1;
  BridgeTree t;
  t.component_of.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    if (t.component_of[s] >= 0) continue;
    int c = int(t.components.size());
    std::vector<int> comp;
    std::vector<int> stack{s};
    t.component_of[s] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int h : g.rotation(u)) {
        if (removed[h >> 1]) continue;
        int w = g.target(h);
        if (t.component_of[w] < 0) {
          t.component_of[w] = c;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    t.components.push_back(std::move(comp));
  }
  for (int e : ob) t.tree_edges.push_back({t.component_of[g.edge(e)[0]], t.component_of[g.edge(e)[1]], e});
  const int k = int(t.components.size());
  // Union-find over components: a repeated join means the removed edges were not all bridges.
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto& te : t.tree_edges) {
    int a = find(te[0]), b = find(te[1]);
    if (a == b) throw Error(ErrorCode::InternalCycle, "component graph has a cycle through edge " + std::to_string(te[2]));
    parent[a] = b;
  }
  if (int(t.tree_edges.size()) != k - 1)
    throw Error(ErrorCode::InternalCycle, "component graph is not a tree");
  return t;
}

}  // namespace graphdarcy
