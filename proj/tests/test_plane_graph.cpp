#include "graphdarcy/error.hpp"
#include "graphdarcy/plane_graph.hpp"
#include "support/corpus.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace graphdarcy;

namespace {

PlaneGraph triangle() { return build_embedding({{0, 0}, {1, 0}, {0, 1}}, {{0, 1}, {1, 2}, {2, 0}}); }
PlaneGraph k4() {
  return build_embedding({{0, 0}, {2, 0}, {1, 2}, {1, 0.7}}, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}});
}
PlaneGraph path(int n) {
  std::vector<Vec2> p;
  std::vector<std::array<int, 2>> e;
  for (int i = 0; i < n; ++i) p.push_back({double(i), 0});
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return build_embedding(p, e);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST(Embedding, TriangleRotation) {
  PlaneGraph g = triangle();
  ASSERT_EQ(g.degree(0), 2);
  // edge 01 points along +x (angle 0), edge 20 reaches vertex 0 from (0,1) at angle pi/2
  EXPECT_EQ(g.rotation(0)[0] >> 1, 0);
  EXPECT_EQ(g.rotation(0)[1] >> 1, 2);
  EXPECT_EQ(g.origin(g.rotation(0)[1]), 0);
}

TEST(Embedding, RotationSortedByAngle) {
  PlaneGraph g = build_embedding({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, -1}},
                                 {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}});
  std::vector<double> ang;
  for (int h : g.rotation(0)) ang.push_back(std::atan2(g.direction(h).y, g.direction(h).x));
  EXPECT_TRUE(std::is_sorted(ang.begin(), ang.end()));
  for (int h : g.rotation(0)) {
    EXPECT_EQ(g.ccw_next(g.cw_next(h)), h);
  }
}

TEST(Embedding, Errors) {
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {{0, 1}, {2, 3}}); }),
            ErrorCode::NotConnected);
  try {
    build_embedding({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {1, 3}});
    FAIL();
  } catch (const EdgeCrossingError& e) {
    EXPECT_EQ(e.edges(), std::make_pair(4, 5));
  }
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {1, 0}}, {{0, 0}}); }), ErrorCode::NotSimple);
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}); }), ErrorCode::NotSimple);
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {0, 0}}, {{0, 1}}); }), ErrorCode::DuplicateCoordinate);
  EXPECT_EQ(code_of([] { build_embedding({}, {}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { build_embedding({{0, NAN}}, {}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {1, 0}}, {{0, 2}}); }), ErrorCode::InvalidArgument);
  // vertex in the interior of a non-incident edge
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {2, 0}, {1, 0}, {1, 1}}, {{0, 1}, {2, 3}}); }),
            ErrorCode::EdgeCrossing);
  // overlapping collinear edges sharing a vertex
  EXPECT_EQ(code_of([] { build_embedding({{0, 0}, {2, 0}, {1, 0}}, {{0, 1}, {0, 2}}); }), ErrorCode::EdgeCrossing);
}

TEST(Faces, Examples) {
  PlaneGraph t = triangle();
  ASSERT_EQ(faces(t).size(), 2u);
  EXPECT_EQ(std::count_if(faces(t).begin(), faces(t).end(), [](const Face& f) { return f.is_outer; }), 1);
  EXPECT_EQ(faces(path(3)).size(), 1u);
  EXPECT_EQ(faces(k4()).size(), 4u);
  PlaneGraph one = build_embedding({{0, 0}}, {});
  EXPECT_EQ(faces(one).size(), 1u);
  EXPECT_TRUE(faces(one)[0].is_outer);
}

TEST(Faces, EulerAndHalfEdgePartitionOnCorpus) {
  for (const auto& cg : corpus::all()) {
    PlaneGraph g = cg.build();
    int V = g.num_vertices(), E = g.num_edges(), F = int(faces(g).size());
    EXPECT_EQ(V - E + F, 2) << cg.name;
    std::vector<int> seen(2 * E, 0);
    for (const Face& f : faces(g))
      for (int h : f.boundary) {
        ++seen[h];
        EXPECT_EQ(g.face_of(h), f.id);
      }
    for (int c : seen) EXPECT_EQ(c, 1) << cg.name;
    EXPECT_TRUE(faces(g)[g.outer_face()].is_outer);
  }
}

TEST(Dual, Examples) {
  MultiGraph d3 = dual(triangle());
  EXPECT_EQ(d3.num_vertices, 2);
  ASSERT_EQ(d3.edges.size(), 3u);
  for (auto e : d3.edges) EXPECT_NE(e[0], e[1]);
  MultiGraph d2 = dual(path(2));
  EXPECT_EQ(d2.num_vertices, 1);
  ASSERT_EQ(d2.edges.size(), 1u);
  EXPECT_EQ(d2.edges[0][0], d2.edges[0][1]);
  MultiGraph d4 = dual(k4());
  EXPECT_EQ(d4.num_vertices, 4);
  EXPECT_TRUE(is_isomorphic(d4, as_multigraph(k4())));
}

TEST(Dual, DoubleDualOnCorpus) {
  EXPECT_TRUE(double_dual_isomorphic(triangle()));
  EXPECT_TRUE(double_dual_isomorphic(path(2)));
  EXPECT_TRUE(double_dual_isomorphic(k4()));
  int tested = 0;
  for (const auto& cg : corpus::all()) {
    if (cg.pts.size() > 12) continue;
    EXPECT_TRUE(double_dual_isomorphic(cg.build())) << cg.name;
    ++tested;
  }
  EXPECT_GE(tested, 15);
  EXPECT_EQ(code_of([] { double_dual_isomorphic(path(13)); }), ErrorCode::IsomorphismTimeout);
}

TEST(Isomorphism, DetectsNonIsomorphicPairs) {
  MultiGraph p4 = as_multigraph(path(4));
  MultiGraph star = as_multigraph(build_embedding({{0, 0}, {1, 0}, {0, 1}, {-1, 0}}, {{0, 1}, {0, 2}, {0, 3}}));
  EXPECT_FALSE(is_isomorphic(p4, star));
  MultiGraph relabeled = p4;
  for (auto& e : relabeled.edges)
    for (int& v : e) v = 3 - v;
  EXPECT_TRUE(is_isomorphic(p4, relabeled));
}

TEST(Bridges, Examples) {
  EXPECT_EQ(bridges(path(4)), (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(bridges(triangle()).empty());
  PlaneGraph tp = build_embedding({{0, 0}, {1, 0}, {0, 1}, {2, 0}}, {{0, 1}, {1, 2}, {2, 0}, {1, 3}});
  EXPECT_EQ(bridges(tp), (std::vector<int>{3}));
  EXPECT_EQ(outer_bridges(tp), (std::vector<int>{3}));
  EXPECT_TRUE(outer_bridges(triangle()).empty());
  EXPECT_EQ(outer_bridges(path(3)), (std::vector<int>{0, 1}));
}

TEST(Bridges, PendantInsideFaceIsNotOuter) {
  PlaneGraph g = build_embedding({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0.7, 0.6}},
                                 {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}});
  EXPECT_EQ(bridges(g), (std::vector<int>{4}));
  EXPECT_TRUE(outer_bridges(g).empty());
}

TEST(Bridges, MatchBruteForceOnCorpus) {
  for (const auto& cg : corpus::all()) {
    PlaneGraph g = cg.build();
    EXPECT_EQ(bridges(g), corpus::brute_force_bridges(g.num_vertices(), g.edges())) << cg.name;
  }
}

TEST(Bipartition, Examples) {
  EXPECT_EQ(*bipartition(path(3)), (std::vector<int>{1, 2, 1}));
  EXPECT_FALSE(bipartition(triangle()).has_value());
  PlaneGraph c4 = build_embedding({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_EQ(*bipartition(c4), (std::vector<int>{1, 2, 1, 2}));
}

TEST(Bipartition, ColoringOrOddCycleOnCorpus) {
  for (const auto& cg : corpus::all()) {
    PlaneGraph g = cg.build();
    auto col = bipartition(g);
    if (col) {
      EXPECT_EQ((*col)[0], 1);
      for (auto e : g.edges()) EXPECT_NE((*col)[e[0]], (*col)[e[1]]) << cg.name;
      EXPECT_TRUE(find_odd_cycle(g).empty());
    } else {
      auto cyc = find_odd_cycle(g);
      ASSERT_FALSE(cyc.empty()) << cg.name;
      EXPECT_EQ(cyc.size() % 2, 1u);
      std::set<std::array<int, 2>> es;
      for (auto e : g.edges()) es.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        EXPECT_TRUE(es.count({std::min(a, b), std::max(a, b)})) << cg.name;
      }
    }
  }
}

TEST(BridgeTree, Examples) {
  PlaneGraph tt = build_embedding({{0, 0}, {1, 0}, {0, 1}, {3, 0}, {4, 0}, {3, 1}},
                                  {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {1, 3}});
  BridgeTree bt = bridge_component_tree(tt);
  EXPECT_EQ(bt.components.size(), 2u);
  ASSERT_EQ(bt.tree_edges.size(), 1u);
  EXPECT_EQ(bt.tree_edges[0][2], 6);
  BridgeTree b3 = bridge_component_tree(triangle());
  EXPECT_EQ(b3.components.size(), 1u);
  EXPECT_TRUE(b3.tree_edges.empty());
  BridgeTree b4 = bridge_component_tree(path(4));
  EXPECT_EQ(b4.components.size(), 4u);
  EXPECT_EQ(b4.tree_edges.size(), 3u);
}

TEST(BridgeTree, IsTreeOnCorpus) {
  for (const auto& cg : corpus::all()) {
    PlaneGraph g = cg.build();
    BridgeTree bt = bridge_component_tree(g);
    int k = int(bt.components.size());
    EXPECT_EQ(int(bt.tree_edges.size()), k - 1) << cg.name;
    std::vector<int> parent(k);
    for (int i = 0; i < k; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (auto t : bt.tree_edges) parent[find(t[0])] = find(t[1]);
    for (int i = 0; i < k; ++i) EXPECT_EQ(find(i), find(0)) << cg.name;
  }
}
