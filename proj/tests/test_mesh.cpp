#include "graphdarcy/error.hpp"
#include "graphdarcy/mesh.hpp"
#include "support/corpus.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace graphdarcy;

namespace {

PlaneGraph halves_graph() { return build_embedding({{0.25, 0.5}, {0.75, 0.5}}, {{0, 1}}); }

DownscalingMap halves_map() {
  std::vector<Region> regions(2);
  regions[0].owner = 0;
  regions[0].loops = {{{0, 0}, {0.5, 0}, {0.5, 1}, {0, 1}}};
  regions[1].owner = 1;
  regions[1].loops = {{{0.5, 0}, {1, 0}, {1, 1}, {0.5, 1}}};
  return assemble_map(halves_graph(), regions, "halves", 0.0);
}

double total_area(const Mesh& m) {
  double a = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) a += m.cell_area(c);
  return a;
}

// Checks shared by every mesh built from a map.
void check_mesh(const Mesh& m, const DownscalingMap& map) {
  double dom = 0.0;
  for (const auto& l : map.domain) dom += signed_area(l);
  EXPECT_NEAR(total_area(m), dom, 1e-12 * std::max(1.0, dom));
  double outer_len = 0.0, perim = 0.0;
  for (const auto& l : map.domain) perim += perimeter(l);
  for (const Facet& f : m.facets) {
    Vec2 a = m.nodes[f.nodes[0]], b = m.nodes[f.nodes[1]];
    EXPECT_NEAR(norm(f.normal), 1.0, 1e-14);
    switch (f.cls) {
      case FacetClass::Interior:
        ASSERT_GE(f.cells[1], 0);
        EXPECT_EQ(m.cell_region[f.cells[0]], m.cell_region[f.cells[1]]);
        EXPECT_LT(f.cells[0], f.cells[1]);
        break;
      case FacetClass::Gamma: {
        ASSERT_GE(f.cells[1], 0);
        EXPECT_EQ(m.cell_color[f.cells[0]], 1);
        EXPECT_EQ(m.cell_color[f.cells[1]], 2);
        ASSERT_GE(f.interface, 0);
        const auto& poly = map.interfaces[f.interface].polyline;
        double da = INFINITY, db = INFINITY;
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
          da = std::min(da, point_segment_distance(a, poly[i], poly[i + 1]));
          db = std::min(db, point_segment_distance(b, poly[i], poly[i + 1]));
        }
        EXPECT_LE(std::max(da, db), 1e-12);
        Vec2 d = m.cell_centroid(f.cells[1]) - m.cell_centroid(f.cells[0]);
        EXPECT_GT(dot(d, f.normal), 0.0);
        break;
      }
      case FacetClass::OuterD:
        EXPECT_EQ(f.cells[1], -1);
        EXPECT_EQ(m.cell_color[f.cells[0]], 1);
        outer_len += distance(a, b);
        break;
      case FacetClass::OuterN:
        EXPECT_EQ(f.cells[1], -1);
        EXPECT_EQ(m.cell_color[f.cells[0]], 2);
        outer_len += distance(a, b);
        break;
    }
    if (f.cells[1] < 0) {
      Vec2 out = midpoint(a, b) - m.cell_centroid(f.cells[0]);
      EXPECT_GT(dot(out, f.normal), 0.0);
    }
  }
  EXPECT_NEAR(outer_len, perim, 1e-12 * perim);
  // region tags agree with point location in the map
  for (int c = 0; c < m.num_cells(); ++c) {
    Vec2 g = m.cell_centroid(c);
    int hits = 0, which = -1;
    for (int r = 0; r < int(map.regions.size()); ++r) {
      int w = 0;
      for (const auto& l : map.regions[r].loops) w += winding_number(l, g);
      if (w != 0) {
        ++hits;
        which = r;
      }
    }
    EXPECT_EQ(hits, 1);
    EXPECT_EQ(which, m.cell_region[c]);
    EXPECT_EQ(m.cell_color[c], map.regions[which].color);
  }
}

}  // namespace

TEST(Triangulate, HalvesResolveTheInterface) {
  DownscalingMap map = halves_map();
  Mesh m = triangulate(map, 0.5);
  check_mesh(m, map);
  MeshQuality q = mesh_quality(m);
  EXPECT_GE(q.min_angle_deg, 15.0);
  EXPECT_LE(q.h_max, 0.5 + 1e-12);
  double gamma_len = 0.0;
  for (const Facet& f : m.facets)
    if (f.cls == FacetClass::Gamma) {
      EXPECT_EQ(m.nodes[f.nodes[0]].x, 0.5);
      EXPECT_EQ(m.nodes[f.nodes[1]].x, 0.5);
      EXPECT_EQ(f.normal.x, 1.0);
      gamma_len += f.length(m.nodes);
    }
  EXPECT_NEAR(gamma_len, 1.0, 1e-15);
}

TEST(Triangulate, CoarsestMeshStillResolvesPolylines) {
  DownscalingMap map = halves_map();
  Mesh m = triangulate(map, 10.0);
  check_mesh(m, map);
  EXPECT_GE(mesh_quality(m).facet_counts[int(FacetClass::Gamma)], 1);
  EXPECT_LE(m.num_cells(), 16);
}

TEST(Triangulate, C4MapTagsMatchPointLocation) {
  PlaneGraph g = build_embedding({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  DownscalingMap map = downscaling_map(g);
  Mesh m = triangulate(map, 0.1);
  check_mesh(m, map);
  EXPECT_LE(mesh_quality(m).h_max, 0.1 + 1e-12);
}

TEST(Triangulate, TwoStrip) {
  DownscalingMap map = two_strip_map();
  Mesh m = triangulate(map, 0.25);
  check_mesh(m, map);
  MeshQuality q = mesh_quality(m);
  EXPECT_GE(q.min_angle_deg, 15.0);
  EXPECT_GE(q.facet_counts[int(FacetClass::Gamma)], 4);
  EXPECT_LE(q.h_max, 0.25 + 1e-12);
}

TEST(Triangulate, RejectsBadSize) {
  EXPECT_THROW(triangulate(halves_map(), 0.0), Error);
  EXPECT_THROW(triangulate(halves_map(), -1.0), Error);
  EXPECT_THROW(triangulate(halves_map(), NAN), Error);
}

TEST(Refine, CountsAndTags) {
  Mesh m = make_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}, {0, 1}, {1, 2}, {{0, 1}});
  ASSERT_EQ(m.facets.size(), 5u);
  EXPECT_EQ(mesh_quality(m).facet_counts[int(FacetClass::Gamma)], 1);
  Mesh r = refine(m);
  EXPECT_EQ(r.num_cells(), 8);
  EXPECT_EQ(r.num_nodes(), 4 + 5);
  EXPECT_EQ(mesh_quality(r).facet_counts[int(FacetClass::Gamma)], 2);
  for (int c = 0; c < 8; ++c) EXPECT_EQ(r.cell_region[c], c / 4);
  EXPECT_NEAR(total_area(r), 1.0, 1e-12);
}

TEST(Refine, GammaDoublesAndAreaInvariant) {
  DownscalingMap map = two_strip_map();
  Mesh m = triangulate(map, 0.5);
  double a0 = total_area(m);
  int g0 = mesh_quality(m).facet_counts[int(FacetClass::Gamma)];
  for (int level = 0; level < 3; ++level) {
    Mesh r = refine(m);
    EXPECT_EQ(r.num_cells(), 4 * m.num_cells());
    EXPECT_EQ(r.num_nodes(), m.num_nodes() + int(m.facets.size()));
    EXPECT_EQ(mesh_quality(r).facet_counts[int(FacetClass::Gamma)], 2 * mesh_quality(m).facet_counts[int(FacetClass::Gamma)]);
    EXPECT_NEAR(total_area(r), a0, 1e-12 * a0);
    EXPECT_NEAR(mesh_quality(r).min_angle_deg, mesh_quality(m).min_angle_deg, 1e-9);
    check_mesh(r, map);
    m = std::move(r);
  }
  EXPECT_EQ(mesh_quality(m).facet_counts[int(FacetClass::Gamma)], 8 * g0);
}

TEST(Quality, Equilateral) {
  Mesh m = make_mesh({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}, {{0, 1, 2}}, {0}, {1});
  MeshQuality q = mesh_quality(m);
  EXPECT_NEAR(q.min_angle_deg, 60.0, 1e-12);
  EXPECT_NEAR(q.max_angle_deg, 60.0, 1e-12);
  EXPECT_EQ(q.facet_counts[int(FacetClass::OuterD)], 3);
  MeshQuality r = mesh_quality(refine(m));
  EXPECT_NEAR(r.min_angle_deg, 60.0, 1e-12);
  EXPECT_NEAR(r.h_max, 0.5, 1e-15);
}

TEST(MakeMesh, RejectsNonManifoldAndClockwise) {
  EXPECT_THROW(make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}, {0}, {1}), Error);
  EXPECT_THROW(make_mesh({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.2, -1}}, {{0, 1, 2}, {1, 3, 2}, {1, 0, 4}, {0, 1, 3}},
                         {0, 0, 0, 0}, {1, 1, 1, 1}),
               Error);
}

TEST(Corpus, MeshesOfDownscalingMaps) {
  int meshed = 0;
  for (const auto& cg : corpus::all()) {
    if (cg.pts.size() > 24) continue;
    PlaneGraph g = cg.build();
    if (!bipartition(g)) continue;
    DownscalingMap map = downscaling_map(g);
    BBox box = bbox_of(g.vertices());
    double h = std::max(box.diagonal(), 1.0) / 8.0;
    Mesh m = triangulate(map, h);
    check_mesh(m, map);
    ++meshed;
  }
  EXPECT_GE(meshed, 15);
}
