#include "graphdarcy/mesh.hpp"

#include "graphdarcy/delaunay.hpp"
#include "graphdarcy/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace graphdarcy {

const char* facet_class_name(FacetClass c) {
  switch (c) {
    case FacetClass::Interior: return "INTERIOR";
    case FacetClass::Gamma: return "GAMMA";
    case FacetClass::OuterD: return "OUTER_D";
    case FacetClass::OuterN: return "OUTER_N";
  }
  return "?";
}

double Facet::length(const std::vector<Vec2>& xy) const { return distance(xy[nodes[0]], xy[nodes[1]]); }

double Mesh::cell_area(int c) const {
  const auto& t = cells[c];
  return 0.5 * cross(nodes[t[1]] - nodes[t[0]], nodes[t[2]] - nodes[t[0]]);
}

Vec2 Mesh::cell_centroid(int c) const {
  const auto& t = cells[c];
  return (1.0 / 3.0) * (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]);
}

double Mesh::h() const {
  double h = 0.0;
  for (const auto& t : cells)
    for (int i = 0; i < 3; ++i) h = std::max(h, distance(nodes[t[i]], nodes[t[(i + 1) % 3]]));
  return h;
}

Mesh make_mesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> cells, std::vector<int> cell_region,
               std::vector<int> cell_color, std::vector<std::array<int, 2>> interface_regions) {
  Mesh m;
  m.nodes = std::move(nodes);
  m.cells = std::move(cells);
  m.cell_region = std::move(cell_region);
  m.cell_color = std::move(cell_color);
  m.interface_regions = std::move(interface_regions);
  const int nc = m.num_cells();
  if (int(m.cell_region.size()) != nc || int(m.cell_color.size()) != nc)
    throw Error(ErrorCode::InvalidArgument, "cell tags do not match the cell count");
  std::map<std::pair<int, int>, int> iface;
  for (int i = 0; i < int(m.interface_regions.size()); ++i) {
    auto [a, b] = m.interface_regions[i];
    iface[{std::min(a, b), std::max(a, b)}] = i;
  }
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(std::size_t(3 * nc));
  m.cell_facets.resize(nc);
  for (int c = 0; c < nc; ++c) {
    auto& t = m.cells[c];
    if (m.cell_area(c) <= 0.0) throw Error(ErrorCode::DegenerateGeometry, "cell " + std::to_string(c) + " is not counterclockwise");
    for (int i = 0; i < 3; ++i) {
      int a = t[(i + 1) % 3], b = t[(i + 2) % 3];
      std::uint64_t k = (std::uint64_t(std::uint32_t(std::min(a, b))) << 32) | std::uint32_t(std::max(a, b));
      auto [it, fresh] = index.emplace(k, int(m.facets.size()));
      if (fresh) {
        Facet f;
        f.nodes = {a, b};
        f.cells = {c, -1};
        m.facets.push_back(f);
      } else {
        Facet& f = m.facets[it->second];
        if (f.cells[1] >= 0) throw Error(ErrorCode::DegenerateGeometry, "facet shared by more than two cells");
        f.cells[1] = c;
      }
      m.cell_facets[c][i] = it->second;
    }
  }
  for (Facet& f : m.facets) {
    int c0 = f.cells[0], c1 = f.cells[1];
    if (c1 < 0) {
      f.cls = m.cell_color[c0] == 1 ? FacetClass::OuterD : FacetClass::OuterN;
    } else if (m.cell_region[c0] == m.cell_region[c1]) {
      f.cls = FacetClass::Interior;
    } else {
      if (m.cell_color[c0] == m.cell_color[c1])
        throw Error(ErrorCode::DegenerateGeometry, "regions " + std::to_string(m.cell_region[c0]) + " and " +
                                                       std::to_string(m.cell_region[c1]) + " of one color share a facet");
      f.cls = FacetClass::Gamma;
      if (m.cell_color[c0] != 1) std::swap(f.cells[0], f.cells[1]);
      auto it = iface.find({std::min(m.cell_region[c0], m.cell_region[c1]), std::max(m.cell_region[c0], m.cell_region[c1])});
      f.interface = it == iface.end() ? -1 : it->second;
    }
    // orient so that cells[0] is on the left
    const auto& t = m.cells[f.cells[0]];
    for (int i = 0; i < 3; ++i)
      if ((t[i] == f.nodes[0] && t[(i + 1) % 3] == f.nodes[1]) || (t[i] == f.nodes[1] && t[(i + 1) % 3] == f.nodes[0])) {
        f.nodes = {t[i], t[(i + 1) % 3]};
        break;
      }
    f.normal = unit(right_normal(m.nodes[f.nodes[1]] - m.nodes[f.nodes[0]]));
  }
  return m;
}

Mesh triangulate(const DownscalingMap& map, double h_target, const MeshOptions& opt) {
  if (!(h_target > 0.0) || !std::isfinite(h_target)) throw Error(ErrorCode::InvalidArgument, "h_target must be positive");
  std::map<Vec2, int> id;
  std::vector<Vec2> pts;
  auto point = [&](Vec2 p) {
    auto [it, fresh] = id.emplace(p, int(pts.size()));
    if (fresh) pts.push_back(p);
    return it->second;
  };
  std::map<std::pair<int, int>, int> seen;
  std::vector<std::array<int, 2>> segs;
  for (const Region& r : map.regions)
    for (const Polygon& loop : r.loops)
      for (std::size_t i = 0; i < loop.size(); ++i) {
        int a = point(loop[i]), b = point(loop[(i + 1) % loop.size()]);
        if (a == b) continue;
        if (seen.emplace(std::make_pair(std::min(a, b), std::max(a, b)), 1).second) segs.push_back({a, b});
      }
  ConformingOptions co;
  co.h_max = h_target;
  co.min_angle_deg = opt.min_angle_deg;
  co.max_points = opt.max_points;
  ConformingResult cr = conforming_delaunay(pts, segs, map.domain, co);

  // region per flood-fill component
  std::vector<BBox> boxes;
  for (const Region& r : map.regions) {
    BBox b;
    for (const Polygon& l : r.loops)
      for (Vec2 p : l) b.add(p);
    boxes.push_back(b);
  }
  std::map<int, int> comp_region;
  std::vector<int> region(cr.triangles.size()), color(cr.triangles.size());
  for (std::size_t t = 0; t < cr.triangles.size(); ++t) {
    auto it = comp_region.find(cr.component[t]);
    if (it == comp_region.end()) {
      const auto& v = cr.triangles[t];
      Vec2 g = (1.0 / 3.0) * (cr.points[v[0]] + cr.points[v[1]] + cr.points[v[2]]);
      int found = -1;
      for (int r = 0; r < int(map.regions.size()) && found < 0; ++r) {
        if (!boxes[r].overlaps({g.x, g.y, g.x, g.y}, 0.0)) continue;
        int w = 0;
        for (const Polygon& l : map.regions[r].loops) w += winding_number(l, g);
        if (w != 0) found = r;
      }
      if (found < 0) throw Error(ErrorCode::DegenerateGeometry, "mesh cell outside every region");
      it = comp_region.emplace(cr.component[t], found).first;
    }
    region[t] = it->second;
    color[t] = map.regions[it->second].color;
  }
  std::vector<std::array<int, 2>> ifr;
  for (const auto& s : map.interfaces) ifr.push_back({s.left_region, s.right_region});
  // drop nodes not used by any kept cell (outside the domain)
  std::vector<int> remap(cr.points.size(), -1);
  std::vector<Vec2> nodes;
  for (auto& t : cr.triangles)
    for (int& v : t) {
      if (remap[v] < 0) {
        remap[v] = int(nodes.size());
        nodes.push_back(cr.points[v]);
      }
      v = remap[v];
    }
  return make_mesh(std::move(nodes), std::move(cr.triangles), std::move(region), std::move(color), std::move(ifr));
}

Mesh refine(const Mesh& m) {
  const int nn = m.num_nodes();
  std::vector<Vec2> nodes = m.nodes;
  for (const Facet& f : m.facets) nodes.push_back(midpoint(m.nodes[f.nodes[0]], m.nodes[f.nodes[1]]));
  std::vector<std::array<int, 3>> cells;
  std::vector<int> region, color;
  cells.reserve(4 * m.cells.size());
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    // midpoint of the facet opposite local vertex i
    int m0 = nn + m.cell_facets[c][0], m1 = nn + m.cell_facets[c][1], m2 = nn + m.cell_facets[c][2];
    cells.push_back({t[0], m2, m1});
    cells.push_back({m2, t[1], m0});
    cells.push_back({m1, m0, t[2]});
    cells.push_back({m0, m1, m2});
    for (int k = 0; k < 4; ++k) {
      region.push_back(m.cell_region[c]);
      color.push_back(m.cell_color[c]);
    }
  }
  return make_mesh(std::move(nodes), std::move(cells), std::move(region), std::move(color), m.interface_regions);
}

MeshQuality mesh_quality(const Mesh& m) {
  MeshQuality q;
  q.num_nodes = m.num_nodes();
  q.num_cells = m.num_cells();
  q.min_angle_deg = 180.0;
  q.h_min = INFINITY;
  for (const auto& t : m.cells)
    for (int i = 0; i < 3; ++i) {
      Vec2 p = m.nodes[t[i]], a = m.nodes[t[(i + 1) % 3]], b = m.nodes[t[(i + 2) % 3]];
      Vec2 u = a - p, w = b - p;
      double ang = std::atan2(std::fabs(cross(u, w)), dot(u, w)) * 180.0 / std::numbers::pi;
      q.min_angle_deg = std::min(q.min_angle_deg, ang);
      q.max_angle_deg = std::max(q.max_angle_deg, ang);
      q.h_min = std::min(q.h_min, norm(u));
      q.h_max = std::max(q.h_max, norm(u));
    }
  if (m.cells.empty()) q.min_angle_deg = q.h_min = 0.0;
  for (const Facet& f : m.facets) ++q.facet_counts[int(f.cls)];
  return q;
}

}  // namespace graphdarcy
