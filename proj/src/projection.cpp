#include "graphdarcy/darcy_mixed.hpp"
#include "graphdarcy/error.hpp"
#include "graphdarcy/fem.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <numeric>

namespace graphdarcy {

namespace {

struct Submesh {
  std::vector<int> local;  // node -> local index or -1
  std::vector<int> node;   // local -> node
  std::vector<int> piece;  // local -> connected piece
  int pieces = 0;
  std::vector<char> boundary;  // local
};

bool in2(const Mesh& m, int c) { return c >= 0 && m.cell_color[c] == 2; }

Submesh color2(const Mesh& m) {
  Submesh s;
  s.local.assign(m.nodes.size(), -1);
  for (int c = 0; c < m.num_cells(); ++c)
    if (in2(m, c))
      for (int v : m.cells[c]) s.local[v] = 0;
  for (int v = 0; v < m.num_nodes(); ++v)
    if (s.local[v] == 0) {
      s.local[v] = int(s.node.size());
      s.node.push_back(v);
    }
  if (s.node.empty()) throw Error(ErrorCode::EmptyColorClass, "no color-2 cells");
  const int n = int(s.node.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int c = 0; c < m.num_cells(); ++c)
    if (in2(m, c))
      for (int i = 1; i < 3; ++i) {
        int a = find(s.local[m.cells[c][0]]), b = find(s.local[m.cells[c][i]]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<int> id(n, -1);
  s.piece.resize(n);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (id[r] < 0) id[r] = s.pieces++;
    s.piece[i] = id[r];
  }
  s.boundary.assign(n, 0);
  for (const Facet& f : m.facets)
    if (in2(m, f.cells[0]) != in2(m, f.cells[1]))
      for (int v : f.nodes) s.boundary[s.local[v]] = 1;
  return s;
}

Vec2 field(const Expr& vx, const Expr& vy, Vec2 x) { return {eval_checked(vx, x, "vx"), eval_checked(vy, x, "vy")}; }

double divergence(const Expr& vx, const Expr& vy, Vec2 x) {
  const double h = 1e-6;
  return (eval_checked(vx, {x.x + h, x.y}, "vx") - eval_checked(vx, {x.x - h, x.y}, "vx")) / (2 * h) +
         (eval_checked(vy, {x.x, x.y + h}, "vy") - eval_checked(vy, {x.x, x.y - h}, "vy")) / (2 * h);
}

Vec2 cell_gradient(const Mesh& m, int c, const std::vector<double>& u) {
  auto g = hat_gradients(m, c);
  Vec2 r{0.0, 0.0};
  for (int i = 0; i < 3; ++i) r = r + u[m.cells[c][i]] * g[i];
  return r;
}

}  // namespace

ProjectionResult project_onto_V(const Mesh& m, const Expr& vx, const Expr& vy) {
  Submesh s = color2(m);
  const int n = int(s.node.size());
  std::vector<Eigen::Triplet<double>> kt;
  Vector rhs = Vector::Zero(n);
  for (int c = 0; c < m.num_cells(); ++c) {
    if (!in2(m, c)) continue;
    auto g = hat_gradients(m, c);
    const double area = m.cell_area(c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) kt.emplace_back(s.local[m.cells[c][i]], s.local[m.cells[c][j]], area * dot(g[i], g[j]));
    for (const TriPoint& q : triangle_rule(2)) {
      double dv = divergence(vx, vy, at(m, c, q));
      const double lam[3] = {q.l0, q.l1, q.l2};
      for (int i = 0; i < 3; ++i) rhs[s.local[m.cells[c][i]]] -= q.w * area * dv * lam[i];
    }
  }
  SpMat K(n, n);
  K.setFromTriplets(kt.begin(), kt.end());

  ProjectionResult r;
  r.xi.assign(m.nodes.size(), 0.0);
  r.eta.assign(m.nodes.size(), 0.0);

  // xi: homogeneous Dirichlet on the boundary of Omega2
  std::vector<int> interior(n, -1);
  std::vector<int> inodes;
  for (int i = 0; i < n; ++i)
    if (!s.boundary[i]) {
      interior[i] = int(inodes.size());
      inodes.push_back(i);
    }
  if (!inodes.empty()) {
    std::vector<Eigen::Triplet<double>> it;
    for (int k = 0; k < K.outerSize(); ++k)
      for (SpMat::InnerIterator e(K, k); e; ++e)
        if (interior[e.row()] >= 0 && interior[e.col()] >= 0) it.emplace_back(interior[e.row()], interior[e.col()], e.value());
    SpMat KI(int(inodes.size()), int(inodes.size()));
    KI.setFromTriplets(it.begin(), it.end());
    Vector b(int(inodes.size()));
    for (int i = 0; i < int(inodes.size()); ++i) b[i] = rhs[inodes[i]];
    Eigen::SimplicialLDLT<SpMat> ldlt(KI);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "Dirichlet problem");
    Vector z = ldlt.solve(b);
    for (int i = 0; i < int(inodes.size()); ++i) r.xi[s.node[inodes[i]]] = z[i];
  }

  // eta: zero-mean Neumann problem with data v - grad xi
  Vector nb = Vector::Zero(n);
  std::vector<Eigen::Triplet<double>> pt;
  for (int c = 0; c < m.num_cells(); ++c) {
    if (!in2(m, c)) continue;
    auto g = hat_gradients(m, c);
    const double area = m.cell_area(c);
    Vec2 gx = cell_gradient(m, c, r.xi);
    for (const TriPoint& q : triangle_rule(2)) {
      Vec2 w = field(vx, vy, at(m, c, q)) - gx;
      for (int i = 0; i < 3; ++i) nb[s.local[m.cells[c][i]]] += q.w * area * dot(w, g[i]);
    }
    for (int i = 0; i < 3; ++i) {
      int a = s.local[m.cells[c][i]];
      pt.emplace_back(s.piece[a], a, area / 3.0);
    }
  }
  std::vector<double> sum(s.pieces, 0.0), scale(s.pieces, 0.0);
  for (int i = 0; i < n; ++i) {
    sum[s.piece[i]] += nb[i];
    scale[s.piece[i]] += std::fabs(nb[i]);
  }
  for (int p = 0; p < s.pieces; ++p)
    if (std::fabs(sum[p]) > 1e-9 * scale[p] + 1e-13)
      throw Error(ErrorCode::SingularNeumann, "Neumann data of piece " + std::to_string(p) + " sums to " +
                                                  std::to_string(sum[p]));
  std::vector<Eigen::Triplet<double>> ft;
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator e(K, k); e; ++e) ft.emplace_back(int(e.row()), int(e.col()), e.value());
  for (const auto& t : pt) {
    ft.emplace_back(n + t.row(), t.col(), t.value());
    ft.emplace_back(t.col(), n + t.row(), t.value());
  }
  SpMat M(n + s.pieces, n + s.pieces);
  M.setFromTriplets(ft.begin(), ft.end());
  M.makeCompressed();
  Vector b = Vector::Zero(n + s.pieces);
  b.head(n) = nb;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularNeumann, lu.lastErrorMessage());
  Vector z = lu.solve(b);
  for (int i = 0; i < n; ++i) r.eta[s.node[i]] = z[i];
  return r;
}

ProjectionMetrics projection_metrics(const Mesh& m, const Expr& vx, const Expr& vy, const ProjectionResult& r) {
  ProjectionMetrics out;
  std::vector<double> pot(m.nodes.size());
  for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = r.xi[i] + r.eta[i];
  double res2 = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    if (!in2(m, c)) continue;
    const double area = m.cell_area(c);
    Vec2 pv = cell_gradient(m, c, pot);
    double div = 0.0;
    for (const TriPoint& q : triangle_rule(4)) {
      Vec2 x = at(m, c, q);
      Vec2 perp = field(vx, vy, x) - pv;
      out.inner += q.w * area * dot(pv, perp);
      res2 += q.w * area * dot(perp, perp);
      div += q.w * divergence(vx, vy, x);
    }
    out.max_cell_divergence = std::max(out.max_cell_divergence, std::fabs(div));
  }
  out.residual_l2 = std::sqrt(res2);
  for (const Facet& f : m.facets) {
    bool a = in2(m, f.cells[0]), b = in2(m, f.cells[1]);
    if (a == b) continue;
    int c = a ? f.cells[0] : f.cells[1];
    Vec2 n = a ? f.normal : -1.0 * f.normal;
    Vec2 pv = cell_gradient(m, c, pot);
    Vec2 A = m.nodes[f.nodes[0]], B = m.nodes[f.nodes[1]];
    double mean = 0.0;
    for (const auto& [t, w] : facet_gauss()) mean += w * dot(field(vx, vy, (1.0 - t) * A + t * B) - pv, n);
    out.max_boundary_flux = std::max(out.max_boundary_flux, std::fabs(mean));
  }
  return out;
}

}  // namespace graphdarcy
