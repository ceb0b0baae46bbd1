#include "graphdarcy/darcy_mixed.hpp"

#include "graphdarcy/error.hpp"
#include "graphdarcy/fem.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <numeric>

namespace graphdarcy {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SpMat to_sparse(int rows, int cols, const Triplets& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void place(Triplets& out, const SpMat& m, int r0, int c0, double scale = 1.0, bool transpose = false) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) {
      int r = transpose ? int(it.col()) : int(it.row());
      int c = transpose ? int(it.row()) : int(it.col());
      out.emplace_back(r0 + r, c0 + c, scale * it.value());
    }
}

int find(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

DofLayout build_layout(const Mesh& m) {
  DofLayout L;
  int n1 = 0, n2 = 0;
  for (int c : m.cell_color) (c == 1 ? n1 : n2)++;
  if (n1 == 0 || n2 == 0)
    throw Error(ErrorCode::EmptyColorClass, n1 == 0 ? "no color-1 cells" : "no color-2 cells");
  L.facet_u1.assign(m.facets.size(), -1);
  for (int f = 0; f < int(m.facets.size()); ++f)
    if (m.cell_color[m.facets[f].cells[0]] == 1) {
      L.facet_u1[f] = L.n_u1();
      L.u1_facet.push_back(f);
    }
  L.cell_p1.assign(m.cells.size(), -1);
  std::vector<char> on2(m.nodes.size(), 0);
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] == 1) {
      L.cell_p1[c] = L.n_p1();
      L.p1_cell.push_back(c);
    } else {
      for (int v : m.cells[c]) on2[v] = 1;
    }
  }
  L.node_p2.assign(m.nodes.size(), -1);
  for (int v = 0; v < m.num_nodes(); ++v)
    if (on2[v]) {
      L.node_p2[v] = L.n_p2();
      L.p2_node.push_back(v);
    }
  std::vector<int> parent(L.n_p2());
  std::iota(parent.begin(), parent.end(), 0);
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] != 2) continue;
    int r = find(parent, L.node_p2[m.cells[c][0]]);
    for (int i = 1; i < 3; ++i) {
      int s = find(parent, L.node_p2[m.cells[c][i]]);
      if (s != r) parent[std::max(r, s)] = std::min(r, s), r = std::min(r, s);
    }
  }
  std::vector<int> piece_of_root(L.n_p2(), -1);
  L.p2_piece.resize(L.n_p2());
  for (int i = 0; i < L.n_p2(); ++i) {
    int r = find(parent, i);
    if (piece_of_root[r] < 0) piece_of_root[r] = L.num_pieces++;
    L.p2_piece[i] = piece_of_root[r];
  }
  return L;
}

SaddleSystem assemble(const Mesh& m, const Coefficients& k) {
  SaddleSystem S;
  S.layout = build_layout(m);
  const DofLayout& L = S.layout;
  const int nu = L.n_u1(), np1 = L.n_p1(), np2 = L.n_p2();
  Triplets ma, g, mb, kk, d, ka, p;
  Vector f_u1 = Vector::Zero(nu), f_p2 = Vector::Zero(np2), f_eta = Vector::Zero(np2), f_p1 = Vector::Zero(np1);
  S.min_a = INFINITY;
  auto coefficient_a = [&](Vec2 x) {
    double a = eval_checked(k.a, x, "a");
    if (!(a > 1e-12))
      throw Error(ErrorCode::NonPositiveA, "a = " + std::to_string(a) + " at (" + std::to_string(x.x) + ", " +
                                               std::to_string(x.y) + ")");
    S.min_a = std::min(S.min_a, a);
    return a;
  };
  const auto& rule = triangle_rule(2);

  for (int c = 0; c < m.num_cells(); ++c) {
    const double area = m.cell_area(c);
    const auto& t = m.cells[c];
    if (m.cell_color[c] == 1) {
      int r = L.cell_p1[c];
      std::array<int, 3> dof;
      for (int i = 0; i < 3; ++i) {
        dof[i] = L.facet_u1[m.cell_facets[c][i]];
        d.emplace_back(r, dof[i], facet_sign(m, c, i));
      }
      for (const TriPoint& q : rule) {
        Vec2 x = at(m, c, q);
        double a = coefficient_a(x), w = q.w * area;
        Vec2 gv{eval_checked(k.gx, x, "gx"), eval_checked(k.gy, x, "gy")};
        std::array<Vec2, 3> phi;
        for (int i = 0; i < 3; ++i) phi[i] = flux_basis(m, c, i, x);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) ma.emplace_back(dof[i], dof[j], w * a * dot(phi[i], phi[j]));
          f_u1[dof[i]] -= w * dot(gv, phi[i]);
        }
        f_p1[r] += w * eval_checked(k.source(1), x, "F");
      }
    } else {
      auto grad = hat_gradients(m, c);
      std::array<int, 3> dof{L.node_p2[t[0]], L.node_p2[t[1]], L.node_p2[t[2]]};
      double abar = 0.0;
      for (const TriPoint& q : rule) {
        Vec2 x = at(m, c, q);
        double a = coefficient_a(x), w = q.w * area;
        abar += q.w * a;
        Vec2 gv{eval_checked(k.gx, x, "gx"), eval_checked(k.gy, x, "gy")};
        double src = eval_checked(k.source(2), x, "F");
        const double lam[3] = {q.l0, q.l1, q.l2};
        for (int i = 0; i < 3; ++i) {
          f_p2[dof[i]] += w * src * lam[i];
          f_eta[dof[i]] -= w * dot(gv, grad[i]);
        }
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double s = area * dot(grad[i], grad[j]);
          kk.emplace_back(dof[i], dof[j], s);
          ka.emplace_back(dof[i], dof[j], abar * s);
        }
        p.emplace_back(L.p2_piece[dof[i]], dof[i], area / 3.0);
      }
    }
  }

  for (int f = 0; f < int(m.facets.size()); ++f) {
    const Facet& fc = m.facets[f];
    if (fc.cls != FacetClass::Gamma) continue;
    const int du = L.facet_u1[f];
    const int na = L.node_p2[fc.nodes[0]], nb = L.node_p2[fc.nodes[1]];
    Vec2 A = m.nodes[fc.nodes[0]], B = m.nodes[fc.nodes[1]];
    const double len = distance(A, B);
    S.gamma_length += len;
    for (const auto& [tq, wq] : facet_gauss()) {
      Vec2 x = (1.0 - tq) * A + tq * B;
      double beta = eval_checked(k.beta, x, "beta");
      if (beta < 0.0) throw Error(ErrorCode::InvalidArgument, "beta is negative on Gamma");
      double fs = eval_checked(k.f_stress, x, "f_stress"), ff = eval_checked(k.f_flux, x, "f_flux");
      const double N[2] = {1.0 - tq, tq};
      const int n[2] = {na, nb};
      // the flux basis function has normal component 1/len on its own facet
      for (int i = 0; i < 2; ++i) {
        g.emplace_back(du, n[i], wq * N[i]);
        for (int j = 0; j < 2; ++j) mb.emplace_back(n[i], n[j], wq * len * beta * N[i] * N[j]);
        f_p2[n[i]] -= wq * len * ff * N[i];
      }
      f_u1[du] += wq * fs;
      S.beta_mass += wq * len * beta;
    }
  }
  if (!(S.beta_mass > 0.0))
    throw Error(ErrorCode::AllZeroBeta, S.gamma_length > 0.0 ? "beta vanishes on all of Gamma" : "the mesh has no Gamma facets");

  S.Ma = to_sparse(nu, nu, ma);
  S.G = to_sparse(nu, np2, g);
  S.Mbeta = to_sparse(np2, np2, mb);
  S.K = to_sparse(np2, np2, kk);
  S.D = to_sparse(np1, nu, d);
  S.Ka = to_sparse(np2, np2, ka);
  S.P = to_sparse(L.num_pieces, np2, p);

  Triplets ta, tb, tc;
  place(ta, S.Ma, 0, 0);
  place(ta, S.G, 0, nu);
  place(ta, S.G, nu, 0, -1.0, true);
  place(ta, S.Mbeta, nu, nu);
  place(tb, S.K, 0, nu);
  place(tb, S.D, np2, 0);
  place(tc, S.Ka, 0, 0);
  S.A = to_sparse(L.n_x(), L.n_x(), ta);
  S.B = to_sparse(L.n_y(), L.n_x(), tb);
  S.C = to_sparse(L.n_y(), L.n_y(), tc);
  S.F1.resize(L.n_x());
  S.F1 << f_u1, f_p2;
  S.F2.resize(L.n_y());
  S.F2 << f_eta, f_p1;
  return S;
}

SpMat full_matrix(const SaddleSystem& s) {
  const int nx = s.layout.n_x(), ny = s.layout.n_y(), nc = s.layout.num_pieces;
  Triplets t;
  place(t, s.A, 0, 0);
  place(t, s.B, 0, nx, -1.0, true);
  place(t, s.B, nx, 0);
  place(t, s.C, nx, nx);
  place(t, s.P, nx, nx + ny, 1.0, true);
  place(t, s.P, nx + ny, nx);
  return to_sparse(nx + ny + nc, nx + ny + nc, t);
}

Vector full_rhs(const SaddleSystem& s) {
  Vector b = Vector::Zero(s.layout.n_x() + s.layout.n_y() + s.layout.num_pieces);
  b.head(s.layout.n_x()) = s.F1;
  b.segment(s.layout.n_x(), s.layout.n_y()) = s.F2;
  return b;
}

Solution solve(const SaddleSystem& s, double max_residual) {
  SpMat M = full_matrix(s);
  M.makeCompressed();
  Vector b = full_rhs(s);
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  const char* hint = " (check that every color-2 piece touches Gamma where beta > 0)";
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, lu.lastErrorMessage() + hint);
  Vector z = lu.solve(b);
  for (int it = 0; it < 2 && z.allFinite(); ++it) z += lu.solve(b - M * z);
  if (!z.allFinite()) throw Error(ErrorCode::SingularSystem, std::string("non-finite solution") + hint);
  const double bn = b.norm();
  const double rn = (b - M * z).norm();
  Solution sol;
  sol.residual = bn > 0.0 ? rn / bn : rn;
  if (!(sol.residual <= max_residual))
    throw Error(ErrorCode::ResidualTooLarge, "relative residual " + std::to_string(sol.residual));
  const DofLayout& L = s.layout;
  int o = 0;
  sol.u1 = z.segment(o, L.n_u1()), o += L.n_u1();
  sol.p2 = z.segment(o, L.n_p2()), o += L.n_p2();
  sol.eta = z.segment(o, L.n_p2()), o += L.n_p2();
  sol.p1 = z.segment(o, L.n_p1()), o += L.n_p1();
  sol.multipliers = z.segment(o, L.num_pieces);
  return sol;
}

Vec2 eval_u1(const Solution& sol, const Mesh& m, const DofLayout& L, int c, Vec2 x) {
  Vec2 u{0.0, 0.0};
  for (int i = 0; i < 3; ++i) u = u + sol.u1[L.facet_u1[m.cell_facets[c][i]]] * flux_basis(m, c, i, x);
  return u;
}

Fields postprocess(const Solution& sol, const Mesh& m, const DofLayout& L) {
  Fields F;
  F.u1_cell.assign(m.cells.size(), {0.0, 0.0});
  F.u2_cell.assign(m.cells.size(), {0.0, 0.0});
  F.p1_cell.assign(m.cells.size(), 0.0);
  F.p2_node.assign(m.nodes.size(), 0.0);
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] == 1) {
      F.u1_cell[c] = eval_u1(sol, m, L, c, m.cell_centroid(c));
      F.p1_cell[c] = sol.p1[L.cell_p1[c]];
    } else {
      auto grad = hat_gradients(m, c);
      Vec2 u{0.0, 0.0};
      for (int i = 0; i < 3; ++i) u = u + sol.eta[L.node_p2[m.cells[c][i]]] * grad[i];
      F.u2_cell[c] = u;
    }
  }
  for (int i = 0; i < L.n_p2(); ++i) F.p2_node[L.p2_node[i]] = sol.p2[i];
  for (int f = 0; f < int(m.facets.size()); ++f) {
    const Facet& fc = m.facets[f];
    if (fc.cls != FacetClass::Gamma) continue;
    FacetTrace t;
    t.facet = f;
    t.midpoint = midpoint(m.nodes[fc.nodes[0]], m.nodes[fc.nodes[1]]);
    t.u1n = sol.u1[L.facet_u1[f]] / fc.length(m.nodes);
    t.u2n = dot(F.u2_cell[fc.cells[1]], fc.normal);
    t.p1 = F.p1_cell[fc.cells[0]];
    t.p2 = 0.5 * (F.p2_node[fc.nodes[0]] + F.p2_node[fc.nodes[1]]);
    F.gamma.push_back(t);
  }
  return F;
}

NormMatrices norm_matrices(const Mesh& m, const DofLayout& L) {
  const int nu = L.n_u1(), np2 = L.n_p2();
  Triplets x, y;
  for (int c = 0; c < m.num_cells(); ++c) {
    const double area = m.cell_area(c);
    if (m.cell_color[c] == 1) {
      std::array<int, 3> dof;
      for (int i = 0; i < 3; ++i) dof[i] = L.facet_u1[m.cell_facets[c][i]];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double v = facet_sign(m, c, i) * facet_sign(m, c, j) / area;
          for (const TriPoint& q : triangle_rule(2)) {
            Vec2 p = at(m, c, q);
            v += q.w * area * dot(flux_basis(m, c, i, p), flux_basis(m, c, j, p));
          }
          x.emplace_back(dof[i], dof[j], v);
        }
      y.emplace_back(np2 + L.cell_p1[c], np2 + L.cell_p1[c], area);
    } else {
      auto grad = hat_gradients(m, c);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          int a = L.node_p2[m.cells[c][i]], b = L.node_p2[m.cells[c][j]];
          double s = area * dot(grad[i], grad[j]);
          x.emplace_back(nu + a, nu + b, s + area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
          y.emplace_back(a, b, s);
        }
    }
  }
  return {to_sparse(L.n_x(), L.n_x(), x), to_sparse(L.n_y(), L.n_y(), y)};
}

}  // namespace graphdarcy
