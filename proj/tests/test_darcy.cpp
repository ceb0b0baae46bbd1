#include "graphdarcy/darcy_mixed.hpp"
#include "graphdarcy/error.hpp"
#include "graphdarcy/map_builder.hpp"
#include "graphdarcy/mesh.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <set>

using namespace graphdarcy;

namespace {

template <class F>
ErrorCode code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// Unit square cut along the diagonal: color 1 below, color 2 above.
Mesh two_triangles() {
  return make_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}, {0, 1}, {1, 2}, {{0, 1}});
}

Mesh strip(double h = 0.25) { return triangulate(two_strip_map(), h); }

Coefficients coeffs(const char* a, const char* beta, const char* F = "0", const char* f_flux = "0",
                    const char* f_stress = "0") {
  Coefficients k;
  k.a = parse(a);
  k.beta = parse(beta);
  k.F = parse(F);
  k.f_flux = parse(f_flux);
  k.f_stress = parse(f_stress);
  return k;
}

int count_class(const Mesh& m, FacetClass c) {
  int n = 0;
  for (const Facet& f : m.facets) n += f.cls == c;
  return n;
}

}  // namespace

TEST(Layout, TwoTriangles) {
  Mesh m = two_triangles();
  DofLayout L = build_layout(m);
  EXPECT_EQ(L.n_u1(), 3);
  EXPECT_EQ(L.n_p1(), 1);
  EXPECT_EQ(L.n_p2(), 3);
  EXPECT_EQ(L.num_pieces, 1);
  EXPECT_EQ(L.p2_node, (std::vector<int>{0, 2, 3}));
  EXPECT_TRUE(std::is_sorted(L.u1_facet.begin(), L.u1_facet.end()));
}

TEST(Layout, RefinedTwoTriangles) {
  // one red refinement of a triangle: 4 cells, 3 + 3 nodes, 3*2 + 3 edges
  DofLayout L = build_layout(refine(two_triangles()));
  EXPECT_EQ(L.n_u1(), 9);
  EXPECT_EQ(L.n_p1(), 4);
  EXPECT_EQ(L.n_p2(), 6);
  EXPECT_EQ(L.num_pieces, 1);
}

TEST(Layout, CountsMatchEntitiesOnStrip) {
  Mesh m = strip();
  DofLayout L = build_layout(m);
  std::set<std::pair<int, int>> edges1;
  std::set<int> nodes2;
  int cells1 = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    if (m.cell_color[c] == 1) {
      ++cells1;
      for (int i = 0; i < 3; ++i) edges1.insert({std::min(t[i], t[(i + 1) % 3]), std::max(t[i], t[(i + 1) % 3])});
    } else {
      nodes2.insert(t.begin(), t.end());
    }
  }
  EXPECT_EQ(L.n_u1(), int(edges1.size()));
  EXPECT_EQ(L.n_p1(), cells1);
  EXPECT_EQ(L.n_p2(), int(nodes2.size()));
  for (int i = 0; i < L.n_u1(); ++i) EXPECT_EQ(L.facet_u1[L.u1_facet[i]], i);
}

TEST(Layout, SingleColorThrows) {
  Mesh m = make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {0}, {1});
  EXPECT_EQ(code_of([&] { build_layout(m); }), ErrorCode::EmptyColorClass);
  Mesh n = make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {0}, {2});
  EXPECT_EQ(code_of([&] { build_layout(n); }), ErrorCode::EmptyColorClass);
}

TEST(Assemble, ZeroDataGivesZeroSolution) {
  Mesh m = strip();
  SaddleSystem s = assemble(m, coeffs("1", "1"));
  EXPECT_EQ(s.F1.norm(), 0.0);
  EXPECT_EQ(s.F2.norm(), 0.0);
  Solution sol = solve(s);
  EXPECT_EQ(sol.residual, 0.0);
  EXPECT_EQ(sol.u1.norm() + sol.p1.norm() + sol.p2.norm() + sol.eta.norm(), 0.0);
  Fields f = postprocess(sol, m, s.layout);
  for (const FacetTrace& t : f.gamma) EXPECT_EQ(std::fabs(t.u1n) + std::fabs(t.u2n) + std::fabs(t.p1) + std::fabs(t.p2), 0.0);
}

TEST(Assemble, ConstantSolution) {
  // a = 1, beta = 1, f_flux = -1, f_stress = 1: u = 0, p1 = 0, p2 = 1
  for (double h : {0.5, 0.25}) {
    Mesh m = strip(h);
    SaddleSystem s = assemble(m, coeffs("1", "1", "0", "-1", "1"));
    Solution sol = solve(s);
    EXPECT_LE(sol.residual, 1e-10);
    for (int i = 0; i < sol.p2.size(); ++i) EXPECT_NEAR(sol.p2[i], 1.0, 1e-9);
    EXPECT_LE(sol.u1.lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_LE(sol.p1.lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_LE(sol.eta.lpNorm<Eigen::Infinity>(), 1e-9);
    Fields f = postprocess(sol, m, s.layout);
    EXPECT_EQ(int(f.gamma.size()), count_class(m, FacetClass::Gamma));
    for (const FacetTrace& t : f.gamma) {
      EXPECT_LE(std::fabs(t.u1n), 1e-9);
      EXPECT_LE(std::fabs(t.u2n), 1e-9);
    }
  }
}

TEST(Assemble, GammaCouplingBlocksAreSkewPaired) {
  Mesh m = strip();
  Coefficients k = coeffs("2 + x*y", "1 + y", "x", "sin(y)", "cos(x*y)");
  k.gx = parse("y");
  k.gy = parse("x^2");
  SaddleSystem s = assemble(m, k);
  const int nu = s.layout.n_u1(), np2 = s.layout.n_p2();
  Eigen::MatrixXd A(s.A);
  Eigen::MatrixXd upper = A.block(0, nu, nu, np2), lower = A.block(nu, 0, np2, nu);
  EXPECT_TRUE(upper.isApprox(Eigen::MatrixXd(s.G), 0.0) || (upper - Eigen::MatrixXd(s.G)).norm() == 0.0);
  EXPECT_EQ((upper + lower.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(upper.cwiseAbs().maxCoeff(), 0.0);

  Eigen::MatrixXd Ma(s.Ma);
  EXPECT_EQ((Ma - Ma.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(Ma).info(), Eigen::Success);

  Eigen::MatrixXd C(s.C);
  EXPECT_LE((C - C.transpose()).cwiseAbs().maxCoeff(), 1e-14 * C.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * es.eigenvalues().maxCoeff());
}

TEST(Assemble, DivergenceBlockIsSignedIncidence) {
  Mesh m = strip(0.5);
  SaddleSystem s = assemble(m, coeffs("1", "1"));
  Eigen::MatrixXd D(s.D);
  for (int r = 0; r < D.rows(); ++r) {
    EXPECT_EQ(D.row(r).cwiseAbs().sum(), 3.0);
    int c = s.layout.p1_cell[r];
    for (int i = 0; i < 3; ++i) {
      int f = m.cell_facets[c][i];
      EXPECT_EQ(D(r, s.layout.facet_u1[f]), m.facets[f].cells[0] == c ? 1.0 : -1.0);
    }
  }
}

TEST(Assemble, LocalConservationIsExact) {
  // quadratic source: the three-point rule and the edge-midpoint rule both integrate it exactly
  Mesh m = strip(0.25);
  Coefficients k = coeffs("1 + x^2", "2", "1 + x*y + y^2", "x", "y");
  k.gx = parse("cos(y)");
  k.gy = parse("x");
  SaddleSystem s = assemble(m, k);
  Solution sol = solve(s);
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] != 1) continue;
    double flux = 0.0;
    for (int i = 0; i < 3; ++i) {
      int f = m.cell_facets[c][i];
      flux += (m.facets[f].cells[0] == c ? 1.0 : -1.0) * sol.u1[s.layout.facet_u1[f]];
    }
    double integral = 0.0;
    for (int i = 0; i < 3; ++i) {
      Vec2 p = midpoint(m.nodes[m.cells[c][i]], m.nodes[m.cells[c][(i + 1) % 3]]);
      integral += m.cell_area(c) / 3.0 * (1 + p.x * p.y + p.y * p.y);
    }
    EXPECT_NEAR(flux, integral, 1e-10);
  }
}

TEST(Assemble, CoefficientErrors) {
  Mesh m = strip(0.5);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("0", "1")); }), ErrorCode::NonPositiveA);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("x - 1", "1")); }), ErrorCode::NonPositiveA);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("1", "0")); }), ErrorCode::AllZeroBeta);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("1", "-1")); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("1/(x - x)", "1")); }), ErrorCode::QuadratureDomainError);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("1", "1", "sqrt(-1 - x)")); }), ErrorCode::QuadratureDomainError);
  EXPECT_EQ(code_of([&] { assemble(m, coeffs("1", "1", "0", "exp(1000*x)")); }), ErrorCode::QuadratureDomainError);
}

TEST(Solve, DetachedColorTwoPieceIsSingular) {
  // the second color-2 square touches no Gamma facet, so its p2 level is free
  Mesh m = make_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0}, {2, 1}, {5, 0}, {6, 0}, {6, 1}, {5, 1}},
                     {{0, 1, 2}, {0, 2, 3}, {1, 4, 5}, {1, 5, 2}, {6, 7, 8}, {6, 8, 9}}, {0, 0, 1, 1, 2, 2},
                     {1, 1, 2, 2, 2, 2}, {{0, 1}});
  SaddleSystem s = assemble(m, coeffs("1", "1", "0", "1"));
  EXPECT_EQ(s.layout.num_pieces, 2);
  EXPECT_EQ(code_of([&] { solve(s); }), ErrorCode::SingularSystem);
}

TEST(Solve, MeanConstraintPerPiece) {
  Mesh m = make_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0}, {2, 1}, {-1, 0}, {-1, 1}},
                     {{0, 1, 2}, {0, 2, 3}, {1, 4, 5}, {1, 5, 2}, {6, 0, 3}, {6, 3, 7}}, {0, 0, 1, 1, 2, 2},
                     {1, 1, 2, 2, 2, 2}, {{0, 1}, {0, 2}});
  Coefficients k = coeffs("1", "1", "x", "1 + y", "x");
  k.F2 = parse("y");
  SaddleSystem s = assemble(m, k);
  ASSERT_EQ(s.layout.num_pieces, 2);
  Solution sol = solve(s);
  Eigen::VectorXd means = s.P * sol.eta;
  EXPECT_LE(means.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Solve, ResidualThreshold) {
  Mesh m = strip(0.5);
  SaddleSystem s = assemble(m, coeffs("1", "1", "1", "x", "y"));
  EXPECT_LE(solve(s).residual, 1e-10);
  EXPECT_EQ(code_of([&] { solve(s, 0.0); }), ErrorCode::ResidualTooLarge);
}

TEST(Norms, GramMatricesArePositiveDefinite) {
  Mesh m = strip(0.5);
  DofLayout L = build_layout(m);
  NormMatrices N = norm_matrices(m, L);
  EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(N.X)).info(), Eigen::Success);
  // Y is the gradient norm on eta: constants are its only kernel
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(N.Y)};
  int zero = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) zero += std::fabs(es.eigenvalues()[i]) < 1e-12;
  EXPECT_EQ(zero, L.num_pieces);
}

namespace {

// Fan over a regular polygon inscribed in the unit circle, refined; all cells color 2.
// The polygon gains sides with each level so the boundary approaches the circle at rate h.
Mesh disk(int levels) {
  std::vector<Vec2> nodes{{0, 0}};
  std::vector<std::array<int, 3>> cells;
  const int n = 8 << levels;
  for (int i = 0; i < n; ++i) {
    double t = 2 * std::numbers::pi * i / n;
    nodes.push_back({std::cos(t), std::sin(t)});
    cells.push_back({0, 1 + i, 1 + (i + 1) % n});
  }
  Mesh m = make_mesh(nodes, cells, std::vector<int>(n, 0), std::vector<int>(n, 2));
  for (int l = 0; l < levels; ++l) m = refine(m);
  return m;
}

Mesh rectangle(int levels) {
  Mesh m = make_mesh({{0, 0}, {2, 0}, {2, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}, {0, 0}, {2, 2});
  for (int l = 0; l < levels; ++l) m = refine(m);
  return m;
}

}  // namespace

TEST(Projection, ConstantGradientIsReproduced) {
  Mesh m = rectangle(3);
  Expr vx = parse("1"), vy = parse("0");
  ProjectionResult r = project_onto_V(m, vx, vy);
  ProjectionMetrics pm = projection_metrics(m, vx, vy, r);
  EXPECT_LE(pm.residual_l2, 1e-8);
  EXPECT_LE(std::fabs(pm.inner), 1e-8);
}

TEST(Projection, GradientFieldConverges) {
  Expr vx = parse("x"), vy = parse("y");
  std::vector<double> res;
  std::vector<double> h;
  for (int l = 1; l <= 4; ++l) {
    Mesh m = rectangle(l);
    ProjectionResult r = project_onto_V(m, vx, vy);
    ProjectionMetrics pm = projection_metrics(m, vx, vy, r);
    EXPECT_LE(std::fabs(pm.inner), 1e-8);
    res.push_back(pm.residual_l2);
    h.push_back(m.h());
  }
  for (std::size_t i = 1; i < res.size(); ++i) EXPECT_GE(std::log2(res[i - 1] / res[i]) / std::log2(h[i - 1] / h[i]), 0.9);
}

TEST(Projection, RotationIsOrthogonalToGradients) {
  Expr vx = parse("-y"), vy = parse("x");
  double prev_flux = INFINITY;
  for (int l = 1; l <= 3; ++l) {
    Mesh m = disk(l);
    ProjectionResult r = project_onto_V(m, vx, vy);
    ProjectionMetrics pm = projection_metrics(m, vx, vy, r);
    EXPECT_LE(std::fabs(pm.inner), 1e-8);
    EXPECT_LE(pm.max_cell_divergence, 1e-6);
    EXPECT_LE(pm.max_boundary_flux, m.h());
    EXPECT_LT(pm.max_boundary_flux, prev_flux);
    prev_flux = pm.max_boundary_flux;
  }
}

TEST(Projection, NeedsColorTwoCells) {
  Mesh m = make_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {0}, {1});
  EXPECT_EQ(code_of([&] { project_onto_V(m, parse("1"), parse("0")); }), ErrorCode::EmptyColorClass);
}
