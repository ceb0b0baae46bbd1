#include "graphdarcy/verify.hpp"

#include "graphdarcy/error.hpp"
#include "graphdarcy/fem.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>

namespace graphdarcy {

namespace {

Vec2 grad_of(const Expr& ex, const Expr& ey, Vec2 p) { return {ex(p.x, p.y), ey(p.x, p.y)}; }

Eigen::MatrixXd dense(const SpMat& m) { return Eigen::MatrixXd(m); }

double sqnorm(const Vector& v, const SpMat& G) { return std::sqrt(std::max(0.0, v.dot(G * v))); }

// First eta dof of every piece; pinning them removes the constants from grad-norms.
std::vector<int> pinned_eta(const DofLayout& L) {
  std::vector<int> pin(L.num_pieces, -1);
  for (int i = 0; i < L.n_p2(); ++i)
    if (pin[L.p2_piece[i]] < 0) pin[L.p2_piece[i]] = i;
  return pin;
}

double area_of_color(const Mesh& m, int color) {
  double a = 0.0;
  for (int c = 0; c < m.num_cells(); ++c)
    if (m.cell_color[c] == color) a += m.cell_area(c);
  return a;
}

}  // namespace

ManufacturedCase builtin_case(const std::string& name) {
  ManufacturedCase mc;
  mc.name = name;
  mc.map = two_strip_map();
  mc.h0 = 0.25;
  Coefficients& k = mc.coeffs;
  ExactFields& e = mc.exact;
  if (name == "M0_constant") {
    k.f_flux = parse("-1");
    k.f_stress = parse("1");
    e.p2 = parse("1");
    mc.exactly_representable = true;
  } else if (name == "M1_trig") {
    e.p1 = parse("sin(pi*x)*sin(pi*y)");
    e.p1_x = parse("pi*cos(pi*x)*sin(pi*y)");
    e.p1_y = parse("pi*sin(pi*x)*cos(pi*y)");
    e.p2 = parse("cos(pi*(x-1))*cos(pi*y)");
    e.p2_x = parse("-pi*sin(pi*(x-1))*cos(pi*y)");
    e.p2_y = parse("-pi*cos(pi*(x-1))*sin(pi*y)");
    // a = 1 and g = 0, so u2 = grad eta = -grad p2
    e.eta = parse("-cos(pi*(x-1))*cos(pi*y)");
    e.eta_x = parse("pi*sin(pi*(x-1))*cos(pi*y)");
    e.eta_y = parse("pi*cos(pi*(x-1))*sin(pi*y)");
    k.F = parse("2*pi^2*sin(pi*x)*sin(pi*y)");
    k.F2 = parse("2*pi^2*cos(pi*(x-1))*cos(pi*y)");
    k.f_stress = parse("cos(pi*(x-1))*cos(pi*y) - sin(pi*x)*sin(pi*y)");
    // normal (1,0) on x = 1: -dp1/dx - deta/dx - p2
    k.f_flux = parse("-pi*cos(pi*x)*sin(pi*y) - pi*sin(pi*(x-1))*cos(pi*y) - cos(pi*(x-1))*cos(pi*y)");
  } else {
    throw Error(ErrorCode::UnknownCase, "'" + name + "' (known: M0_constant, M1_trig)");
  }
  return mc;
}

double derivative_mismatch(const ManufacturedCase& mc) {
  const double h = 1e-6;
  const ExactFields& e = mc.exact;
  const Expr* triples[3][3] = {{&e.p1, &e.p1_x, &e.p1_y}, {&e.p2, &e.p2_x, &e.p2_y}, {&e.eta, &e.eta_x, &e.eta_y}};
  BBox box;
  for (const Polygon& l : mc.map.domain)
    for (Vec2 p : l) box.add(p);
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) {
      double x = box.xmin + (box.xmax - box.xmin) * (0.05 + 0.9 * i / 8.0);
      double y = box.ymin + (box.ymax - box.ymin) * (0.05 + 0.9 * j / 8.0);
      for (auto& t : triples) {
        double dx = ((*t[0])(x + h, y) - (*t[0])(x - h, y)) / (2 * h);
        double dy = ((*t[0])(x, y + h) - (*t[0])(x, y - h)) / (2 * h);
        worst = std::max({worst, std::fabs(dx - (*t[1])(x, y)), std::fabs(dy - (*t[2])(x, y))});
      }
    }
  return worst;
}

Mesh case_mesh(const ManufacturedCase& mc, int level) {
  Mesh m = triangulate(mc.map, mc.h0);
  for (int i = 0; i < level; ++i) m = refine(m);
  return m;
}

ErrorNorms error_norms(const Mesh& m, const DofLayout& L, const Solution& sol, const ManufacturedCase& mc) {
  const ExactFields& e = mc.exact;
  const Coefficients& k = mc.coeffs;
  ErrorNorms s;
  for (int c = 0; c < m.num_cells(); ++c) {
    const double area = m.cell_area(c);
    if (m.cell_color[c] == 1) {
      const double ph = sol.p1[L.cell_p1[c]];
      for (const TriPoint& q : triangle_rule(4)) {
        Vec2 x = at(m, c, q);
        Vec2 gp = grad_of(e.p1_x, e.p1_y, x), gv = grad_of(k.gx, k.gy, x);
        Vec2 u = (-1.0 / k.a(x.x, x.y)) * (gp + gv);
        Vec2 d = eval_u1(sol, m, L, c, x) - u;
        s.u1 += q.w * area * dot(d, d);
        double dp = ph - e.p1(x.x, x.y);
        s.p1 += q.w * area * dp * dp;
      }
    } else {
      auto g = hat_gradients(m, c);
      double v[3], w[3];
      Vec2 gp{0.0, 0.0}, ge{0.0, 0.0};
      for (int i = 0; i < 3; ++i) {
        int d = L.node_p2[m.cells[c][i]];
        v[i] = sol.p2[d];
        w[i] = sol.eta[d];
        gp = gp + v[i] * g[i];
        ge = ge + w[i] * g[i];
      }
      for (const TriPoint& q : triangle_rule(4)) {
        Vec2 x = at(m, c, q);
        double dp = q.l0 * v[0] + q.l1 * v[1] + q.l2 * v[2] - e.p2(x.x, x.y);
        Vec2 dg = gp - grad_of(e.p2_x, e.p2_y, x);
        Vec2 du = ge - grad_of(e.eta_x, e.eta_y, x);
        s.p2 += q.w * area * dp * dp;
        s.p2_h1 += q.w * area * dot(dg, dg);
        s.u2 += q.w * area * dot(du, du);
      }
    }
  }
  s.u1 = std::sqrt(s.u1);
  s.p1 = std::sqrt(s.p1);
  s.p2 = std::sqrt(s.p2);
  s.p2_h1 = std::sqrt(s.p2_h1);
  s.u2 = std::sqrt(s.u2);
  return s;
}

InterfaceResiduals interface_residuals(const Solution& sol, const Coefficients& k, const Mesh& m) {
  DofLayout L = build_layout(m);
  Fields f = postprocess(sol, m, L);
  InterfaceResiduals r;
  for (const FacetTrace& t : f.gamma) {
    Vec2 x = t.midpoint;
    double beta = eval_checked(k.beta, x, "beta");
    r.flux = std::max(r.flux, std::fabs(t.u1n - t.u2n - beta * t.p2 - eval_checked(k.f_flux, x, "f_flux")));
    r.stress = std::max(r.stress, std::fabs(t.p2 - t.p1 - eval_checked(k.f_stress, x, "f_stress")));
  }
  return r;
}

double conservation_residual(const Solution& sol, const Coefficients& k, const Mesh& m) {
  DofLayout L = build_layout(m);
  double worst = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] != 1) continue;
    double flux = 0.0, src = 0.0;
    for (int i = 0; i < 3; ++i) flux += facet_sign(m, c, i) * sol.u1[L.facet_u1[m.cell_facets[c][i]]];
    for (const TriPoint& q : triangle_rule(2)) src += q.w * m.cell_area(c) * eval_checked(k.source(1), at(m, c, q), "F");
    worst = std::max(worst, std::fabs(flux - src));
  }
  return worst;
}

double source_quadrature_error(const Coefficients& k, const Mesh& m) {
  double worst = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    if (m.cell_color[c] != 1) continue;
    double lo = 0.0, hi = 0.0;
    for (const TriPoint& q : triangle_rule(2)) lo += q.w * eval_checked(k.source(1), at(m, c, q), "F");
    for (const TriPoint& q : triangle_rule(4)) hi += q.w * eval_checked(k.source(1), at(m, c, q), "F");
    worst = std::max(worst, m.cell_area(c) * std::fabs(lo - hi));
  }
  return worst;
}

StabilityRatio stability_ratio(const Mesh& m, const SaddleSystem& sys, const Solution& sol) {
  const DofLayout& L = sys.layout;
  NormMatrices N = norm_matrices(m, L);
  Vector x(L.n_x()), y(L.n_y());
  x << sol.u1, sol.p2;
  y << sol.eta, sol.p1;
  StabilityRatio r;
  r.solution_norm = sqnorm(x, N.X) + sqnorm(y, N.Y);

  Eigen::SimplicialLDLT<SpMat> lx(N.X);
  if (lx.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "X Gram matrix");
  double d1 = std::sqrt(std::max(0.0, sys.F1.dot(lx.solve(sys.F1))));
  // grad-norm on eta: pin one node per piece, the data vanish on constants
  SpMat Y = N.Y;
  Vector f2 = sys.F2;
  std::vector<char> pinned(L.n_y(), 0);
  for (int p : pinned_eta(L)) pinned[p] = 1;
  for (int k = 0; k < Y.outerSize(); ++k)
    for (SpMat::InnerIterator it(Y, k); it; ++it)
      if (pinned[it.row()] || pinned[it.col()]) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
  for (int i = 0; i < L.n_y(); ++i)
    if (pinned[i]) f2[i] = 0.0;
  Eigen::SimplicialLDLT<SpMat> ly(Y);
  if (ly.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "Y Gram matrix");
  double d2 = std::sqrt(std::max(0.0, f2.dot(ly.solve(f2))));
  r.data_norm = d1 + d2;
  return r;
}

double inf_sup_estimate(const Mesh& m, int max_dofs) {
  DofLayout L = build_layout(m);
  const int total = L.n_x() + L.n_y();
  if (total > max_dofs)
    throw Error(ErrorCode::TooLarge, std::to_string(total) + " unknowns exceed " + std::to_string(max_dofs));
  SaddleSystem sys = assemble(m, Coefficients{});
  NormMatrices N = norm_matrices(m, L);
  std::vector<char> pinned(L.n_y(), 0);
  for (int p : pinned_eta(L)) pinned[p] = 1;
  std::vector<int> keep;
  for (int i = 0; i < L.n_y(); ++i)
    if (!pinned[i]) keep.push_back(i);
  const int n = int(keep.size());
  Eigen::MatrixXd B = dense(sys.B), Y = dense(N.Y);
  Eigen::MatrixXd Bk(n, L.n_x()), Yk(n, n);
  for (int i = 0; i < n; ++i) {
    Bk.row(i) = B.row(keep[i]);
    for (int j = 0; j < n; ++j) Yk(i, j) = Y(keep[i], keep[j]);
  }
  Eigen::LLT<Eigen::MatrixXd> lx(dense(N.X));
  Eigen::MatrixXd S = Bk * lx.solve(Bk.transpose());
  S = 0.5 * (S + S.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(S, Yk, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "generalized eigenproblem failed");
  return std::sqrt(std::max(0.0, ges.eigenvalues().minCoeff()));
}

CoercivityWitness coercivity_witness(const Mesh& m, const Coefficients& k, int samples, std::uint64_t seed) {
  SaddleSystem sys = assemble(m, k);
  const DofLayout& L = sys.layout;
  NormMatrices N = norm_matrices(m, L);
  Eigen::MatrixXd D = dense(sys.D);
  Eigen::MatrixXd ker = Eigen::FullPivLU<Eigen::MatrixXd>(D).kernel();
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(ker).householderQ() *
                      Eigen::MatrixXd::Identity(ker.rows(), ker.cols());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CoercivityWitness w;
  w.min_rayleigh = INFINITY;
  for (int s = 0; s < samples; ++s) {
    Vector c(Q.cols());
    for (int i = 0; i < c.size(); ++i) c[i] = normal(rng);
    std::vector<double> level(L.num_pieces);
    for (double& v : level) v = normal(rng);
    Vector x(L.n_x());
    x.head(L.n_u1()) = Q * c;
    for (int i = 0; i < L.n_p2(); ++i) x[L.n_u1() + i] = level[L.p2_piece[i]];
    w.min_rayleigh = std::min(w.min_rayleigh, x.dot(sys.A * x) / x.dot(N.X * x));
  }
  w.bound = std::min(sys.min_a, sys.beta_mass / area_of_color(m, 2));
  return w;
}

ErrorNorms ConvergenceTable::rates(std::size_t i) const {
  const ErrorNorms& a = rows[i - 1].errors;
  const ErrorNorms& b = rows[i].errors;
  auto r = [&](double ea, double eb) { return std::log2(ea / eb) / std::log2(rows[i - 1].h / rows[i].h); };
  return {r(a.u1, b.u1), r(a.p1, b.p1), r(a.p2, b.p2), r(a.p2_h1, b.p2_h1), r(a.u2, b.u2)};
}

ConvergenceTable run_convergence(const ManufacturedCase& mc, int levels) {
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "a convergence study needs at least 2 levels");
  ConvergenceTable t;
  t.case_name = mc.name;
  Mesh m = case_mesh(mc, 0);
  for (int l = 0; l < levels; ++l) {
    if (l > 0) m = refine(m);
    SaddleSystem sys = assemble(m, mc.coeffs);
    Solution sol = solve(sys);
    LevelResult r;
    r.level = l;
    r.h = m.h();
    r.cells = m.num_cells();
    r.dofs = sys.layout.n_x() + sys.layout.n_y();
    r.errors = error_norms(m, sys.layout, sol, mc);
    r.interface = interface_residuals(sol, mc.coeffs, m);
    r.conservation = conservation_residual(sol, mc.coeffs, m);
    r.quadrature_error = source_quadrature_error(mc.coeffs, m);
    r.residual = sol.residual;
    r.stability = stability_ratio(m, sys, sol);
    t.rows.push_back(r);
  }
  return t;
}

bool VerifyReport::passed() const {
  for (const Check& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

VerifyReport verify_case(const ManufacturedCase& mc, int levels, std::uint64_t seed) {
  VerifyReport rep;
  rep.case_name = mc.name;
  rep.levels = levels;
  rep.seed = seed;
  rep.table = run_convergence(mc, levels);
  auto add = [&](std::string name, double value, double threshold, bool upper) {
    Check c{std::move(name), value, threshold, upper, upper ? value <= threshold : value >= threshold};
    rep.checks.push_back(c);
  };
  const auto& rows = rep.table.rows;
  add("derivative_check", derivative_mismatch(mc), 1e-5, true);
  double res = 0.0, smin = INFINITY, smax = 0.0;
  for (const LevelResult& r : rows) {
    res = std::max(res, r.residual);
    smin = std::min(smin, r.stability.ratio());
    smax = std::max(smax, r.stability.ratio());
    add("conservation_L" + std::to_string(r.level), r.conservation, std::max(1e-10, 10.0 * r.quadrature_error), true);
  }
  add("solve_residual", res, 1e-10, true);
  if (mc.exactly_representable) {
    double e = 0.0, f = 0.0, s = 0.0;
    for (const LevelResult& r : rows) {
      e = std::max({e, r.errors.u1, r.errors.p1, r.errors.p2, r.errors.p2_h1, r.errors.u2});
      f = std::max(f, r.interface.flux);
      s = std::max(s, r.interface.stress);
    }
    add("max_error", e, 1e-9, true);
    add("interface_flux", f, 1e-9, true);
    add("interface_stress", s, 1e-9, true);
  } else {
    ErrorNorms r = rep.table.rates(rows.size() - 1);
    add("stability_variation", (smax - smin) / smin, 0.1, true);
    add("rate_u1_L2", r.u1, 0.9, false);
    add("rate_p1_L2", r.p1, 0.9, false);
    add("rate_p2_L2", r.p2, 1.8, false);
    add("rate_p2_H1s", r.p2_h1, 0.9, false);
    add("rate_u2_L2", r.u2, 0.9, false);
    const LevelResult &a = rows[rows.size() - 2], &b = rows.back();
    double lh = std::log2(a.h / b.h);
    add("rate_interface_flux", std::log2(a.interface.flux / b.interface.flux) / lh, 0.9, false);
    add("rate_interface_stress", std::log2(a.interface.stress / b.interface.stress) / lh, 0.9, false);
  }
  Mesh m = triangulate(mc.map, mc.h_inf_sup);
  for (int l = 0; l < 3; ++l) {
    if (l > 0) m = refine(m);
    try {
      rep.inf_sup.push_back(inf_sup_estimate(m));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooLarge) throw;
      break;
    }
  }
  if (!rep.inf_sup.empty()) add("inf_sup_L0", rep.inf_sup[0], 1e-6, false);
  for (std::size_t i = 1; i < rep.inf_sup.size(); ++i)
    add("inf_sup_ratio_L" + std::to_string(i), rep.inf_sup[i] / rep.inf_sup[i - 1], 0.8, false);
  rep.coercivity = coercivity_witness(case_mesh(mc, 0), mc.coeffs, 20, seed);
  add("coercivity_min", rep.coercivity.min_rayleigh, 1e-8, false);
  add("coercivity_bound", rep.coercivity.min_rayleigh, rep.coercivity.bound / 10.0, false);
  return rep;
}

}  // namespace graphdarcy
