/**
 * @file darcy_mixed.hpp
 * @brief Coupled mixed Darcy problem on a two-colored mesh.
 *
 * Unknowns x = [u1, p2] (facet fluxes on color-1 cells, nodal pressure on color 2) and
 * y = [eta, p1] (nodal potential with u2 = grad eta, cellwise pressure on color 1).
 * The discrete equations are
 *
 *   A x - B^T y = F1,   B x + C y = F2,
 *
 * with A = [[Ma, G], [-G^T, Mbeta]], B = [[0, K], [D, 0]], C = [[Ka, 0], [0, 0]] and one
 * zero-mean row for eta per connected piece of the color-2 submesh.
 */
#pragma once

#include "graphdarcy/expr.hpp"
#include "graphdarcy/mesh.hpp"

#include <Eigen/Sparse>

#include <optional>
#include <vector>

namespace graphdarcy {

using SpMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

struct Coefficients {
  Expr a = Expr::constant(1.0);     // friction, everywhere
  Expr beta = Expr::constant(1.0);  // storage exchange on Gamma
  Expr gx, gy;                      // forcing vector
  Expr F;                           // source on color 1 (and color 2 unless F2 is set)
  std::optional<Expr> F2;           // source on color 2
  Expr f_flux;                      // u1.n - u2.n - beta p2 on Gamma
  Expr f_stress;                    // p2 - p1 on Gamma

  const Expr& source(int color) const { return color == 2 && F2 ? *F2 : F; }
};

struct DofLayout {
  std::vector<int> u1_facet;   // dof -> facet
  std::vector<int> facet_u1;   // facet -> dof, -1 if not a color-1 facet
  std::vector<int> p1_cell;    // dof -> cell
  std::vector<int> cell_p1;    // cell -> dof or -1
  std::vector<int> p2_node;    // dof -> node (eta shares this layout)
  std::vector<int> node_p2;    // node -> dof or -1
  std::vector<int> p2_piece;   // dof -> connected piece of the color-2 submesh
  int num_pieces = 0;          // zero-mean constraints on eta

  int n_u1() const { return int(u1_facet.size()); }
  int n_p1() const { return int(p1_cell.size()); }
  int n_p2() const { return int(p2_node.size()); }
  int n_x() const { return n_u1() + n_p2(); }
  int n_y() const { return n_p2() + n_p1(); }
};

/// Throws EmptyColorClass if either color has no cells.
DofLayout build_layout(const Mesh& mesh);

struct SaddleSystem {
  DofLayout layout;
  SpMat A, B, C;  // x-by-x, y-by-x, y-by-y
  SpMat P;        // num_pieces-by-n_p2: integrals of the hat functions per piece
  Vector F1, F2;
  // named sub-blocks
  SpMat Ma, G, Mbeta, K, D, Ka;
  double gamma_length = 0.0;
  double beta_mass = 0.0;  // integral of beta over Gamma
  double min_a = 0.0;      // over quadrature points
};

/// Throws NonPositiveA (a <= 1e-12 somewhere), AllZeroBeta, QuadratureDomainError.
SaddleSystem assemble(const Mesh& mesh, const Coefficients& coeffs);

/// The full square matrix [[A, -B^T, 0], [B, C, P^T], [0, P, 0]] and its right-hand side.
SpMat full_matrix(const SaddleSystem& sys);
Vector full_rhs(const SaddleSystem& sys);

struct Solution {
  Vector u1, p1, p2, eta;
  Vector multipliers;
  double residual = 0.0;  // relative
};

/// Sparse LU with residual check. Throws SingularSystem or ResidualTooLarge.
Solution solve(const SaddleSystem& sys, double max_residual = 1e-10);

struct FacetTrace {
  int facet = -1;
  Vec2 midpoint;
  double u1n = 0.0, u2n = 0.0, p1 = 0.0, p2 = 0.0;
};

struct Fields {
  std::vector<Vec2> u1_cell;  // value at the centroid, color-1 cells (zero elsewhere)
  std::vector<Vec2> u2_cell;  // grad eta, color-2 cells (zero elsewhere)
  std::vector<double> p1_cell;
  std::vector<double> p2_node;  // zero off the color-2 submesh
  std::vector<FacetTrace> gamma;
};

Fields postprocess(const Solution& sol, const Mesh& mesh, const DofLayout& layout);

/// u1 at x inside color-1 cell c.
Vec2 eval_u1(const Solution& sol, const Mesh& mesh, const DofLayout& layout, int c, Vec2 x);

/// Gram matrices of the norms on X (H_div x H^1) and Y (grad-L^2 x L^2).
struct NormMatrices {
  SpMat X, Y;
};
NormMatrices norm_matrices(const Mesh& mesh, const DofLayout& layout);

struct ProjectionResult {
  std::vector<double> xi;   // per node, zero off Omega2
  std::vector<double> eta;  // per node, zero off Omega2
};

/// Helmholtz-type projection of v onto gradients on the color-2 submesh: a Dirichlet
/// problem for xi followed by a zero-mean Neumann problem for eta. Pv = grad xi + grad eta.
/// Throws SingularNeumann, EmptyColorClass (no color-2 cells).
ProjectionResult project_onto_V(const Mesh& mesh, const Expr& vx, const Expr& vy);

struct ProjectionMetrics {
  double inner = 0.0;               // <Pv, v - Pv>
  double residual_l2 = 0.0;         // ||v - Pv||
  double max_cell_divergence = 0.0; // of v - Pv, cell average
  double max_boundary_flux = 0.0;   // mean normal component of v - Pv on boundary facets of Omega2
};
ProjectionMetrics projection_metrics(const Mesh& mesh, const Expr& vx, const Expr& vy, const ProjectionResult& r);

}  // namespace graphdarcy
