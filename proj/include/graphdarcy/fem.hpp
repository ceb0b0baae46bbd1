/**
 * @file fem.hpp
 * @brief Quadrature rules and lowest-order basis functions on triangle meshes.
 */
#pragma once

#include "graphdarcy/expr.hpp"
#include "graphdarcy/mesh.hpp"

#include <array>
#include <vector>

namespace graphdarcy {

/// Barycentric coordinates and a weight relative to the cell area.
struct TriPoint {
  double l0, l1, l2, w;
};

/// Symmetric rules exact to the given degree: 2 (three points) or 4 (six points).
const std::vector<TriPoint>& triangle_rule(int degree);

/// Two-point Gauss rule on [0,1]: (parameter, weight).
const std::array<std::array<double, 2>, 2>& facet_gauss();

inline Vec2 at(const Mesh& m, int c, const TriPoint& q) {
  const auto& t = m.cells[c];
  return q.l0 * m.nodes[t[0]] + q.l1 * m.nodes[t[1]] + q.l2 * m.nodes[t[2]];
}

/// Gradients of the three nodal hat functions of cell c (constant on the cell).
std::array<Vec2, 3> hat_gradients(const Mesh& m, int c);

/// +1 if the stored facet normal points out of cell c, -1 otherwise.
int facet_sign(const Mesh& m, int c, int local);

/// Lowest-order H_div basis function of the facet opposite local vertex i, scaled to unit
/// flux along the stored facet normal: s (x - P_i) / (2|T|).
Vec2 flux_basis(const Mesh& m, int c, int local, Vec2 x);

/// Evaluates e at p; evaluation failures and non-finite values raise QuadratureDomainError.
double eval_checked(const Expr& e, Vec2 p, const char* what);

}  // namespace graphdarcy
