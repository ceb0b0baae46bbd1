#include "graphdarcy/fem.hpp"

#include "graphdarcy/error.hpp"

#include <cmath>

namespace graphdarcy {

const std::vector<TriPoint>& triangle_rule(int degree) {
  static const std::vector<TriPoint> two = {
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
      {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
  };
  // Dunavant, degree 4
  static const std::vector<TriPoint> four = [] {
    const double a = 0.445948490915965, wa = 0.223381589678011;
    const double b = 0.091576213509771, wb = 0.109951743655322;
    return std::vector<TriPoint>{
        {1 - 2 * a, a, a, wa}, {a, 1 - 2 * a, a, wa}, {a, a, 1 - 2 * a, wa},
        {1 - 2 * b, b, b, wb}, {b, 1 - 2 * b, b, wb}, {b, b, 1 - 2 * b, wb},
    };
  }();
  if (degree <= 2) return two;
  if (degree <= 4) return four;
  throw Error(ErrorCode::InvalidArgument, "no triangle rule of degree " + std::to_string(degree));
}

const std::array<std::array<double, 2>, 2>& facet_gauss() {
  static const double d = 0.5 / std::sqrt(3.0);
  static const std::array<std::array<double, 2>, 2> r{{{0.5 - d, 0.5}, {0.5 + d, 0.5}}};
  return r;
}

std::array<Vec2, 3> hat_gradients(const Mesh& m, int c) {
  const auto& t = m.cells[c];
  double two_area = 2.0 * m.cell_area(c);
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    Vec2 e = m.nodes[t[(i + 2) % 3]] - m.nodes[t[(i + 1) % 3]];
    g[i] = (1.0 / two_area) * Vec2{-e.y, e.x};
  }
  return g;
}

int facet_sign(const Mesh& m, int c, int local) {
  return m.facets[m.cell_facets[c][local]].cells[0] == c ? 1 : -1;
}

Vec2 flux_basis(const Mesh& m, int c, int local, Vec2 x) {
  double s = facet_sign(m, c, local) / (2.0 * m.cell_area(c));
  return s * (x - m.nodes[m.cells[c][local]]);
}

double eval_checked(const Expr& e, Vec2 p, const char* what) {
  double v;
  try {
    v = e.eval(p.x, p.y);
  } catch (const Error& err) {
    throw Error(ErrorCode::QuadratureDomainError, std::string(what) + " at (" + std::to_string(p.x) + ", " +
                                                      std::to_string(p.y) + "): " + err.what());
  }
  if (!std::isfinite(v))
    throw Error(ErrorCode::QuadratureDomainError, std::string(what) + " is not finite at (" + std::to_string(p.x) +
                                                      ", " + std::to_string(p.y) + ")");
  return v;
}

}  // namespace graphdarcy
