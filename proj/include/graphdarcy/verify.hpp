/**
 * @file verify.hpp
 * @brief Manufactured solutions, convergence studies and discrete stability checks.
 */
#pragma once

#include "graphdarcy/darcy_mixed.hpp"
#include "graphdarcy/map_builder.hpp"
#include "graphdarcy/mesh.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace graphdarcy {

/// Exact fields with hand-written first derivatives.
struct ExactFields {
  Expr p1, p1_x, p1_y;
  Expr p2, p2_x, p2_y;
  Expr eta, eta_x, eta_y;
};

struct ManufacturedCase {
  std::string name;
  DownscalingMap map;
  double h0 = 0.25;          // target size of the coarsest mesh
  double h_inf_sup = 0.5;    // coarsest mesh of the inf-sup sequence (dense solves)
  Coefficients coeffs;
  ExactFields exact;
  bool exactly_representable = false;  // errors must vanish instead of converging
};

/// "M0_constant" or "M1_trig" on the two-strip domain. Throws UnknownCase.
ManufacturedCase builtin_case(const std::string& name);

/// Largest gap between the written derivatives and central differences (step 1e-6)
/// over a sample grid of the domain.
double derivative_mismatch(const ManufacturedCase& mc);

Mesh case_mesh(const ManufacturedCase& mc, int level);

struct ErrorNorms {
  double u1 = 0.0, p1 = 0.0, p2 = 0.0, p2_h1 = 0.0, u2 = 0.0;
};

/// L2 errors (H1 seminorm for p2_h1) with the degree-4 rule.
ErrorNorms error_norms(const Mesh& mesh, const DofLayout& layout, const Solution& sol, const ManufacturedCase& mc);

struct InterfaceResiduals {
  double flux = 0.0;    // max |u1.n - u2.n - beta p2 - f_flux| at Gamma facet midpoints
  double stress = 0.0;  // max |p2 - p1 - f_stress|
};
InterfaceResiduals interface_residuals(const Solution& sol, const Coefficients& coeffs, const Mesh& mesh);

/// max over color-1 cells of |sum of outward facet fluxes - integral of F| (degree-2 rule).
double conservation_residual(const Solution& sol, const Coefficients& coeffs, const Mesh& mesh);

/// max over color-1 cells of |degree-2 minus degree-4 integral of F|.
double source_quadrature_error(const Coefficients& coeffs, const Mesh& mesh);

/// ||x||_X + ||y||_Y and the discrete dual norms ||F1||_X' + ||F2||_Y'.
struct StabilityRatio {
  double solution_norm = 0.0;
  double data_norm = 0.0;
  double ratio() const { return solution_norm / data_norm; }
};
StabilityRatio stability_ratio(const Mesh& mesh, const SaddleSystem& sys, const Solution& sol);

/// Smallest generalized singular value of B with respect to the X and Y Gram matrices.
/// Throws TooLarge above `max_dofs` total unknowns.
double inf_sup_estimate(const Mesh& mesh, int max_dofs = 3000);

struct CoercivityWitness {
  double min_rayleigh = 0.0;  // over the random kernel samples
  double bound = 0.0;         // min(inf a, beta mass / |Omega2|)
};
CoercivityWitness coercivity_witness(const Mesh& mesh, const Coefficients& coeffs, int samples = 20,
                                     std::uint64_t seed = 1);

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int cells = 0;
  int dofs = 0;
  ErrorNorms errors;
  InterfaceResiduals interface;
  double conservation = 0.0;
  double quadrature_error = 0.0;
  double residual = 0.0;
  StabilityRatio stability;
};

struct ConvergenceTable {
  std::string case_name;
  std::vector<LevelResult> rows;

  /// log2 of consecutive error ratios; rates(i) compares rows i-1 and i.
  ErrorNorms rates(std::size_t i) const;
};

/// Throws InvalidArgument for levels < 2.
ConvergenceTable run_convergence(const ManufacturedCase& mc, int levels);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool upper = true;  // value <= threshold if true, value >= threshold otherwise
  bool passed = false;
};

struct VerifyReport {
  std::string case_name;
  int levels = 0;
  std::uint64_t seed = 1;
  ConvergenceTable table;
  std::vector<double> inf_sup;  // per level while small enough
  CoercivityWitness coercivity;
  std::vector<Check> checks;
  bool passed() const;
};

/// Convergence study plus the stability, inf-sup and coercivity checks appropriate to the case.
/// Stability and rate checks apply to converging cases; exactly representable cases check
/// that every error vanishes. The inf-sup sequence has three levels from h_inf_sup.
VerifyReport verify_case(const ManufacturedCase& mc, int levels, std::uint64_t seed = 1);

}  // namespace graphdarcy
