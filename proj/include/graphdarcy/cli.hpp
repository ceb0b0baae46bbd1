/**
 * @file cli.hpp
 * @brief Command-line pipeline: graph -> map -> mesh -> solve -> verify -> export.
 *
 * Exit codes: 0 success, 1 usage or input error, 2 validation or verification failure.
 */
#pragma once

#include "graphdarcy/darcy_mixed.hpp"
#include "graphdarcy/error.hpp"
#include "graphdarcy/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace graphdarcy {

struct RunConfig {
  std::string base_dir = ".";       // directory of the config file; relative paths resolve here
  std::string graph_file;
  std::string domain = "graph";     // "graph" or "two_strip"
  std::string map_kind = "downscaling";
  std::optional<double> epsilon;    // empty: auto
  int n_arc = 16;
  double h_target = 0.25;
  int refine_levels = 0;
  struct {
    std::string a = "1", beta = "1", gx = "0", gy = "0", F = "0", F2, f_flux = "0", f_stress = "0";
  } coefficients;
  struct {
    bool svg = true, vtk = true, csv = true, report = true;
  } outputs;
  struct {
    double validation_relative = 1e-9;  // times the bounding-box diagonal
    double solve_residual = 1e-10;
  } tolerances;
  std::string case_name = "M1_trig";
  int levels = 3;
  std::string field_vx, field_vy;
};

/// Schema check; unknown keys and wrong types raise InvalidArgument.
RunConfig parse_config(const Json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

Coefficients make_coefficients(const RunConfig& cfg);

int exit_code_for(ErrorCode code);

int cmd_map(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_mesh(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed, std::ostream& log);
int cmd_project(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Parses argv (map | mesh | solve | verify | project, --config, --out, --seed) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace graphdarcy
