#include "graphdarcy/cli.hpp"
#include "graphdarcy/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace graphdarcy;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string tmpl = (fs::temp_directory_path() / "graphdarcy_cli_XXXXXX").string();
    ASSERT_NE(mkdtemp(tmpl.data()), nullptr);
    dir = tmpl;
    write("p3.json", R"({"vertices":[[0,0],[1,0],[2,0.5]],"edges":[[0,1],[1,2]]})");
    write("k3.json", R"({"vertices":[[0,0],[1,0],[0.5,0.8]],"edges":[[0,1],[1,2],[2,0]]})");
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }

  int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"graphdarcy"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    out.str("");
    err.str("");
    return run_cli(int(argv.size()), argv.data(), out, err);
  }

  int run_config(const std::string& cmd, const std::string& config, const std::string& out_name) {
    return run({cmd, "--config", write(out_name + "_config.json", config), "--out", (dir / out_name).string()});
  }

  Json report(const std::string& out_name, const std::string& file) {
    return Json::parse(read_text((dir / out_name / file).string()));
  }

  fs::path dir;
  std::ostringstream out, err;
};

}  // namespace

TEST_F(Cli, MapOfPathPasses) {
  EXPECT_EQ(run_config("map", R"({"graph_file":"p3.json"})", "p3"), 0) << err.str();
  for (const char* f : {"map.json", "map.svg", "map_report.json"}) EXPECT_TRUE(fs::exists(dir / "p3" / f)) << f;
  EXPECT_TRUE(report("p3", "map_report.json")["passed"].get<bool>());
}

TEST_F(Cli, TubularMapOfTriangleFailsConditionFour) {
  EXPECT_EQ(run_config("map", R"({"graph_file":"k3.json","map_kind":"tubular"})", "k3"), 2);
  Json r = report("k3", "map_report.json");
  EXPECT_FALSE(r["passed"].get<bool>());
  EXPECT_EQ(r["failed"], Json::parse("[3]"));
}

TEST_F(Cli, MissingGraphFile) {
  EXPECT_EQ(run_config("map", R"({"graph_file":"nope.json"})", "missing"), 1);
  EXPECT_NE(err.str().find("Io"), std::string::npos);
}

TEST_F(Cli, MissingConfigFile) {
  EXPECT_EQ(run({"map", "--config", (dir / "absent.json").string()}), 1);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate", "--config", "x.json"}), 1);
  EXPECT_EQ(run({"map"}), 1);
  EXPECT_EQ(run_config("map", R"({"graph_file":"p3.json","colour":1})", "unknown_key"), 1);
  EXPECT_EQ(run_config("map", R"({"graph_file":"p3.json","h_target":"big"})", "bad_type"), 1);
  EXPECT_EQ(run_config("map", R"({"graph_file":"p3.json","map_kind":"round"})", "bad_kind"), 1);
  EXPECT_EQ(run_config("solve", R"({"domain":"two_strip","coefficients":{"a":"1 +"}})", "bad_expr"), 1);
}

TEST_F(Cli, MeshWritesQualityReport) {
  EXPECT_EQ(run_config("mesh", R"({"domain":"two_strip","h_target":0.25})", "mesh"), 0) << err.str();
  for (const char* f : {"mesh.vtk", "facets.vtk", "mesh_report.json"}) EXPECT_TRUE(fs::exists(dir / "mesh" / f)) << f;
  Json r = report("mesh", "mesh_report.json");
  EXPECT_GT(r["num_cells"].get<int>(), 0);
  EXPECT_EQ(read_text((dir / "mesh" / "mesh.vtk").string()).rfind("# vtk DataFile Version", 0), 0u);
}

TEST_F(Cli, SolveConstantCase) {
  EXPECT_EQ(run_config("solve",
                       R"({"domain":"two_strip","h_target":0.25,
                           "coefficients":{"a":"1","beta":"1","f_flux":"-1","f_stress":"1"}})",
                       "m0"),
            0)
      << err.str();
  Json r = report("m0", "solve_report.json");
  EXPECT_NEAR(r["p2_min"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(r["p2_max"].get<double>(), 1.0, 1e-9);
  EXPECT_LE(r["residual"].get<double>(), 1e-10);
  std::string csv = read_text((dir / "m0" / "gamma.csv").string());
  EXPECT_EQ(csv.rfind("facet,x,y,u1n,u2n,p1,p2,r_flux,r_stress\n", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "m0" / "solution.vtk"));
}

TEST_F(Cli, SolveNonBipartite) {
  EXPECT_EQ(run_config("solve", R"({"graph_file":"k3.json"})", "k3solve"), 2);
  EXPECT_NE(err.str().find("NotBipartite"), std::string::npos) << err.str();
}

TEST_F(Cli, SolveZeroBeta) {
  EXPECT_EQ(run_config("solve", R"({"domain":"two_strip","coefficients":{"beta":"0"}})", "b0"), 2);
  EXPECT_NE(err.str().find("AllZeroBeta"), std::string::npos) << err.str();
}

TEST_F(Cli, SolveOnGraphMap) {
  EXPECT_EQ(run_config("solve", R"({"graph_file":"p3.json","coefficients":{"F":"1","f_flux":"x"}})", "p3solve"), 0)
      << err.str();
  EXPECT_LE(report("p3solve", "solve_report.json")["residual"].get<double>(), 1e-10);
}

TEST_F(Cli, VerifyConstantCase) {
  EXPECT_EQ(run_config("verify", R"({"case":"M0_constant","levels":2})", "v0"), 0) << out.str();
  Json r = report("v0", "verify_report.json");
  EXPECT_TRUE(r["passed"].get<bool>());
}

TEST_F(Cli, VerifyTrigCaseIsDeterministic) {
  std::string cfg = write("v1.json", R"({"case":"M1_trig","levels":3})");
  ASSERT_EQ(run({"verify", "--config", cfg, "--out", (dir / "a").string(), "--seed", "3"}), 0) << out.str();
  ASSERT_EQ(run({"verify", "--config", cfg, "--out", (dir / "b").string(), "--seed", "3"}), 0);
  for (const char* f : {"convergence.csv", "verify_report.json"})
    EXPECT_EQ(read_text((dir / "a" / f).string()), read_text((dir / "b" / f).string())) << f;
  std::string csv = read_text((dir / "a" / "convergence.csv").string());
  EXPECT_EQ(csv.rfind("level,h,e_u1_L2,e_p1_L2,e_p2_L2,e_p2_H1s,e_u2_L2,rate_u1_L2", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST_F(Cli, VerifyNeedsTwoLevels) {
  EXPECT_EQ(run_config("verify", R"({"case":"M1_trig","levels":1})", "vbad"), 1);
}

TEST_F(Cli, VerifyUnknownCase) {
  EXPECT_EQ(run_config("verify", R"({"case":"M9","levels":2})", "vunk"), 1);
}

TEST_F(Cli, ProjectRotation) {
  EXPECT_EQ(run_config("project", R"({"domain":"two_strip","field":{"vx":"-y","vy":"x"}})", "proj"), 0) << err.str();
  Json r = report("proj", "projection_report.json");
  EXPECT_LE(std::fabs(r["inner"].get<double>()), 1e-8);
  EXPECT_TRUE(fs::exists(dir / "proj" / "projection.vtk"));
}

TEST_F(Cli, OutputFlagsSuppressFiles) {
  EXPECT_EQ(run_config("map", R"({"graph_file":"p3.json","outputs":{"svg":false}})", "nosvg"), 0);
  EXPECT_FALSE(fs::exists(dir / "nosvg" / "map.svg"));
  EXPECT_TRUE(fs::exists(dir / "nosvg" / "map.json"));
}

TEST(CliConfig, Defaults) {
  RunConfig c = parse_config(Json::parse(R"({"graph_file":"g.json"})"), "/base");
  EXPECT_EQ(c.graph_file, "g.json");
  EXPECT_EQ(c.base_dir, "/base");
  EXPECT_FALSE(c.epsilon.has_value());
  EXPECT_EQ(c.tolerances.validation_relative, 1e-9);
  EXPECT_EQ(c.tolerances.solve_residual, 1e-10);
  RunConfig e = parse_config(Json::parse(R"({"epsilon":0.05,"coefficients":{"a":"2"}})"));
  EXPECT_EQ(*e.epsilon, 0.05);
  EXPECT_EQ(make_coefficients(e).a(0.3, 0.4), 2.0);
}

TEST(CliConfig, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::InvalidArgument), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::Io), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::SyntaxError), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::UnknownCase), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::ValidationFailed), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::NotBipartite), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::AllZeroBeta), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::ResidualTooLarge), 2);
}
