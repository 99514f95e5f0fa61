#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ribaucour/cli_io.hpp"

using namespace ribaucour;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ribaucour_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

nlohmann::json report_without_timestamp(const fs::path& p) {
  nlohmann::json j = nlohmann::json::parse(slurp(p));
  j.erase("timestamp");
  return j;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ribaucour");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

const fs::path kGolden = fs::path(RIBAUCOUR_TEST_DATA) / "golden";

}  // namespace

TEST_CASE("mesh drops masked nodes and the cells touching them") {
  const Grid g(Domain{-1, 1, -1, 1}, 3, 3);
  std::vector<SurfaceSample> s(g.size());
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) s[g.index(i, j)].X = Vec3(i, j, 0), s[g.index(i, j)].N = Vec3(0, 0, 1);
  SurfaceMesh full = build_mesh(s, g);
  CHECK(full.vertices.size() == 9);
  CHECK(full.triangles.size() == 8);
  CHECK(mesh_problem(full).empty());

  s[g.index(1, 1)].flags.branch = true;
  const SurfaceMesh holed = build_mesh(s, g);
  CHECK(holed.vertices.size() == 8);
  CHECK(holed.triangles.empty());
  CHECK(holed.mask[g.index(1, 1)]);
  CHECK(mesh_problem(holed).empty());

  s[g.index(1, 1)].flags.branch = false;
  s[g.index(2, 2)].X.x() = NAN;
  const SurfaceMesh corner = build_mesh(s, g);
  CHECK(corner.vertices.size() == 8);
  CHECK(corner.triangles.size() == 6);
}

TEST_CASE("mesh_problem catches broken meshes") {
  SurfaceMesh m;
  m.nu = m.nv = 2;
  m.mask.assign(4, false);
  m.vertices.assign(4, Vec3::Zero());
  m.normals.assign(4, Vec3::UnitZ());
  m.triangles.push_back({0, 1, 4});
  CHECK(mesh_problem(m) == "face index out of range");
  m.triangles = {{0, 1, 1}};
  CHECK(mesh_problem(m) == "face repeats a vertex");
  m.triangles.clear();
  m.normals.pop_back();
  CHECK_FALSE(mesh_problem(m).empty());
  CHECK_THROWS_AS(export_obj(m, scratch("bad.obj")), std::invalid_argument);
}

TEST_CASE("empty mesh gives a header-only file") {
  SurfaceMesh m;
  export_obj(m, scratch("empty.obj"));
  CHECK(slurp(scratch("empty.obj")) == "# ribaucour 0.1.0\n");
  const ObjSummary s = read_obj(scratch("empty.obj"));
  CHECK(s.valid());
  CHECK(s.vertices == 0);
}

TEST_CASE("unit-sphere patch lies on the unit sphere") {
  REQUIRE(cli({"export", "--f1", "z", "--f2", "z", "--nu", "21", "--nv", "21", "--out",
               scratch("sphere.obj").string()}) == kExitPass);
  const ObjSummary s = read_obj(scratch("sphere.obj"));
  REQUIRE(s.valid());
  CHECK(s.vertices == 441);
  CHECK(s.faces == 800);
  for (const auto& p : s.points) CHECK(std::abs(p.norm() - 1.0) <= 1e-9);
}

TEST_CASE("OBJ records use nine significant digits") {
  const Grid g(Domain{0, 1, 0, 1}, 2, 2);
  std::vector<SurfaceSample> s(4);
  for (auto& x : s) x.X = Vec3(1.0 / 3.0, -2e-12, 12345.678901234), x.N = Vec3(0, 0, -1);
  export_obj(build_mesh(s, g), scratch("digits.obj"), "digits");
  const std::string text = slurp(scratch("digits.obj"));
  CHECK(text.find("v 0.333333333 -2e-12 12345.6789\n") != std::string::npos);
  CHECK(text.find("vn 0 0 -1\n") != std::string::npos);
  CHECK(text.find("f 1 2 4\nf 1 4 3\n") != std::string::npos);
}

TEST_CASE("golden build output") {
  const fs::path obj = scratch("golden_build.obj"), rep = scratch("golden_build.json");
  REQUIRE(cli({"build", "--f1", "z", "--f2", "exp(z)", "--nu", "6", "--nv", "5", "--domain", "-0.5:0.5:-0.4:0.4",
               "--out", obj.string(), "--report", rep.string()}) == kExitPass);
  CHECK(slurp(obj) == slurp(kGolden / "build_z_expz.obj"));
  CHECK(report_without_timestamp(rep) == nlohmann::json::parse(slurp(kGolden / "build_z_expz.json")));
}

TEST_CASE("identical invocations give identical files") {
  for (const std::string mode : {"analytic", "integrate"}) {
    CAPTURE(mode);
    std::vector<std::string> args = {"congruence", "--minimal", "enneper", "--mode", mode, "--step", "0.1"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", scratch("a.obj").string(), "--report", scratch("a.json").string()});
    b.insert(b.end(), {"--out", scratch("b.obj").string(), "--report", scratch("b.json").string()});
    CHECK(cli(a) == cli(b));
    CHECK(slurp(scratch("a.obj")) == slurp(scratch("b.obj")));
    CHECK(report_without_timestamp(scratch("a.json")) == report_without_timestamp(scratch("b.json")));
  }
}

TEST_CASE("serial and parallel sampling give identical meshes") {
  PatchOptions opt;
  opt.f1 = "z^2";
  opt.f2 = "z + 2";
  opt.nu = opt.nv = 31;
  opt.out = scratch("par.obj").string();
  CHECK(cmd_build(opt) == kExitPass);
  opt.exec = Execution::serial;
  opt.out = scratch("ser.obj").string();
  CHECK(cmd_build(opt) == kExitPass);
  CHECK(slurp(scratch("par.obj")) == slurp(scratch("ser.obj")));
}

TEST_CASE("exit codes") {
  CHECK(cli({"build", "--f1", "z", "--f2", "exp(z)", "--nu", "21", "--nv", "21"}) == kExitPass);
  CHECK(cli({"dual", "--f1", "z", "--f2", "exp(z)", "--nu", "21", "--nv", "21"}) == kExitPass);
  // totally umbilic or branch-flagged everywhere
  CHECK(cli({"build", "--f1", "z", "--f2", "z", "--nu", "21", "--nv", "21"}) == kExitDegenerate);
  CHECK(cli({"build", "--f1", "z", "--f2", "3", "--nu", "21", "--nv", "21"}) == kExitDegenerate);
  CHECK(cli({"dual", "--f1", "z", "--f2", "2*z", "--nu", "21", "--nv", "21"}) == kExitDegenerate);
  // parse and argument errors
  CHECK(cli({"build", "--f1", "z +", "--f2", "3"}) == kExitParse);
  CHECK(cli({"build", "--f1", "foo(z)", "--f2", "z"}) == kExitParse);
  CHECK(cli({"build", "--f1", "z"}) == kExitParse);
  CHECK(cli({"build", "--f1", "z", "--f2", "exp(z)", "--nu", "1"}) == kExitParse);
  CHECK(cli({"build", "--f1", "z", "--f2", "exp(z)", "--domain", "0:1:1"}) == kExitParse);
  CHECK(cli({"congruence", "--minimal", "helicoid"}) == kExitParse);
  CHECK(cli({"congruence", "--step", "0"}) == kExitParse);
  CHECK(cli({"frobnicate"}) == kExitParse);
  CHECK(cli({"export", "--nu", "5"}) == kExitParse);
  // an unattainable tolerance fails the identities
  CHECK(cli({"build", "--f1", "z", "--f2", "exp(z)", "--nu", "21", "--nv", "21", "--tol-pde", "1e-30"}) == kExitFail);
  CHECK(cli({"congruence", "--step", "0.1", "--tol-fi", "1e-30"}) == kExitFail);
  // i/o
  CHECK(cli({"build", "--f1", "z", "--f2", "exp(z)", "--nu", "5", "--nv", "5", "--out", "/nonexistent/dir/x.obj"}) ==
        kExitIo);
  CHECK(cli({"build", "--f1", "z", "--f2", "exp(z)", "--nu", "5", "--nv", "5", "--report", "/nonexistent/r.json"}) ==
        kExitIo);
}

TEST_CASE("exit code is a function of the report") {
  VerificationReport rep;
  CHECK(exit_code(rep) == kExitFail);
  IdentityResult r;
  r.pass = true;
  rep.add(r);
  CHECK(exit_code(rep) == kExitPass);
  rep.notes["regular_samples"] = 0;
  CHECK(exit_code(rep) == kExitDegenerate);
  rep.notes["regular_samples"] = 10;
  rep.notes["dual_regular_samples"] = 0;
  CHECK(exit_code(rep) == kExitDegenerate);
}

TEST_CASE("report schema") {
  const fs::path rep = scratch("schema.json");
  REQUIRE(cli({"dual", "--f1", "z", "--f2", "exp(z)", "--nu", "11", "--nv", "11", "--report", rep.string(),
               "--tol-c2", "2e-8"}) == kExitPass);
  const nlohmann::json j = nlohmann::json::parse(slurp(rep));
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j["tool_version"] == "0.1.0");
  CHECK(j["command"] == "dual");
  CHECK(j["inputs"]["f2"] == "exp(z)");
  CHECK(j["inputs"]["grid"]["nu"] == 11);
  CHECK(j["inputs"]["tolerances"]["c2"] == 2e-8);
  CHECK(j.contains("timestamp"));
  for (const auto& e : j["identities"]) {
    CHECK(e.contains("max_residual"));
    CHECK(e.contains("samples"));
    CHECK(e.contains("excluded"));
    CHECK(e.contains("pass"));
  }
}

TEST_CASE("dual writes both meshes") {
  const fs::path out = scratch("pair.obj");
  fs::remove(scratch("pair_dual.obj"));
  REQUIRE(cli({"dual", "--f1", "z", "--f2", "exp(z)", "--nu", "9", "--nv", "9", "--out", out.string()}) == kExitPass);
  CHECK(read_obj(out).valid());
  CHECK(read_obj(scratch("pair_dual.obj")).valid());
  CHECK(slurp(out) != slurp(scratch("pair_dual.obj")));
}

TEST_CASE("congruence step sets the grid") {
  CHECK(nodes_for_step(2.0, 0.01) == 201);
  CHECK(nodes_for_step(2.0, 0.3) == 8);
  CHECK(nodes_for_step(0.1, 1.0) == 2);
  CHECK_THROWS_AS(nodes_for_step(2.0, -1.0), std::invalid_argument);

  const fs::path out = scratch("cat.obj"), rep = scratch("cat.json");
  REQUIRE(cli({"congruence", "--minimal", "catenoid", "--step", "0.05", "--out", out.string(), "--report",
               rep.string()}) == kExitPass);
  const ObjSummary s = read_obj(out);
  REQUIRE(s.valid());
  CHECK(s.vertices == 41u * 41u);
  const nlohmann::json j = nlohmann::json::parse(slurp(rep));
  CHECK(j["notes"]["omega_source"] == "literal");
  CHECK(j["inputs"]["grid"]["nu"] == 41);
}

TEST_CASE("integrated envelope drops the boundary layers") {
  const fs::path out = scratch("int.obj");
  REQUIRE(cli({"congruence", "--minimal", "catenoid", "--mode", "integrate", "--step", "0.05", "--out",
               out.string()}) == kExitPass);
  const ObjSummary s = read_obj(out);
  REQUIRE(s.valid());
  CHECK(s.vertices == 37u * 37u);
  CHECK(s.faces == 2u * 36u * 36u);
}
