#pragma once

// Meshes, OBJ export, report files and the ribaucour subcommands.

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ribaucour/congruence.hpp"
#include "ribaucour/ribaucour_core.hpp"

namespace ribaucour {

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitParse = 2,
  kExitDegenerate = 3,
  kExitIo = 4,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Grid mesh.  Masked nodes carry no vertex; a cell becomes two triangles
// only when all four corners survive.  Indices are zero-based.
struct SurfaceMesh {
  int nu = 0, nv = 0;
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> mask;  // per grid node, row-major; true = dropped
};

SurfaceMesh build_mesh(const std::vector<SurfaceSample>& samples, const Grid& grid);
SurfaceMesh build_mesh(const std::vector<PatchPoint>& pts, const Grid& grid);

// Empty string when the invariants hold.
std::string mesh_problem(const SurfaceMesh& mesh);

void export_obj(const SurfaceMesh& mesh, const std::filesystem::path& path, const std::string& title = "");

// Reads back an OBJ written by export_obj and checks that it is well formed.
struct ObjSummary {
  std::size_t vertices = 0, normals = 0, faces = 0;
  std::vector<Vec3> points;
  std::string problem;  // empty when valid
  bool valid() const { return problem.empty(); }
};

ObjSummary read_obj(const std::filesystem::path& path);

nlohmann::json tolerances_json(const Tolerances& tol);
void write_report(const VerificationReport& report, const std::filesystem::path& path);

// 3 when a sample count note is zero, otherwise 0 or 1 from the identities.
int exit_code(const VerificationReport& report);

struct PatchOptions {
  std::string f1, f2;
  Domain domain;
  int nu = 81, nv = 81;
  std::string out, report;
  std::string out_dual;  // dual only; defaults to <out stem>_dual.obj
  Tolerances tol;
  Execution exec = Execution::parallel;
  bool quiet = false;  // no identity summary on stdout
};

struct CongruenceOptions {
  std::string minimal = "catenoid";
  std::string mode = "analytic";
  double step = 0.01;
  Domain domain;
  std::string out, report;
  Tolerances tol;
  Execution exec = Execution::parallel;
  bool quiet = false;  // no identity summary on stdout
};

// Node count per axis for a requested step; the actual spacing never exceeds it.
int nodes_for_step(double length, double step);

int cmd_build(const PatchOptions& opt);
int cmd_dual(const PatchOptions& opt);
int cmd_congruence(const CongruenceOptions& opt);
// Mesh only: a Ribaucour patch from f1, f2 or, when minimal is set, a minimal surface.
int cmd_export(const PatchOptions& opt, const std::string& minimal = "");

// Parses argv and dispatches to one of the commands above.
int run_cli(int argc, const char* const* argv);

}  // namespace ribaucour
