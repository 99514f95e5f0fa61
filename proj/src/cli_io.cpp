#include "ribaucour/cli_io.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "ribaucour/duality.hpp"
#include "ribaucour/version.hpp"

namespace ribaucour {

namespace {

bool usable(const SurfaceSample& s) { return s.flags.immersed() && s.X.allFinite() && s.N.allFinite(); }

void append_vec(std::string& out, const char* tag, const Vec3& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %.9g %.9g %.9g\n", tag, p.x(), p.y(), p.z());
  out += buf;
}

void print_summary(const VerificationReport& rep) {
  for (const auto& r : rep.identities)
    std::printf("%-4s %-36s %.3e  tol %.1e  %zu/%zu\n", r.pass ? "ok" : "FAIL", r.name.c_str(), r.max_residual,
                r.tolerance, r.samples, r.samples + r.excluded);
  std::printf("%s\n", rep.pass() ? "all identities pass" : "some identities fail");
}

// Turns the exceptions of the pipeline into exit codes.
int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitParse;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  }
}

std::vector<SurfaceSample> surfaces(const std::vector<PatchPoint>& pts) {
  std::vector<SurfaceSample> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p.surface);
  return out;
}

nlohmann::json patch_inputs(const PatchOptions& opt, const Grid& grid) {
  return {{"f1", opt.f1},
          {"f2", opt.f2},
          {"domain", grid.domain.to_string()},
          {"grid", {{"nu", grid.nu}, {"nv", grid.nv}}},
          {"tolerances", tolerances_json(opt.tol)}};
}

std::string dual_path(const PatchOptions& opt) {
  if (!opt.out_dual.empty() || opt.out.empty()) return opt.out_dual;
  std::filesystem::path p(opt.out);
  return p.replace_filename(p.stem().string() + "_dual" + p.extension().string()).string();
}

void emit(const VerificationReport& rep, const std::string& report_path, bool quiet) {
  if (!quiet) print_summary(rep);
  if (!report_path.empty()) write_report(rep, report_path);
}

void emit_mesh(const std::vector<SurfaceSample>& samples, const Grid& grid, const std::string& path,
               const std::string& title) {
  if (!path.empty()) export_obj(build_mesh(samples, grid), path, title);
}

}  // namespace

SurfaceMesh build_mesh(const std::vector<SurfaceSample>& samples, const Grid& grid) {
  if (samples.size() != grid.size()) throw std::invalid_argument("sample count does not match the grid");
  SurfaceMesh m;
  m.nu = grid.nu;
  m.nv = grid.nv;
  m.mask.assign(grid.size(), true);
  std::vector<int> id(grid.size(), -1);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    if (!usable(samples[n])) continue;
    m.mask[n] = false;
    id[n] = static_cast<int>(m.vertices.size());
    m.vertices.push_back(samples[n].X);
    m.normals.push_back(samples[n].N);
  }
  for (int j = 0; j + 1 < grid.nv; ++j)
    for (int i = 0; i + 1 < grid.nu; ++i) {
      const int a = id[grid.index(i, j)], b = id[grid.index(i + 1, j)];
      const int c = id[grid.index(i + 1, j + 1)], d = id[grid.index(i, j + 1)];
      if (a < 0 || b < 0 || c < 0 || d < 0) continue;
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  return m;
}

SurfaceMesh build_mesh(const std::vector<PatchPoint>& pts, const Grid& grid) {
  return build_mesh(surfaces(pts), grid);
}

std::string mesh_problem(const SurfaceMesh& m) {
  if (m.normals.size() != m.vertices.size()) return "normal count differs from vertex count";
  if (m.mask.size() != static_cast<std::size_t>(m.nu) * static_cast<std::size_t>(m.nv))
    return "mask does not cover the grid";
  const auto masked = static_cast<std::size_t>(std::count(m.mask.begin(), m.mask.end(), true));
  if (m.vertices.size() != m.mask.size() - masked) return "vertex count differs from unmasked nodes";
  const int n = static_cast<int>(m.vertices.size());
  for (const auto& t : m.triangles) {
    for (int k : t)
      if (k < 0 || k >= n) return "face index out of range";
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) return "face repeats a vertex";
  }
  for (std::size_t k = 0; k < m.vertices.size(); ++k)
    if (!m.vertices[k].allFinite() || !m.normals[k].allFinite()) return "non-finite vertex data";
  return {};
}

void export_obj(const SurfaceMesh& mesh, const std::filesystem::path& path, const std::string& title) {
  const std::string problem = mesh_problem(mesh);
  if (!problem.empty()) throw std::invalid_argument("invalid mesh: " + problem);
  std::string out = std::string("# ribaucour ") + kVersion + "\n";
  if (!title.empty()) out += "# " + title + "\n";
  if (!mesh.vertices.empty()) {
    out += "# grid " + std::to_string(mesh.nu) + "x" + std::to_string(mesh.nv) + ", " +
           std::to_string(mesh.vertices.size()) + " vertices, " + std::to_string(mesh.triangles.size()) +
           " faces\n";
    for (const auto& p : mesh.vertices) append_vec(out, "v", p);
    for (const auto& p : mesh.normals) append_vec(out, "vn", p);
    for (const auto& t : mesh.triangles)
      out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  f << out;
  f.close();
  if (!f) throw IoError("cannot write " + path.string());
}

ObjSummary read_obj(const std::filesystem::path& path) {
  ObjSummary s;
  std::ifstream f(path);
  if (!f) {
    s.problem = "cannot open " + path.string();
    return s;
  }
  std::vector<std::array<long, 3>> faces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string tag;
    in >> tag;
    if (tag == "v" || tag == "vn") {
      Vec3 p;
      in >> p.x() >> p.y() >> p.z();
      if (!in || !p.allFinite()) {
        s.problem = "bad " + tag + " on line " + std::to_string(lineno);
        return s;
      }
      if (tag == "v") {
        s.points.push_back(p);
        ++s.vertices;
      } else {
        ++s.normals;
      }
    } else if (tag == "f") {
      std::array<long, 3> t{};
      in >> t[0] >> t[1] >> t[2];
      if (!in) {
        s.problem = "bad face on line " + std::to_string(lineno);
        return s;
      }
      faces.push_back(t);
    } else {
      s.problem = "unknown record '" + tag + "' on line " + std::to_string(lineno);
      return s;
    }
    std::string rest;
    if (in >> rest) {
      s.problem = "trailing data on line " + std::to_string(lineno);
      return s;
    }
  }
  s.faces = faces.size();
  if (s.normals != s.vertices) s.problem = "normal count differs from vertex count";
  for (const auto& t : faces)
    for (long k : t)
      if (k < 1 || k > static_cast<long>(s.vertices)) s.problem = "face index out of range";
  return s;
}

nlohmann::json tolerances_json(const Tolerances& t) {
  return {{"pde", t.pde},
          {"laguerre_cr", t.laguerre_cr},
          {"constant_curvature", t.constant_curvature},
          {"c2", t.c2},
          {"direction", t.direction},
          {"mu_antisymmetry", t.mu_antisymmetry},
          {"third_form", t.third_form},
          {"first_second_form", t.first_second_form},
          {"tau_shift", t.tau_shift},
          {"first_integral", t.first_integral},
          {"congruence", t.congruence},
          {"generated_forms", t.generated_forms},
          {"integrated_route", t.integrated_route},
          {"minimal_chart", t.minimal_chart},
          {"shared_normal", t.shared_normal},
          {"negative_control", t.negative_control},
          {"non_dual_control", t.non_dual_control}};
}

void write_report(const VerificationReport& report, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  f << to_json(report).dump(2) << "\n";
  f.close();
  if (!f) throw IoError("cannot write " + path.string());
}

int exit_code(const VerificationReport& report) {
  for (const char* key : {"regular_samples", "dual_regular_samples"})
    if (report.notes.contains(key) && report.notes[key].get<long>() == 0) return kExitDegenerate;
  return report.pass() ? kExitPass : kExitFail;
}

int nodes_for_step(double length, double step) {
  if (!(step > 0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  const double cells = std::ceil(length / step - 1e-9);
  if (cells > 1e5) throw std::invalid_argument("step too small for the domain");
  return std::max(2, static_cast<int>(cells) + 1);
}

int cmd_build(const PatchOptions& opt) {
  return guarded([&] {
    const RibaucourPatch patch = RibaucourPatch::from_strings(opt.f1, opt.f2, opt.domain);
    const Grid grid(opt.domain, opt.nu, opt.nv);
    VerificationReport rep = verify_patch(patch, grid, opt.tol, opt.exec);
    rep.command = "build";
    rep.inputs = patch_inputs(opt, grid);
    emit_mesh(surfaces(sample_patch(patch, grid, opt.exec)), grid, opt.out, "build " + opt.f1 + " " + opt.f2);
    emit(rep, opt.report, opt.quiet);
    return exit_code(rep);
  });
}

int cmd_dual(const PatchOptions& opt) {
  return guarded([&] {
    const RibaucourPatch patch = RibaucourPatch::from_strings(opt.f1, opt.f2, opt.domain);
    const Grid grid(opt.domain, opt.nu, opt.nv);
    const DualPair pair = make_dual(patch);
    VerificationReport rep = verify_dual(pair, grid, opt.tol, opt.exec);
    rep.command = "dual";
    rep.inputs = patch_inputs(opt, grid);
    const PairSamples s = sample_pair(pair, grid, opt.exec);
    emit_mesh(surfaces(s.patch), grid, opt.out, "dual patch " + opt.f1 + " " + opt.f2);
    emit_mesh(surfaces(s.dual), grid, dual_path(opt), "dual of " + opt.f1 + " " + opt.f2);
    emit(rep, opt.report, opt.quiet);
    return exit_code(rep);
  });
}

int cmd_congruence(const CongruenceOptions& opt) {
  return guarded([&] {
    const MinimalPatch patch{opt.minimal, minimal_kind_from_string(opt.minimal), opt.domain};
    if (opt.mode != "analytic" && opt.mode != "integrate")
      throw std::invalid_argument("mode must be analytic or integrate");
    const CongruenceMode mode = opt.mode == "analytic" ? CongruenceMode::analytic : CongruenceMode::integrate;
    const Grid grid(opt.domain, nodes_for_step(opt.domain.u1 - opt.domain.u0, opt.step),
                    nodes_for_step(opt.domain.v1 - opt.domain.v0, opt.step));
    CongruenceRun run = run_congruence(patch, mode, grid, opt.tol, opt.exec);
    VerificationReport& rep = run.report;
    rep.command = "congruence";
    rep.inputs = {{"minimal", opt.minimal},
                  {"mode", opt.mode},
                  {"step", opt.step},
                  {"spacing", {{"du", grid.du()}, {"dv", grid.dv()}}},
                  {"domain", grid.domain.to_string()},
                  {"grid", {{"nu", grid.nu}, {"nv", grid.nv}}},
                  {"tolerances", tolerances_json(opt.tol)}};
    emit_mesh(run.envelope, grid, opt.out, "congruence envelope " + opt.minimal + " " + opt.mode);
    emit(rep, opt.report, opt.quiet);
    return exit_code(rep);
  });
}

int cmd_export(const PatchOptions& opt, const std::string& minimal) {
  return guarded([&] {
    const Grid grid(opt.domain, opt.nu, opt.nv);
    if (opt.out.empty()) throw std::invalid_argument("export needs --out");
    std::vector<SurfaceSample> samples;
    std::string title;
    if (!minimal.empty()) {
      const MinimalPatch patch{minimal, minimal_kind_from_string(minimal), opt.domain};
      samples = map_grid<SurfaceSample>(grid, opt.exec, [&](int i, int j) {
        const MinimalPoint m = evaluate_minimal(patch, grid.u(i), grid.v(j));
        SurfaceSample s;
        s.X = m.X;
        s.N = m.frame.N;
        return s;
      });
      title = "minimal " + minimal;
    } else {
      const RibaucourPatch patch = RibaucourPatch::from_strings(opt.f1, opt.f2, opt.domain);
      samples = surfaces(sample_patch(patch, grid, opt.exec));
      title = "patch " + opt.f1 + " " + opt.f2;
    }
    const SurfaceMesh mesh = build_mesh(samples, grid);
    export_obj(mesh, opt.out, title);
    std::printf("%zu vertices, %zu faces -> %s\n", mesh.vertices.size(), mesh.triangles.size(), opt.out.c_str());
    return mesh.vertices.empty() ? int(kExitDegenerate) : int(kExitPass);
  });
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Ribaucour surfaces from pairs of holomorphic functions"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PatchOptions patch;
  CongruenceOptions cong;
  std::string domain = "-1:1:-1:1", minimal;

  auto patch_flags = [&](CLI::App* sub, bool need_functions) {
    auto* f1 = sub->add_option("--f1", patch.f1, "Gauss map f1(z)");
    auto* f2 = sub->add_option("--f2", patch.f2, "second function f2(z)");
    if (need_functions) {
      f1->required();
      f2->required();
    }
    sub->add_option("--domain", domain, "u0:u1:v0:v1")->capture_default_str();
    sub->add_option("--nu", patch.nu, "samples along u")->capture_default_str();
    sub->add_option("--nv", patch.nv, "samples along v")->capture_default_str();
    sub->add_option("--out", patch.out, "OBJ output");
  };
  auto tol_flags = [&](CLI::App* sub, std::string& report, Tolerances& tol) {
    sub->add_option("--report", report, "JSON report output");
    sub->add_option("--tol-pde", tol.pde, "support PDE and middle sphere")->capture_default_str();
    sub->add_option("--tol-c2", tol.c2, "curvature swap and H/K equality")->capture_default_str();
    sub->add_option("--tol-fi", tol.first_integral, "first integral and system")->capture_default_str();
  };

  auto* build = app.add_subcommand("build", "Ribaucour patch, mesh and residual report");
  patch_flags(build, true);
  tol_flags(build, patch.report, patch.tol);

  auto* dual = app.add_subcommand("dual", "patch and its dual with the C2 report");
  patch_flags(dual, true);
  tol_flags(dual, patch.report, patch.tol);
  dual->add_option("--out-dual", patch.out_dual, "OBJ output for the dual");

  auto* congruence = app.add_subcommand("congruence", "envelope of a sphere congruence over a minimal surface");
  congruence->add_option("--minimal", cong.minimal, "enneper or catenoid")
      ->check(CLI::IsMember({"enneper", "catenoid"}))
      ->capture_default_str();
  congruence->add_option("--mode", cong.mode, "analytic or integrate")
      ->check(CLI::IsMember({"analytic", "integrate"}))
      ->capture_default_str();
  congruence->add_option("--step", cong.step, "grid step")->capture_default_str();
  congruence->add_option("--domain", domain, "u0:u1:v0:v1")->capture_default_str();
  congruence->add_option("--out", cong.out, "OBJ output");
  tol_flags(congruence, cong.report, cong.tol);

  auto* exp = app.add_subcommand("export", "OBJ mesh of a patch or a minimal surface");
  patch_flags(exp, false);
  exp->add_option("--minimal", minimal, "enneper or catenoid instead of f1, f2")
      ->check(CLI::IsMember({"enneper", "catenoid"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : int(kExitParse);
  }

  try {
    patch.domain = cong.domain = Domain::parse(domain);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitParse;
  }

  if (*build) return cmd_build(patch);
  if (*dual) return cmd_dual(patch);
  if (*congruence) return cmd_congruence(cong);
  if (minimal.empty() && (patch.f1.empty() || patch.f2.empty())) {
    std::fprintf(stderr, "export needs --f1 and --f2, or --minimal\n");
    return kExitParse;
  }
  return cmd_export(patch, minimal);
}

}  // namespace ribaucour
