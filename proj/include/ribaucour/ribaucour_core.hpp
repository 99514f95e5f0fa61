#pragma once

// Ribaucour immersions X = grad rho + rho N built from a pair of holomorphic
// functions (f1, f2): N is the stereographic Gauss map of f1, and the support
// function is
//
//   rho = |f1'| (1 + |f2|^2) / (|f2'| (1 + |f1|^2)).
//
// Shape data comes from the support calculus.  With A = g^{-1} Hess rho +
// rho Id (g = III), dX = dN o A, so the shape operator is S = -A^{-1}:
// principal curvatures are -1/eig(A), principal directions the eigenvectors
// of A, and I = A^T g A, II = -(Hess rho + rho g).  The unit sphere
// (rho = 1) then has k1 = k2 = -1 and H/K = -1.

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ribaucour/grid.hpp"
#include "ribaucour/holoexpr.hpp"
#include "ribaucour/report.hpp"
#include "ribaucour/sphere_geom.hpp"
#include "ribaucour/tolerances.hpp"

namespace ribaucour {

using Vec2 = Eigen::Vector2d;

inline constexpr double kDegeneracyThreshold = 1e-10;  // |det A| relative to |A|^2
inline constexpr double kUmbilicThreshold = 1e-8;      // |k1 - k2| relative to |k1| + |k2|

struct SampleFlags {
  bool singular = false;    // a holomorphic jet could not be evaluated
  bool branch = false;      // f1' = 0 or f2' = 0
  bool degenerate = false;  // X fails to be an immersion
  bool umbilic = false;

  bool immersed() const { return !singular && !branch && !degenerate; }
  bool regular() const { return immersed() && !umbilic; }
};

struct SurfaceSample {
  Vec3 X = Vec3::Zero();
  Vec3 N = Vec3::Zero();
  Sym2 I, II, III;
  double k1 = 0, k2 = 0;           // k1 >= k2
  std::optional<Vec2> dir1, dir2;  // (u, v) components; unset at umbilics
  double rho = 0;
  double support_laplacian = 0;    // Laplacian of rho w.r.t. III
  double h_over_k = 0;             // from the principal curvatures
  SampleFlags flags;
};

struct SupportJet {
  RJet2 rho;
  SampleFlags flags;
};

SupportJet support(const HoloFunction& f1, const HoloFunction& f2, cplx z);
SupportJet support(const CJet& f1, const CJet& f2);

// Surface with support function rho over the Gauss-sphere frame.  Shared by
// Ribaucour patches and the envelopes of sphere congruences.
SurfaceSample immerse_support(const RJet2& rho, const SphereFrame& frame);

struct RibaucourPatch {
  HoloFunction f1;
  HoloFunction f2;
  Domain domain;

  static RibaucourPatch from_strings(const std::string& f1, const std::string& f2,
                                     Domain domain = {});
};

// Everything known at one chart point.
struct PatchPoint {
  double u = 0, v = 0;
  SphereFrame frame;
  RJet2 rho;
  SurfaceSample surface;
  cplx mu{};  // Laguerre-Hopf function

  const SampleFlags& flags() const { return surface.flags; }
};

PatchPoint evaluate_point(const RibaucourPatch& patch, cplx z);
SurfaceSample immerse(const RibaucourPatch& patch, cplx z);

std::vector<PatchPoint> sample_patch(const RibaucourPatch& patch, const Grid& grid,
                                     Execution exec = Execution::parallel);

// rho^2 + rho Lap rho - 1 - |grad rho|^2
double support_pde_residual(const RJet2& rho, const SphereFrame& frame);

// <X, X> + 2 (H/K) <X, N> + 1
double middle_sphere_residual(const SurfaceSample& s);

// -(Lap rho + 2 rho) / 2
double hk_from_support(const SurfaceSample& s);

// mu = (2 / rho) (rho_zz - 2 tau_z rho_z)
cplx laguerre_hopf(const RJet2& rho, const SphereFrame& frame);
cplx laguerre_hopf(const RibaucourPatch& patch, cplx z);

// Curvature of (1/rho^2) III minus one.
double constant_curvature_residual(const RJet2& rho, const SphereFrame& frame);

// |d mu / d zbar| / (1 + |mu|) by fourth-order central differences with the
// given step; nullopt when a stencil point is not immersed.
std::optional<double> cauchy_riemann_residual(const RibaucourPatch& patch, cplx z,
                                              double step = 1e-3);

// Grid-level checks.  Samples that are not immersed are excluded.
ResidualStats check_support_pde(const std::vector<PatchPoint>& pts);
ResidualStats check_middle_sphere(const std::vector<PatchPoint>& pts);
ResidualStats check_hk_routes(const std::vector<PatchPoint>& pts);
ResidualStats check_constant_curvature(const std::vector<PatchPoint>& pts);
ResidualStats check_laguerre_cr(const RibaucourPatch& patch, const Grid& grid,
                                Execution exec = Execution::parallel, double step = 1e-3);
// Same relation on the parallel surface X + offset N; a true Ribaucour
// surface violates it.
ResidualStats check_middle_sphere_offset(const std::vector<PatchPoint>& pts, double offset);

std::size_t count_regular(const std::vector<PatchPoint>& pts);

VerificationReport verify_patch(const RibaucourPatch& patch, const Grid& grid,
                                const Tolerances& tol = {}, Execution exec = Execution::parallel);

}  // namespace ribaucour
