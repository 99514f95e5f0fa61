#pragma once

// Ribaucour sphere congruences with a minimal envelope.
//
// X(u, v) is a conformal curvature-line chart of a minimal surface,
// ds^2 = phi^2 (du^2 + dv^2), principal curvatures k1 along u and k2 = -k1
// along v.  The unknowns (Omega, Omega1, Omega2, W) solve
//
//   Omega1_v = Omega2 phi_u / phi     Omega2_u = Omega1 phi_v / phi
//   Omega_u  = phi Omega1             Omega_v  = phi Omega2
//   W_u      = Omega1 k1 phi          W_v      = Omega2 k2 phi
//
// with first integral Omega1^2 + Omega2^2 + W^2 - 2c Omega W + c2 W + c3 Omega
// + c1 = 0.  For (c1, c2, c3) = (1, 0, 0) the surface Y = grad W + W N with
// support W over the minimal Gauss map is Ribaucour.
//
// Normal of the minimal patch: N = -(X_u x X_v) / |X_u x X_v|.

#include <optional>
#include <string>
#include <vector>

#include "ribaucour/ribaucour_core.hpp"

namespace ribaucour {

// The plane has a constant Gauss map, so it carries no envelope; it is only
// useful for exercising the integrator on flat data.
enum class MinimalKind { enneper, catenoid, plane };

std::string to_string(MinimalKind kind);
MinimalKind minimal_kind_from_string(const std::string& name);  // throws std::invalid_argument

struct MinimalPatch {
  std::string name;
  MinimalKind kind;
  Domain domain;
};

MinimalPatch enneper_patch();
MinimalPatch catenoid_patch();
MinimalPatch plane_patch();

// Data of the minimal surface at one chart point.
struct MinimalPoint {
  double u = 0, v = 0;
  Vec3 X = Vec3::Zero();
  Vec3 X_u = Vec3::Zero(), X_v = Vec3::Zero();
  RJet2 phi;              // |X_u| with partials
  double k1 = 0, k2 = 0;  // normal curvatures along u and v
  RJet2 k1_jet, k2_jet;
  Sym2 I, II, III;
  SphereFrame frame;      // Gauss-sphere frame, III = e^{2 tau} |dz|^2
  double conformal_residual = 0;  // max of |<X_u,X_v>|, ||X_u|^2 - |X_v|^2| over phi^2
  double diagonal_residual = 0;   // |II_uv| / phi^2
  double minimality_residual = 0; // |k1 + k2|
};

MinimalPoint evaluate_minimal(const MinimalPatch& patch, double u, double v);

// phi, its first partials and the curvatures; the cheap evaluation used by
// the integrator.
struct MinimalCoefficients {
  double phi = 0, phi_u = 0, phi_v = 0, k1 = 0, k2 = 0;
};

MinimalCoefficients minimal_coefficients(const MinimalPatch& patch, double u, double v);

struct CongruenceState {
  double Omega = 0, Omega1 = 0, Omega2 = 0, W = 0;
};

struct IntegralConstants {
  double c = 1, c1 = 1, c2 = 0, c3 = 0;
};

double first_integral(const CongruenceState& s, const IntegralConstants& k);

// Fields of a solution at one chart point, with second-order jets.
struct CongruencePoint {
  MinimalPoint minimal;
  RJet2 W, Omega;
  CongruenceState state;
  bool valid = true;  // false where the jets are unavailable (boundary layers)
};

// Residuals of the six system equations, scaled by max(1, |terms|).
struct SystemResiduals {
  double rib[6] = {0, 0, 0, 0, 0, 0};
  double max() const;
};

SystemResiduals system_residuals(const CongruencePoint& p);

enum class OmegaSource { literal, quadrature };

// The closed-form examples: W from the text, Omega either as printed or,
// when the printed Omega fails the system, recovered by quadrature of
// Omega_u = W_u / k1, Omega_v = W_v / k2 with c and the additive constant
// fitted to the first integral.
class AnalyticExample {
 public:
  AnalyticExample(const MinimalPatch& patch, const Grid& grid, const Tolerances& tol = {});

  const MinimalPatch& patch() const { return patch_; }
  const IntegralConstants& constants() const { return consts_; }
  OmegaSource source() const { return source_; }

  // Diagnostics of the printed Omega.
  double literal_c() const { return literal_c_; }
  double literal_system_residual() const { return literal_system_; }
  double literal_drift() const { return literal_drift_; }
  double omega_offset() const { return offset_; }

  CongruencePoint at(double u, double v) const;
  CongruencePoint literal_at(double u, double v) const;

  std::vector<CongruencePoint> sample(const Grid& grid, Execution exec = Execution::parallel) const;

 private:
  double quadrature_omega(double u, double v) const;  // without the offset

  MinimalPatch patch_;
  IntegralConstants consts_;
  OmegaSource source_ = OmegaSource::literal;
  double literal_c_ = 0, literal_system_ = 0, literal_drift_ = 0;
  double offset_ = 0;
  double u_ref_ = 0, v_ref_ = 0;
};

// First-integral drift over the grid relative to the value at the first
// valid sample, scaled by max(1, |2 c Omega W|).
ResidualStats check_first_integral(const std::vector<CongruencePoint>& pts, const IntegralConstants& k,
                                   double reference = 0.0);
ResidualStats check_system(const std::vector<CongruencePoint>& pts);
ResidualStats check_minimal_chart(const MinimalPatch& patch, const Grid& grid, Execution exec = Execution::parallel);
ResidualStats check_minimality(const MinimalPatch& patch, const Grid& grid, Execution exec = Execution::parallel);

struct Integration {
  Grid grid;
  int i0 = 0, j0 = 0;                  // node of the initial state
  std::vector<CongruenceState> rows;   // along the initial row, then columns
  std::vector<CongruenceState> cols;   // along the initial column, then rows
};

// Fourth-order Runge-Kutta along grid lines from the initial node with the
// grid spacing as step.
Integration integrate_system(const MinimalPatch& patch, const CongruenceState& init, int i0, int j0,
                             const IntegralConstants& consts, const Grid& grid,
                             Execution exec = Execution::parallel);

ResidualStats check_path_independence(const Integration& integ);
ResidualStats check_integration_drift(const Integration& integ, const IntegralConstants& k);
ResidualStats compare_states(const std::vector<CongruenceState>& a, const std::vector<CongruencePoint>& b,
                             const Grid& grid);

// Fields from the integrated states.  First partials come from the system;
// second partials are fourth-order central differences of the first, so the
// two outer layers of nodes are marked invalid.
std::vector<CongruencePoint> integrated_points(const MinimalPatch& patch, const Integration& integ,
                                               Execution exec = Execution::parallel);

// Y = grad W + W N over the Gauss map of the minimal patch.
SurfaceSample envelope(const CongruencePoint& p);

struct EnvelopeStats {
  ResidualStats middle_sphere;   // <Y,Y> + 2 (H/K) <Y,N> + 1
  ResidualStats h_over_k;        // c Omega against -H/K
  ResidualStats support_relation;  // |grad W|^2 + W^2 + 2 (H/K) W + 1
  ResidualStats curvature_lines;   // off-diagonal II of Y
};

EnvelopeStats check_envelope(const std::vector<CongruencePoint>& pts, const IntegralConstants& k);

struct HessianStats {
  ResidualStats omega_hessian;  // Hess_I Omega = (cW - c3/2) I + (c Omega - W - c2/2) II
  ResidualStats w_hessian;      // Hess_III W = c W II + (c Omega - W) III
  ResidualStats gradients;      // grad_I Omega = -grad_III W
};

HessianStats check_hessian_identities(const std::vector<CongruencePoint>& pts, const IntegralConstants& k);

struct GeneratedFormStats {
  ResidualStats first, second, third;
};

GeneratedFormStats generated_forms_check(const std::vector<CongruencePoint>& pts, const IntegralConstants& k);

// Omega and its partials scaled by (1 + eps).
std::vector<CongruencePoint> perturb_omega(std::vector<CongruencePoint> pts, double eps);

enum class CongruenceMode { analytic, integrate };

struct CongruenceRun {
  VerificationReport report;
  std::vector<SurfaceSample> envelope;  // row-major over grid
  Grid grid;
};

CongruenceRun run_congruence(const MinimalPatch& patch, CongruenceMode mode, const Grid& grid,
                             const Tolerances& tol = {}, Execution exec = Execution::parallel);

}  // namespace ribaucour
