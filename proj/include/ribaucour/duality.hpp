#pragma once

// Dual Ribaucour surfaces.  Exchanging f1 and f2 gives the Gauss map of f2
// and support 1/rho; the two patches share the (u, v) chart, and along it
// the principal curvatures trade places (k1 = k2*, k2 = k1*) while the
// curvature lines are preserved.

#include <vector>

#include "ribaucour/ribaucour_core.hpp"

namespace ribaucour {

struct DualPair {
  RibaucourPatch patch;
  RibaucourPatch dual;
};

DualPair make_dual(const RibaucourPatch& patch);

// Pair a patch with an arbitrary partner.  Only useful as a negative control.
DualPair make_unrelated_pair(const RibaucourPatch& patch, const RibaucourPatch& partner);

struct PairSamples {
  std::vector<PatchPoint> patch;
  std::vector<PatchPoint> dual;
};

PairSamples sample_pair(const DualPair& pair, const Grid& grid, Execution exec = Execution::parallel);

// II(e, e) / I(e, e) for a chart direction e.
double normal_curvature(const SurfaceSample& s, const Vec2& e);

// Principal curvatures are labelled by curvature line, not by size: k_i* is
// the curvature of the dual along the i-th curvature line of the patch.  With
// both surfaces sorted k1 >= k2 the swap shows up as crossed directions.
struct C2Stats {
  ResidualStats curvature_swap;  // relative, worst of the two swaps
  ResidualStats direction_swap;  // radians between dir1 and dir2*
};

struct FormStats {
  ResidualStats first, second, third;
};

struct HkStats {
  ResidualStats hk_equality;
  ResidualStats mu_antisymmetry;
};

// Samples where either surface is flagged (umbilics included) are excluded.
C2Stats verify_c2(const PairSamples& s);
FormStats verify_form_relations(const PairSamples& s);
HkStats verify_hk_equality(const PairSamples& s);

// tau* = tau - log rho and rho rho* = 1, wherever both frames exist.
ResidualStats check_tau_shift(const PairSamples& s);
ResidualStats check_support_reciprocal(const PairSamples& s);

// Largest coefficient difference, relative to the larger of the two forms.
double form_residual(const Sym2& predicted, const Sym2& actual);

// Pointwise predictions of the dual forms.
Sym2 predicted_dual_first(const SurfaceSample& s);
Sym2 predicted_dual_second(const SurfaceSample& s);
Sym2 predicted_dual_third(const SurfaceSample& s);

VerificationReport verify_dual(const DualPair& pair, const Grid& grid, const Tolerances& tol = {},
                               Execution exec = Execution::parallel);

// H/K equality against a partner that is not the dual; passes when violated.
IdentityResult non_dual_control(const RibaucourPatch& patch, const RibaucourPatch& partner, const Grid& grid,
                                const Tolerances& tol = {}, Execution exec = Execution::parallel);

}  // namespace ribaucour
