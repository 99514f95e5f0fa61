#include "ribaucour/duality.hpp"

#include <algorithm>
#include <cmath>

namespace ribaucour {

namespace {

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double angle_between_lines(const Vec2& a, const Vec2& b) {
  const double cross = a.x() * b.y() - a.y() * b.x();
  return std::atan2(std::abs(cross), std::abs(a.dot(b)));
}

template <typename F>
void for_comparable(const PairSamples& s, bool need_regular, F&& f) {
  for (std::size_t k = 0; k < s.patch.size(); ++k) {
    const PatchPoint& a = s.patch[k];
    const PatchPoint& b = s.dual[k];
    const bool ok = need_regular ? (a.flags().regular() && b.flags().regular())
                                 : (a.flags().immersed() && b.flags().immersed());
    f(a, b, ok);
  }
}

}  // namespace

double normal_curvature(const SurfaceSample& s, const Vec2& e) {
  const auto q = [&](const Sym2& f) { return f.uu * e.x() * e.x() + 2 * f.uv * e.x() * e.y() + f.vv * e.y() * e.y(); };
  return q(s.II) / q(s.I);
}

DualPair make_dual(const RibaucourPatch& patch) {
  return DualPair{patch, RibaucourPatch{patch.f2, patch.f1, patch.domain}};
}

DualPair make_unrelated_pair(const RibaucourPatch& patch, const RibaucourPatch& partner) {
  return DualPair{patch, partner};
}

PairSamples sample_pair(const DualPair& pair, const Grid& grid, Execution exec) {
  return PairSamples{sample_patch(pair.patch, grid, exec), sample_patch(pair.dual, grid, exec)};
}

C2Stats verify_c2(const PairSamples& s) {
  C2Stats st;
  for_comparable(s, true, [&](const PatchPoint& a, const PatchPoint& b, bool ok) {
    if (!ok) {
      st.curvature_swap.exclude();
      st.direction_swap.exclude();
      return;
    }
    const SurfaceSample& m = a.surface;
    const SurfaceSample& d = b.surface;
    // curvatures of the dual along the curvature lines of the patch
    const double k1_dual = normal_curvature(d, *m.dir1);
    const double k2_dual = normal_curvature(d, *m.dir2);
    st.curvature_swap.add(std::max(relative(m.k1, k2_dual), relative(m.k2, k1_dual)), a.u, a.v);
    st.direction_swap.add(std::max(angle_between_lines(*m.dir1, *d.dir2), angle_between_lines(*m.dir2, *d.dir1)),
                          a.u, a.v);
  });
  return st;
}

double form_residual(const Sym2& predicted, const Sym2& actual) {
  const double scale = std::max({1.0, predicted.max_abs(), actual.max_abs()});
  return (predicted - actual).max_abs() / scale;
}

Sym2 predicted_dual_first(const SurfaceSample& s) {
  const double r2 = s.rho * s.rho, hk = s.h_over_k;
  return (s.I - 4.0 * hk * s.II + 4.0 * hk * hk * s.III) * (1.0 / r2);
}

Sym2 predicted_dual_second(const SurfaceSample& s) {
  const double r2 = s.rho * s.rho;
  return (2.0 * s.h_over_k * s.III - s.II) * (1.0 / r2);
}

Sym2 predicted_dual_third(const SurfaceSample& s) { return s.III * (1.0 / (s.rho * s.rho)); }

FormStats verify_form_relations(const PairSamples& s) {
  FormStats st;
  for_comparable(s, true, [&](const PatchPoint& a, const PatchPoint& b, bool ok) {
    if (!ok) {
      st.first.exclude();
      st.second.exclude();
      st.third.exclude();
      return;
    }
    st.first.add(form_residual(predicted_dual_first(a.surface), b.surface.I), a.u, a.v);
    st.second.add(form_residual(predicted_dual_second(a.surface), b.surface.II), a.u, a.v);
    st.third.add(form_residual(predicted_dual_third(a.surface), b.surface.III), a.u, a.v);
  });
  return st;
}

HkStats verify_hk_equality(const PairSamples& s) {
  HkStats st;
  for_comparable(s, true, [&](const PatchPoint& a, const PatchPoint& b, bool ok) {
    if (!ok) {
      st.hk_equality.exclude();
      st.mu_antisymmetry.exclude();
      return;
    }
    st.hk_equality.add(mixed_relative(a.surface.h_over_k, b.surface.h_over_k), a.u, a.v);
    st.mu_antisymmetry.add(std::abs(a.mu + b.mu), a.u, a.v);
  });
  return st;
}

ResidualStats check_tau_shift(const PairSamples& s) {
  ResidualStats st;
  for_comparable(s, false, [&](const PatchPoint& a, const PatchPoint& b, bool ok) {
    if (!ok) return st.exclude();
    st.add(std::abs(b.frame.tau.value() - (a.frame.tau.value() - std::log(a.rho.value()))), a.u, a.v);
  });
  return st;
}

ResidualStats check_support_reciprocal(const PairSamples& s) {
  ResidualStats st;
  for_comparable(s, false, [&](const PatchPoint& a, const PatchPoint& b, bool ok) {
    if (!ok) return st.exclude();
    st.add(std::abs(a.rho.value() * b.rho.value() - 1.0), a.u, a.v);
  });
  return st;
}

VerificationReport verify_dual(const DualPair& pair, const Grid& grid, const Tolerances& tol, Execution exec) {
  const PairSamples s = sample_pair(pair, grid, exec);
  const C2Stats c2 = verify_c2(s);
  const FormStats forms = verify_form_relations(s);
  const HkStats hk = verify_hk_equality(s);
  VerificationReport rep;
  rep.add(make_result("curvature_swap", c2.curvature_swap, tol.c2));
  rep.add(make_result("principal_direction_swap", c2.direction_swap, tol.direction));
  rep.add(make_result("hk_equality", hk.hk_equality, tol.c2));
  rep.add(make_result("mu_antisymmetry", hk.mu_antisymmetry, tol.mu_antisymmetry));
  rep.add(make_result("first_form_relation", forms.first, tol.first_second_form));
  rep.add(make_result("second_form_relation", forms.second, tol.first_second_form));
  rep.add(make_result("third_form_relation", forms.third, tol.third_form));
  rep.add(make_result("tau_shift", check_tau_shift(s), tol.tau_shift));
  rep.add(make_result("support_reciprocal", check_support_reciprocal(s), tol.tau_shift));
  rep.notes["regular_samples"] = count_regular(s.patch);
  rep.notes["dual_regular_samples"] = count_regular(s.dual);
  rep.notes["grid_samples"] = grid.size();
  return rep;
}

IdentityResult non_dual_control(const RibaucourPatch& patch, const RibaucourPatch& partner, const Grid& grid,
                                const Tolerances& tol, Execution exec) {
  const PairSamples s = sample_pair(make_unrelated_pair(patch, partner), grid, exec);
  return make_violation_check("non_dual_hk_control", verify_hk_equality(s).hk_equality, tol.non_dual_control);
}

}  // namespace ribaucour
