#include "ribaucour/ribaucour_core.hpp"

#include <algorithm>
#include <cmath>

namespace ribaucour {

namespace {

struct SymEigen {
  double r_max = 0, r_min = 0;
  Vec2 v_max{1, 0}, v_min{0, 1};
};

// Eigen-decomposition of [[a, b], [b, d]] with the small eigenvalue taken
// from the determinant to avoid cancellation.
SymEigen sym_eigen(double a, double b, double d) {
  SymEigen e;
  const double m = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  const double det = a * d - b * b;
  if (m >= 0) {
    e.r_max = m + rad;
    e.r_min = e.r_max != 0 ? det / e.r_max : m - rad;
  } else {
    e.r_min = m - rad;
    e.r_max = det / e.r_min;
  }
  const double theta = 0.5 * std::atan2(2.0 * b, a - d);
  e.v_max = Vec2(std::cos(theta), std::sin(theta));
  e.v_min = Vec2(-std::sin(theta), std::cos(theta));
  return e;
}

}  // namespace

SupportJet support(const CJet& j1, const CJet& j2) {
  SupportJet out;
  const double d1 = std::norm(j1[1]);
  const double d2 = std::norm(j2[1]);
  if (!(d2 > 0.0) || !(d1 > 0.0)) {
    out.flags.branch = true;
    out.rho = RJet2(d2 > 0.0 ? 0.0 : INFINITY);
    return out;
  }
  const RJet2 a1 = norm(lift(j1, 1));
  const RJet2 a2 = norm(lift(j2, 1));
  const RJet2 b1 = 1.0 + norm(lift(j1, 0));
  const RJet2 b2 = 1.0 + norm(lift(j2, 0));
  out.rho = (sqrt(a1) * b2) / (sqrt(a2) * b1);
  return out;
}

SupportJet support(const HoloFunction& f1, const HoloFunction& f2, cplx z) {
  const auto j1 = f1.try_jet(z, 3);
  const auto j2 = f2.try_jet(z, 3);
  if (!j1 || !j2) {
    SupportJet out;
    out.flags.singular = true;
    return out;
  }
  return support(*j1, *j2);
}

SurfaceSample immerse_support(const RJet2& rho, const SphereFrame& frame) {
  SurfaceSample s;
  s.N = frame.N;
  s.rho = rho.value();
  if (frame.singular) s.flags.singular = true;
  if (frame.branch || !(frame.e2tau > 0) || !std::isfinite(frame.e2tau)) s.flags.branch = true;
  if (!s.flags.immersed()) return s;

  const double lambda = frame.e2tau;
  const Sym2 hess = sphere_hessian(rho, frame);
  const double a = hess.uu / lambda + s.rho;
  const double b = hess.uv / lambda;
  const double d = hess.vv / lambda + s.rho;

  s.X = sphere_gradient(rho, frame) + s.rho * frame.N;
  s.support_laplacian = sphere_laplacian(rho, frame);
  s.III = Sym2{lambda, 0.0, lambda};
  s.II = Sym2{-lambda * a, -lambda * b, -lambda * d};
  // I = A^T g A = lambda A^2 for symmetric A
  s.I = Sym2{lambda * (a * a + b * b), lambda * b * (a + d), lambda * (b * b + d * d)};

  const double det = a * d - b * b;
  const double scale = a * a + 2 * b * b + d * d;
  if (!std::isfinite(det) || !(scale > 0) || std::abs(det) <= kDegeneracyThreshold * scale) {
    s.flags.degenerate = true;
    return s;
  }

  const SymEigen e = sym_eigen(a, b, d);
  const double k_of_max = -1.0 / e.r_max;
  const double k_of_min = -1.0 / e.r_min;
  if (k_of_max >= k_of_min) {
    s.k1 = k_of_max;
    s.k2 = k_of_min;
    s.dir1 = e.v_max;
    s.dir2 = e.v_min;
  } else {
    s.k1 = k_of_min;
    s.k2 = k_of_max;
    s.dir1 = e.v_min;
    s.dir2 = e.v_max;
  }
  s.h_over_k = 0.5 * (1.0 / s.k1 + 1.0 / s.k2);
  if (std::abs(s.k1 - s.k2) <= kUmbilicThreshold * (std::abs(s.k1) + std::abs(s.k2))) {
    s.flags.umbilic = true;
    s.dir1.reset();
    s.dir2.reset();
  }
  return s;
}

RibaucourPatch RibaucourPatch::from_strings(const std::string& f1, const std::string& f2,
                                            Domain domain) {
  return RibaucourPatch{HoloFunction::from_string(f1), HoloFunction::from_string(f2), domain};
}

PatchPoint evaluate_point(const RibaucourPatch& patch, cplx z) {
  PatchPoint p;
  p.u = z.real();
  p.v = z.imag();
  const auto j1 = patch.f1.try_jet(z, 3);
  const auto j2 = patch.f2.try_jet(z, 3);
  if (!j1 || !j2) {
    p.frame.singular = true;
    p.surface.flags.singular = true;
    return p;
  }
  p.frame = gauss_map(*j1);
  const SupportJet sj = support(*j1, *j2);
  p.rho = sj.rho;
  if (sj.flags.branch || p.frame.degenerate()) {
    p.surface.N = p.frame.N;
    p.surface.rho = p.rho.value();
    p.surface.flags.branch = true;
    return p;
  }
  p.surface = immerse_support(p.rho, p.frame);
  p.mu = laguerre_hopf(p.rho, p.frame);
  return p;
}

SurfaceSample immerse(const RibaucourPatch& patch, cplx z) { return evaluate_point(patch, z).surface; }

std::vector<PatchPoint> sample_patch(const RibaucourPatch& patch, const Grid& grid, Execution exec) {
  return map_grid<PatchPoint>(grid, exec, [&](int i, int j) { return evaluate_point(patch, grid.z(i, j)); });
}

double support_pde_residual(const RJet2& rho, const SphereFrame& frame) {
  const double r = rho.value();
  return r * r + r * sphere_laplacian(rho, frame) - 1.0 - sphere_gradient_norm2(rho, frame);
}

double middle_sphere_residual(const SurfaceSample& s) {
  return s.X.squaredNorm() + 2.0 * s.h_over_k * s.X.dot(s.N) + 1.0;
}

double hk_from_support(const SurfaceSample& s) { return -0.5 * (s.support_laplacian + 2.0 * s.rho); }

cplx laguerre_hopf(const RJet2& rho, const SphereFrame& frame) {
  const cplx rz = wirtinger_z(rho);
  const cplx rzz = wirtinger_zz(rho);
  const cplx tz = wirtinger_z(frame.tau);
  return (2.0 / rho.value()) * (rzz - 2.0 * tz * rz);
}

cplx laguerre_hopf(const RibaucourPatch& patch, cplx z) {
  const PatchPoint p = evaluate_point(patch, z);
  if (!p.flags().immersed()) throw DegenerateFrame("laguerre_hopf at a flagged sample");
  return p.mu;
}

double constant_curvature_residual(const RJet2& rho, const SphereFrame& frame) {
  const RJet2 sigma = frame.tau - log(rho);
  return conformal_curvature(sigma) - 1.0;
}

std::optional<double> cauchy_riemann_residual(const RibaucourPatch& patch, cplx z, double step) {
  cplx m[2][4];
  const double offsets[4] = {-2, -1, 1, 2};
  const cplx dirs[2] = {cplx(1, 0), cplx(0, 1)};
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < 4; ++k) {
      const PatchPoint p = evaluate_point(patch, z + offsets[k] * step * dirs[axis]);
      if (!p.flags().immersed() || !std::isfinite(std::abs(p.mu))) return std::nullopt;
      m[axis][k] = p.mu;
    }
  const PatchPoint c = evaluate_point(patch, z);
  if (!c.flags().immersed()) return std::nullopt;
  auto d = [&](int axis) {
    return (m[axis][0] - 8.0 * m[axis][1] + 8.0 * m[axis][2] - m[axis][3]) / (12.0 * step);
  };
  const cplx mu_zbar = 0.5 * (d(0) + cplx(0, 1) * d(1));
  return std::abs(mu_zbar) / (1.0 + std::abs(c.mu));
}

namespace {

template <typename F>
ResidualStats collect(const std::vector<PatchPoint>& pts, bool need_regular, F&& residual) {
  ResidualStats st;
  for (const auto& p : pts) {
    const bool ok = need_regular ? p.flags().regular() : p.flags().immersed();
    if (!ok) {
      st.exclude();
      continue;
    }
    st.add(residual(p), p.u, p.v);
  }
  return st;
}

}  // namespace

ResidualStats check_support_pde(const std::vector<PatchPoint>& pts) {
  return collect(pts, false, [](const PatchPoint& p) { return std::abs(support_pde_residual(p.rho, p.frame)); });
}

ResidualStats check_middle_sphere(const std::vector<PatchPoint>& pts) {
  return collect(pts, false, [](const PatchPoint& p) { return std::abs(middle_sphere_residual(p.surface)); });
}

ResidualStats check_hk_routes(const std::vector<PatchPoint>& pts) {
  return collect(pts, false,
                 [](const PatchPoint& p) { return mixed_relative(hk_from_support(p.surface), p.surface.h_over_k); });
}

ResidualStats check_constant_curvature(const std::vector<PatchPoint>& pts) {
  return collect(pts, false,
                 [](const PatchPoint& p) { return std::abs(constant_curvature_residual(p.rho, p.frame)); });
}

ResidualStats check_middle_sphere_offset(const std::vector<PatchPoint>& pts, double offset) {
  ResidualStats st;
  for (const auto& p : pts) {
    if (!p.flags().immersed()) {
      st.exclude();
      continue;
    }
    const SurfaceSample shifted = immerse_support(p.rho + offset, p.frame);
    if (!shifted.flags.immersed()) {
      st.exclude();
      continue;
    }
    st.add(std::abs(middle_sphere_residual(shifted)), p.u, p.v);
  }
  return st;
}

ResidualStats check_laguerre_cr(const RibaucourPatch& patch, const Grid& grid, Execution exec,
                                double step) {
  const auto res = map_grid<std::optional<double>>(
      grid, exec, [&](int i, int j) { return cauchy_riemann_residual(patch, grid.z(i, j), step); });
  ResidualStats st;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const auto& r = res[grid.index(i, j)];
      if (r) st.add(*r, grid.u(i), grid.v(j));
      else st.exclude();
    }
  return st;
}

std::size_t count_regular(const std::vector<PatchPoint>& pts) {
  return static_cast<std::size_t>(
      std::count_if(pts.begin(), pts.end(), [](const PatchPoint& p) { return p.flags().regular(); }));
}

VerificationReport verify_patch(const RibaucourPatch& patch, const Grid& grid, const Tolerances& tol,
                                Execution exec) {
  const auto pts = sample_patch(patch, grid, exec);
  VerificationReport rep;
  rep.add(make_result("support_pde", check_support_pde(pts), tol.pde));
  rep.add(make_result("middle_sphere", check_middle_sphere(pts), tol.pde));
  rep.add(make_result("hk_support_vs_eigen", check_hk_routes(pts), tol.c2));
  rep.add(make_result("laguerre_cauchy_riemann", check_laguerre_cr(patch, grid, exec), tol.laguerre_cr));
  rep.add(make_result("constant_curvature", check_constant_curvature(pts), tol.constant_curvature));
  rep.add(make_violation_check("middle_sphere_offset_control", check_middle_sphere_offset(pts, 0.01),
                               tol.negative_control));
  rep.notes["regular_samples"] = count_regular(pts);
  rep.notes["grid_samples"] = grid.size();
  return rep;
}

}  // namespace ribaucour
