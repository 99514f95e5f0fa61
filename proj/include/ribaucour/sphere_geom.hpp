#pragma once

// Calculus on the Gauss sphere over a planar conformal chart.
//
// The third fundamental form is III = e^{2 tau} (du^2 + dv^2).  Gradients,
// Laplacians and covariant Hessians of scalar fields are taken with respect
// to that metric; the Christoffel symbols of a conformal metric only need
// the first partials of tau.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <stdexcept>

#include "ribaucour/holoexpr.hpp"
#include "ribaucour/jet.hpp"

namespace ribaucour {

using Vec3 = Eigen::Vector3d;

// Symmetric 2x2 quadratic form in the (u, v) coordinate basis.
struct Sym2 {
  double uu = 0, uv = 0, vv = 0;

  Sym2 operator+(const Sym2& o) const { return {uu + o.uu, uv + o.uv, vv + o.vv}; }
  Sym2 operator-(const Sym2& o) const { return {uu - o.uu, uv - o.uv, vv - o.vv}; }
  Sym2 operator*(double s) const { return {uu * s, uv * s, vv * s}; }
  friend Sym2 operator*(double s, const Sym2& a) { return a * s; }
  double det() const { return uu * vv - uv * uv; }
  double trace() const { return uu + vv; }
  double max_abs() const;
};

class DegenerateFrame : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SphereFrame {
  Vec3 N = Vec3::Zero();
  Vec3 N_u = Vec3::Zero(), N_v = Vec3::Zero();
  Vec3 N_uu = Vec3::Zero(), N_uv = Vec3::Zero(), N_vv = Vec3::Zero();
  double e2tau = 0;  // conformal factor of III
  RJet2 tau;         // log of the conformal factor, halved, with partials
  bool singular = false;  // some jet could not be evaluated
  bool branch = false;    // III degenerates (e^{2 tau} == 0)

  bool degenerate() const { return singular || branch || !(e2tau > 0); }
};

// Frame from Gauss-map component jets and the conformal exponent.  The
// chart must be conformal for III; that is not checked here.
SphereFrame make_frame(const std::array<RJet2, 3>& normal, const RJet2& tau);

// Stereographic Gauss map N = (2 Re f, 2 Im f, |f|^2 - 1) / (1 + |f|^2) with
// e^{2 tau} = 4 |f'|^2 / (1 + |f|^2)^2.  f must carry jets to order 3.
SphereFrame gauss_map(const HoloFunction& f, cplx z);
SphereFrame gauss_map(const CJet& jet);  // jet of order >= 3

// Lift the holomorphic jet of f at z0 into the real chart: a complex jet in
// (u, v) whose partials are f_u = f', f_v = i f', f_uu = f'', ...  Uses the
// entries jet[offset .. offset + 2].
CJet2 lift(const CJet& jet, int offset = 0);

Vec3 sphere_gradient(const RJet2& field, const SphereFrame& frame);
double sphere_gradient_norm2(const RJet2& field, const SphereFrame& frame);
double sphere_laplacian(const RJet2& field, const SphereFrame& frame);

// Covariant Hessian with respect to III.
Sym2 sphere_hessian(const RJet2& field, const SphereFrame& frame);

// Covariant Hessian of a field for any conformal metric e^{2 sigma}|dz|^2.
Sym2 conformal_hessian(const RJet2& field, double sigma_u, double sigma_v);

// Gaussian curvature of e^{2 sigma} |dz|^2: -e^{-2 sigma} (sigma_uu + sigma_vv).
double conformal_curvature(const RJet2& sigma);

// Wirtinger derivatives d/dz = (d/du - i d/dv) / 2 from real partials.
std::complex<double> wirtinger_z(const RJet2& f);
std::complex<double> wirtinger_zz(const RJet2& f);

}  // namespace ribaucour
