#include "ribaucour/sphere_geom.hpp"

#include <algorithm>
#include <cmath>

namespace ribaucour {

double Sym2::max_abs() const { return std::max({std::abs(uu), std::abs(uv), std::abs(vv)}); }

namespace {

Vec3 partial(const std::array<RJet2, 3>& n, int a, int b) {
  return {n[0].partial(a, b), n[1].partial(a, b), n[2].partial(a, b)};
}

void require(const SphereFrame& frame) {
  if (frame.degenerate()) throw DegenerateFrame("degenerate sphere frame");
}

}  // namespace

SphereFrame make_frame(const std::array<RJet2, 3>& normal, const RJet2& tau) {
  SphereFrame fr;
  fr.N = partial(normal, 0, 0);
  fr.N_u = partial(normal, 1, 0);
  fr.N_v = partial(normal, 0, 1);
  fr.N_uu = partial(normal, 2, 0);
  fr.N_uv = partial(normal, 1, 1);
  fr.N_vv = partial(normal, 0, 2);
  fr.tau = tau;
  fr.e2tau = std::exp(2.0 * tau.value());
  return fr;
}

CJet2 lift(const CJet& jet, int offset) {
  const auto k = static_cast<std::size_t>(offset);
  if (jet.values.size() < k + 3) throw std::invalid_argument("lift needs three jet entries");
  CJet2 h;
  h.coeff(1, 0) = 1.0;
  h.coeff(0, 1) = cplx(0.0, 1.0);
  return compose(h, std::array<cplx, 3>{jet[k], jet[k + 1], jet[k + 2]});
}

SphereFrame gauss_map(const HoloFunction& f, cplx z) {
  const auto jet = f.try_jet(z, 3);
  if (!jet) {
    SphereFrame fr;
    fr.singular = true;
    return fr;
  }
  return gauss_map(*jet);
}

SphereFrame gauss_map(const CJet& j) {
  SphereFrame fr;
  const CJet* jet = &j;
  const CJet2 F = lift(*jet, 0);
  const CJet2 Fp = lift(*jet, 1);
  const RJet2 mod2 = norm(F);
  const RJet2 den = 1.0 + mod2;
  const std::array<RJet2, 3> normal{2.0 * real(F) / den, 2.0 * imag(F) / den, (mod2 - 1.0) / den};

  const double dmod2 = std::norm((*jet)[1]);
  if (!(dmod2 > 0.0)) {
    fr = make_frame(normal, RJet2(0.0));
    fr.tau = RJet2(-INFINITY);
    fr.e2tau = 0.0;
    fr.branch = true;
    return fr;
  }
  const RJet2 tau = std::log(2.0) + 0.5 * log(norm(Fp)) - log(den);
  fr = make_frame(normal, tau);
  const double d = 1.0 + std::norm((*jet)[0]);
  fr.e2tau = 4.0 * dmod2 / (d * d);
  return fr;
}

Vec3 sphere_gradient(const RJet2& field, const SphereFrame& frame) {
  require(frame);
  return (field.du() * frame.N_u + field.dv() * frame.N_v) / frame.e2tau;
}

double sphere_gradient_norm2(const RJet2& field, const SphereFrame& frame) {
  require(frame);
  return (field.du() * field.du() + field.dv() * field.dv()) / frame.e2tau;
}

double sphere_laplacian(const RJet2& field, const SphereFrame& frame) {
  require(frame);
  return (field.duu() + field.dvv()) / frame.e2tau;
}

Sym2 conformal_hessian(const RJet2& f, double su, double sv) {
  // Gamma^u_uu = su, Gamma^v_uu = -sv, Gamma^u_uv = sv, Gamma^v_uv = su,
  // Gamma^u_vv = -su, Gamma^v_vv = sv.
  return {f.duu() - su * f.du() + sv * f.dv(),
          f.duv() - sv * f.du() - su * f.dv(),
          f.dvv() + su * f.du() - sv * f.dv()};
}

Sym2 sphere_hessian(const RJet2& field, const SphereFrame& frame) {
  require(frame);
  return conformal_hessian(field, frame.tau.du(), frame.tau.dv());
}

double conformal_curvature(const RJet2& sigma) {
  return -std::exp(-2.0 * sigma.value()) * (sigma.duu() + sigma.dvv());
}

std::complex<double> wirtinger_z(const RJet2& f) { return 0.5 * cplx(f.du(), -f.dv()); }

std::complex<double> wirtinger_zz(const RJet2& f) {
  return 0.25 * cplx(f.duu() - f.dvv(), -2.0 * f.duv());
}

}  // namespace ribaucour
