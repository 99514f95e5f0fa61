#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ribaucour/sphere_geom.hpp"

using namespace ribaucour;

namespace {

Vec3 stereographic(const HoloExpr& f, double u, double v) {
  const cplx w = evaluate(f, cplx(u, v));
  const double m = std::norm(w);
  return Vec3(2 * w.real(), 2 * w.imag(), m - 1) / (1 + m);
}

template <typename S>
S test_field(const S& u, const S& v) {
  using std::cos;
  using std::exp;
  return exp(0.3 * u) * cos(v - 0.5 * u) + u * v * v;
}

RJet2 test_field_jet(double u, double v) { return test_field(RJet2::variable_u(u), RJet2::variable_v(v)); }

const char* kGaussMaps[] = {"z", "2*z", "exp(z)", "z^2 + 1", "sinh(z) + z", "1/(z + 3)"};

}  // namespace

TEST_CASE("gauss_map at the worked points") {
  const HoloFunction f = HoloFunction::from_string("z");
  const auto n0 = gauss_map(f, 0.0).N;
  CHECK((n0 - Vec3(0, 0, -1)).norm() < 1e-15);
  CHECK((gauss_map(f, 1.0).N - Vec3(1, 0, 0)).norm() < 1e-15);
  CHECK((gauss_map(f, cplx(0, 1)).N - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK(gauss_map(f, 0.0).e2tau == doctest::Approx(4.0));
}

TEST_CASE("gauss_map flags branch points and singularities") {
  CHECK(gauss_map(HoloFunction::from_string("z^2"), 0.0).branch);
  CHECK(gauss_map(HoloFunction::from_string("3"), 0.5).branch);
  CHECK(gauss_map(HoloFunction::from_string("1/z"), 0.0).singular);
}

TEST_CASE("sphere frame is unit, orthogonal, conformal and matches differenced N") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  for (const char* text : kGaussMaps) {
    CAPTURE(text);
    const HoloFunction f = HoloFunction::from_string(text);
    for (int k = 0; k < 20; ++k) {
      const double u = pick(rng), v = pick(rng);
      const SphereFrame fr = gauss_map(f, cplx(u, v));
      REQUIRE_FALSE(fr.degenerate());
      CHECK(std::abs(fr.N.norm() - 1) < 1e-12);
      CHECK(std::abs(fr.N.dot(fr.N_u)) < 1e-10);
      CHECK(std::abs(fr.N.dot(fr.N_v)) < 1e-10);
      CHECK(oracle::rel(fr.N_u.squaredNorm(), fr.e2tau) < 1e-8);
      CHECK(oracle::rel(fr.N_v.squaredNorm(), fr.e2tau) < 1e-8);
      CHECK(std::abs(fr.N_u.dot(fr.N_v)) / fr.e2tau < 1e-8);
      CHECK(oracle::rel(std::exp(2 * fr.tau.value()), fr.e2tau) < 1e-12);

      auto N = [&](double a, double b) { return stereographic(f.expr(), a, b); };
      const double h = 1e-3;
      const Vec3 fd_u = oracle::d1([&](double s) { return Vec3(N(s, v)); }, u, h);
      const Vec3 fd_uv = oracle::d1(
          [&](double s) { return Vec3(oracle::d1([&](double t) { return Vec3(N(s, t)); }, v, h)); }, u, h);
      const Vec3 fd_vv = oracle::d2([&](double s) { return Vec3(N(u, s)); }, v, h);
      CHECK((fd_u - fr.N_u).norm() / std::max(1.0, fr.N_u.norm()) < 1e-8);
      CHECK((fd_uv - fr.N_uv).norm() / std::max(1.0, fr.N_uv.norm()) < 1e-6);
      CHECK((fd_vv - fr.N_vv).norm() / std::max(1.0, fr.N_vv.norm()) < 1e-6);
    }
  }
}

TEST_CASE("gradient, Laplacian and Hessian of constants vanish") {
  const SphereFrame fr = gauss_map(HoloFunction::from_string("exp(z)"), cplx(0.2, 0.1));
  const RJet2 c(3.5);
  CHECK(sphere_gradient(c, fr).norm() == 0.0);
  CHECK(sphere_laplacian(c, fr) == 0.0);
  CHECK(sphere_hessian(c, fr).max_abs() == 0.0);
}

TEST_CASE("gradient of u at the origin for f1 = z") {
  const SphereFrame fr = gauss_map(HoloFunction::from_string("z"), 0.0);
  const Vec3 g = sphere_gradient(RJet2::variable_u(0.0), fr);
  CHECK(std::abs(g.dot(fr.N)) < 1e-15);
  CHECK(g.squaredNorm() == doctest::Approx(1.0 / fr.e2tau).epsilon(1e-14));
}

TEST_CASE("degenerate frames are rejected") {
  const SphereFrame fr = gauss_map(HoloFunction::from_string("z^2"), 0.0);
  CHECK_THROWS_AS((void)sphere_laplacian(RJet2(1.0), fr), DegenerateFrame);
  CHECK_THROWS_AS((void)sphere_gradient(RJet2(1.0), fr), DegenerateFrame);
}

TEST_CASE("metric operators match finite-difference oracles") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  for (const char* text : kGaussMaps) {
    CAPTURE(text);
    const HoloFunction f = HoloFunction::from_string(text);
    auto lambda = [&](double a, double b) {
      const cplx w = evaluate(f.expr(), cplx(a, b));
      const cplx dw = evaluate(f.derivative(1), cplx(a, b));
      const double d = 1 + std::norm(w);
      return 4 * std::norm(dw) / (d * d);
    };
    auto field = [](double a, double b) { return test_field(a, b); };
    for (int k = 0; k < 20; ++k) {
      const double u = pick(rng), v = pick(rng), h = 1e-3;
      const SphereFrame fr = gauss_map(f, cplx(u, v));
      const RJet2 fj = test_field_jet(u, v);
      const auto p = oracle::partials(field, u, v, h);
      const double lam = lambda(u, v);

      // gradient: g^{ij} d_j field d_i N, dN differenced from the stereographic map
      auto N = [&](double a, double b) { return stereographic(f.expr(), a, b); };
      const Vec3 Nu = oracle::d1([&](double s) { return Vec3(N(s, v)); }, u, h);
      const Vec3 Nv = oracle::d1([&](double s) { return Vec3(N(u, s)); }, v, h);
      const Vec3 fd_grad = (p.du * Nu + p.dv * Nv) / lam;
      const Vec3 grad = sphere_gradient(fj, fr);
      CHECK((grad - fd_grad).norm() / std::max(1.0, grad.norm()) < 1e-6);
      CHECK(std::abs(grad.dot(fr.N)) < 1e-10);

      const double fd_lap = (p.duu + p.dvv) / lam;
      CHECK(oracle::rel(sphere_laplacian(fj, fr), fd_lap) < 1e-5);

      // covariant Hessian with Christoffel symbols from the differenced metric
      const double su = 0.5 * oracle::d1([&](double s) { return std::log(lambda(s, v)); }, u, h);
      const double sv = 0.5 * oracle::d1([&](double s) { return std::log(lambda(u, s)); }, v, h);
      const double huu = p.duu - su * p.du + sv * p.dv;
      const double huv = p.duv - sv * p.du - su * p.dv;
      const double hvv = p.dvv + su * p.du - sv * p.dv;
      const Sym2 hess = sphere_hessian(fj, fr);
      const double scale = std::max(1.0, hess.max_abs());
      CHECK(std::abs(hess.uu - huu) / scale < 1e-5);
      CHECK(std::abs(hess.uv - huv) / scale < 1e-5);
      CHECK(std::abs(hess.vv - hvv) / scale < 1e-5);

      // trace with respect to III recovers the Laplacian
      CHECK(oracle::rel(hess.trace() / fr.e2tau, sphere_laplacian(fj, fr)) < 1e-8);
    }
  }
}

TEST_CASE("the conformal exponent of III solves Lap0 tau + e^{2 tau} = 0") {
  const HoloFunction f = HoloFunction::from_string("z");
  double worst = 0;
  for (int j = 0; j <= 40; ++j)
    for (int i = 0; i <= 40; ++i) {
      const SphereFrame fr = gauss_map(f, cplx(-1 + i * 0.05, -1 + j * 0.05));
      // Lap_III tau * e^{2 tau} is the flat Laplacian of tau
      const double flat = sphere_laplacian(fr.tau, fr) * fr.e2tau;
      worst = std::max(worst, std::abs(flat + fr.e2tau));
    }
  CHECK(worst < 1e-8);
}
