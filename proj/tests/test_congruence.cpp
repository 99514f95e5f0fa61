#include <cmath>

#include "doctest.h"
#include "ribaucour/congruence.hpp"

using namespace ribaucour;

namespace {

const Grid kGrid41(Domain{-1, 1, -1, 1}, 41, 41);
const Grid kGrid201(Domain{-1, 1, -1, 1}, 201, 201);

Integration integrate_from_example(const AnalyticExample& ex, const Grid& grid, Execution exec = Execution::parallel) {
  const int i0 = (grid.nu - 1) / 2, j0 = (grid.nv - 1) / 2;
  const CongruenceState init = ex.at(grid.u(i0), grid.v(j0)).state;
  return integrate_system(ex.patch(), init, i0, j0, ex.constants(), grid, exec);
}

}  // namespace

TEST_CASE("minimal patches at the origin") {
  const MinimalPoint e = evaluate_minimal(enneper_patch(), 0.0, 0.0);
  CHECK(e.X.norm() <= 1e-15);
  CHECK(e.k1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.k2 == doctest::Approx(-2.0).epsilon(1e-12));

  const MinimalPoint c = evaluate_minimal(catenoid_patch(), 0.0, 0.0);
  CHECK((c.X - Vec3(1, 0, 0)).norm() <= 1e-15);
  CHECK(c.k1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.k2 == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("closed forms of the curvatures") {
  for (double u : {-0.7, 0.1, 0.9})
    for (double v : {-0.4, 0.0, 0.8}) {
      const MinimalPoint e = evaluate_minimal(enneper_patch(), u, v);
      const double r2 = 1 + u * u + v * v;
      CHECK(e.k1 == doctest::Approx(2.0 / (r2 * r2)).epsilon(1e-12));
      CHECK(e.phi.value() == doctest::Approx(r2).epsilon(1e-12));
      const MinimalPoint c = evaluate_minimal(catenoid_patch(), u, v);
      CHECK(c.k1 == doctest::Approx(1.0 / (std::cosh(v) * std::cosh(v))).epsilon(1e-12));
      // III is conformal to the chart
      CHECK(std::abs(c.III.uv) <= 1e-12);
      CHECK(c.III.uu == doctest::Approx(c.III.vv).epsilon(1e-12));
    }
}

TEST_CASE("charts are conformal curvature-line charts of minimal surfaces") {
  for (const auto& p : {enneper_patch(), catenoid_patch()}) {
    CAPTURE(p.name);
    CHECK(check_minimal_chart(p, kGrid41).max_residual <= 1e-8);
    CHECK(check_minimality(p, kGrid41).max_residual <= 1e-8);
  }
  const Grid full(Domain{0, 2 * M_PI, -1, 1}, 41, 41);
  CHECK(check_minimality(catenoid_patch(), full).max_residual <= 1e-8);
  CHECK(check_minimal_chart(catenoid_patch(), full).max_residual <= 1e-8);
}

TEST_CASE("minimal kind names") {
  CHECK(minimal_kind_from_string("enneper") == MinimalKind::enneper);
  CHECK(minimal_kind_from_string("catenoid") == MinimalKind::catenoid);
  CHECK(to_string(MinimalKind::catenoid) == "catenoid");
  CHECK_THROWS_AS(minimal_kind_from_string("helicoid"), std::invalid_argument);
}

TEST_CASE("catenoid example: c = 1/2 and the printed Omega solves the system") {
  const AnalyticExample ex(catenoid_patch(), kGrid41);
  CHECK(ex.source() == OmegaSource::literal);
  CHECK(ex.constants().c == doctest::Approx(0.5).epsilon(1e-12));
  const auto pts = ex.sample(kGrid41);
  CHECK(check_first_integral(pts, ex.constants()).max_residual <= 1e-6);
  CHECK(check_system(pts).max_residual <= 1e-6);
  for (const auto& p : pts) {
    const SystemResiduals r = system_residuals(p);
    for (double x : r.rib) CHECK(x <= 1e-10);
  }
}

TEST_CASE("enneper example: the printed Omega fails and quadrature recovers c = 1/4") {
  const AnalyticExample ex(enneper_patch(), kGrid41);
  CHECK(ex.literal_c() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ex.literal_system_residual() > 1e-3);
  CHECK(ex.source() == OmegaSource::quadrature);
  CHECK(ex.constants().c == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(ex.omega_offset() == doctest::Approx(5.0).epsilon(1e-9));

  const auto pts = ex.sample(kGrid41);
  CHECK(check_first_integral(pts, ex.constants()).max_residual <= 1e-6);
  CHECK(check_system(pts).max_residual <= 1e-6);

  // Omega = (5 + u^2 + v^2) cosh u - 4 u sinh u
  for (double u : {-0.8, 0.3})
    for (double v : {-0.5, 0.6}) {
      const double expect = (5 + u * u + v * v) * std::cosh(u) - 4 * u * std::sinh(u);
      CHECK(ex.at(u, v).state.Omega == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("shifting Omega by a constant breaks the first integral") {
  const AnalyticExample ex(catenoid_patch(), kGrid41);
  auto pts = ex.sample(kGrid41);
  for (auto& p : pts) {
    p.state.Omega += 0.1;
    p.Omega = p.Omega + 0.1;
  }
  CHECK(check_first_integral(pts, ex.constants()).max_residual > 1e-3);
}

TEST_CASE("integration reproduces the analytic catenoid at step 0.01") {
  const AnalyticExample ex(catenoid_patch(), kGrid201);
  const Integration integ = integrate_from_example(ex, kGrid201);
  CHECK(compare_states(integ.rows, ex.sample(kGrid201), kGrid201).max_residual <= 1e-6);
  CHECK(compare_states(integ.cols, ex.sample(kGrid201), kGrid201).max_residual <= 1e-6);
  CHECK(check_path_independence(integ).max_residual <= 1e-6);
  CHECK(check_integration_drift(integ, ex.constants()).max_residual <= 1e-6);
}

TEST_CASE("integration error shrinks with the step") {
  const Grid coarse(Domain{-1, 1, -1, 1}, 11, 11);
  const Grid fine(Domain{-1, 1, -1, 1}, 21, 21);
  const AnalyticExample ex(catenoid_patch(), coarse);
  const double e1 = compare_states(integrate_from_example(ex, coarse).rows, ex.sample(coarse), coarse).max_residual;
  const double e2 = compare_states(integrate_from_example(ex, fine).rows, ex.sample(fine), fine).max_residual;
  CHECK(e2 < e1 / 8);
}

TEST_CASE("flat data with a vanishing right-hand side keeps the state constant") {
  const Grid g(Domain{-1, 1, -1, 1}, 21, 21);
  const double W = 0.7;
  const IntegralConstants k{0.5, 1.0, 0.0, 2 * 0.5 * W};
  const CongruenceState init{1.3, 0.0, 0.0, W};
  const Integration integ = integrate_system(plane_patch(), init, 10, 10, k, g);
  for (const auto* states : {&integ.rows, &integ.cols})
    for (const auto& s : *states) {
      CHECK(s.Omega == init.Omega);
      CHECK(s.Omega1 == 0.0);
      CHECK(s.Omega2 == 0.0);
      CHECK(s.W == W);
    }
}

TEST_CASE("integrator rejects bad input") {
  const Grid g(Domain{-1, 1, -1, 1}, 5, 5);
  CHECK_THROWS_AS(integrate_system(catenoid_patch(), {}, 0, 0, IntegralConstants{0, 1, 0, 0}, g),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_system(catenoid_patch(), {}, 5, 0, IntegralConstants{}, g), std::invalid_argument);
}

TEST_CASE("serial and parallel integration agree bitwise") {
  const Grid g(Domain{-1, 1, -1, 1}, 31, 31);
  const AnalyticExample ex(enneper_patch(), g);
  const Integration a = integrate_from_example(ex, g, Execution::serial);
  const Integration b = integrate_from_example(ex, g, Execution::parallel);
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(a.rows[n].Omega == b.rows[n].Omega);
    CHECK(a.rows[n].W == b.rows[n].W);
    CHECK(a.cols[n].Omega1 == b.cols[n].Omega1);
  }
}

TEST_CASE("envelope of the analytic examples") {
  for (const auto& p : {enneper_patch(), catenoid_patch()}) {
    CAPTURE(p.name);
    const AnalyticExample ex(p, kGrid41);
    const auto pts = ex.sample(kGrid41);
    const EnvelopeStats st = check_envelope(pts, ex.constants());
    CHECK(st.middle_sphere.max_residual <= 1e-6);
    CHECK(st.h_over_k.max_residual <= 1e-6);
    CHECK(st.support_relation.max_residual <= 1e-6);
    CHECK(st.curvature_lines.max_residual <= 1e-6);
    CHECK(st.h_over_k.comparable_fraction() >= 0.5);
  }
}

TEST_CASE("envelope shares the Gauss map of the minimal patch") {
  const AnalyticExample ex(catenoid_patch(), kGrid41);
  const CongruencePoint p = ex.at(0.3, -0.2);
  const SurfaceSample y = envelope(p);
  REQUIRE(y.flags.regular());
  CHECK(std::abs(y.III.uu - p.minimal.III.uu) <= 1e-12);
  CHECK(std::abs(y.III.uv - p.minimal.III.uv) <= 1e-12);
  CHECK(std::abs(y.III.vv - p.minimal.III.vv) <= 1e-12);
}

TEST_CASE("Hessian identities and generated forms") {
  for (const auto& p : {enneper_patch(), catenoid_patch()}) {
    CAPTURE(p.name);
    const AnalyticExample ex(p, kGrid41);
    const auto pts = ex.sample(kGrid41);
    const HessianStats h = check_hessian_identities(pts, ex.constants());
    CHECK(h.omega_hessian.max_residual <= 1e-5);
    CHECK(h.w_hessian.max_residual <= 1e-5);
    CHECK(h.gradients.max_residual <= 1e-5);
    const GeneratedFormStats f = generated_forms_check(pts, ex.constants());
    CHECK(f.first.max_residual <= 1e-5);
    CHECK(f.second.max_residual <= 1e-5);
    CHECK(f.third.max_residual <= 1e-12);
  }
}

TEST_CASE("perturbing Omega violates the Omega Hessian identity") {
  const AnalyticExample ex(catenoid_patch(), kGrid41);
  const auto pts = perturb_omega(ex.sample(kGrid41), 1e-2);
  CHECK(check_hessian_identities(pts, ex.constants()).omega_hessian.max_residual > 1e-3);
}

TEST_CASE("integrated fields satisfy the envelope checks away from the boundary") {
  const Grid g(Domain{-1, 1, -1, 1}, 101, 101);
  const AnalyticExample ex(catenoid_patch(), g);
  const auto pts = integrated_points(ex.patch(), integrate_from_example(ex, g));
  std::size_t invalid = 0;
  for (const auto& p : pts) invalid += !p.valid;
  CHECK(invalid == g.size() - 97u * 97u);
  const EnvelopeStats st = check_envelope(pts, ex.constants());
  CHECK(st.middle_sphere.max_residual <= 1e-4);
  CHECK(st.h_over_k.max_residual <= 1e-4);
  CHECK(st.support_relation.max_residual <= 1e-4);
}

TEST_CASE("run_congruence passes in both modes") {
  const Grid g(Domain{-1, 1, -1, 1}, 61, 61);
  for (const auto& p : {enneper_patch(), catenoid_patch()})
    for (auto mode : {CongruenceMode::analytic, CongruenceMode::integrate}) {
      CAPTURE(p.name);
      const CongruenceRun run = run_congruence(p, mode, g);
      for (const auto& r : run.report.identities) {
        CAPTURE(r.name);
        CAPTURE(r.max_residual);
        CHECK(r.pass);
      }
      CHECK(run.envelope.size() == g.size());
      CHECK(run.report.find("first_integral"));
      CHECK(static_cast<bool>(run.report.find("path_independence")) == (mode == CongruenceMode::integrate));
    }
}
