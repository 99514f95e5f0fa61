#pragma once

namespace ribaucour {

struct Tolerances {
  double pde = 1e-8;            // support PDE and middle-sphere relation
  double laguerre_cr = 1e-5;    // Cauchy-Riemann residual of mu
  double constant_curvature = 1e-6;
  double c2 = 1e-8;             // curvature swap and H/K equality
  double direction = 1e-6;      // principal-direction cross-parallelism, radians
  double mu_antisymmetry = 1e-6;
  double third_form = 1e-8;
  double first_second_form = 1e-7;
  double tau_shift = 1e-10;
  double first_integral = 1e-6;    // drift and system residuals
  double congruence = 1e-6;        // envelope residuals, analytic route
  double generated_forms = 1e-5;   // Props on Hessians and generated forms
  double integrated_route = 1e-4;  // envelope checks on integrated fields
  double minimal_chart = 1e-8;     // conformality, diagonal II, minimality
  double shared_normal = 1e-12;    // III of the envelope against III of the minimal patch
  double negative_control = 1e-3;
  double non_dual_control = 1e-2;
};

}  // namespace ribaucour
