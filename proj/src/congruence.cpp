#include "ribaucour/congruence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ribaucour/duality.hpp"

namespace ribaucour {

namespace {

using J1 = Jet<double, 1>;
using J3 = Jet<double, 3>;
using J4 = Jet<double, 4>;

template <typename S>
std::array<S, 3> immersion(MinimalKind kind, const S& u, const S& v) {
  using std::cos;
  using std::cosh;
  using std::sin;
  if (kind == MinimalKind::enneper)
    return {u * (1.0 - u * u / 3.0 + v * v), -(v * (1.0 - v * v / 3.0 + u * u)), u * u - v * v};
  if (kind == MinimalKind::plane) return {u, v, u * 0.0};
  return {cosh(v) * cos(u), cosh(v) * sin(u), v};
}

template <typename S>
S example_W(MinimalKind kind, const S& u, const S& v) {
  using std::cosh;
  if (kind == MinimalKind::enneper) return 2.0 * cosh(u) / (1.0 + u * u + v * v);
  return (1.0 + u * u + v * v) / (2.0 * cosh(v));
}

// Omega exactly as printed alongside W.
template <typename S>
S printed_Omega(MinimalKind kind, const S& u, const S& v) {
  using std::cosh;
  using std::sinh;
  if (kind == MinimalKind::enneper) return (5.0 + u * u + v * v) * cosh(u) + 4.0 * u * sinh(u) + 5.0 * cosh(u);
  return (u * u + v * v) * cosh(v) / 2.0 - 2.0 * v * sinh(v) + 2.5 * cosh(v);
}

template <typename J>
std::array<J, 3> cross(const std::array<J, 3>& a, const std::array<J, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <typename J>
J dot(const std::array<J, 3>& a, const std::array<J, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename J, typename F>
auto map3(const std::array<J, 3>& a, F&& f) {
  return std::array<decltype(f(a[0])), 3>{f(a[0]), f(a[1]), f(a[2])};
}

template <typename J>
Vec3 values(const std::array<J, 3>& a) {
  return Vec3(a[0].value(), a[1].value(), a[2].value());
}

double scaled(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

CongruenceState operator+(const CongruenceState& a, const CongruenceState& b) {
  return {a.Omega + b.Omega, a.Omega1 + b.Omega1, a.Omega2 + b.Omega2, a.W + b.W};
}

CongruenceState operator*(double s, const CongruenceState& a) {
  return {s * a.Omega, s * a.Omega1, s * a.Omega2, s * a.W};
}

double state_gap(const CongruenceState& a, const CongruenceState& b) {
  return std::max({scaled(a.Omega, b.Omega), scaled(a.Omega1, b.Omega1), scaled(a.Omega2, b.Omega2), scaled(a.W, b.W)});
}

CongruenceState rhs_u(const MinimalPatch& p, const IntegralConstants& k, double u, double v, const CongruenceState& s) {
  const MinimalCoefficients m = minimal_coefficients(p, u, v);
  const double a = k.c * s.W - 0.5 * k.c3;
  const double b = k.c * s.Omega - s.W - 0.5 * k.c2;
  return {m.phi * s.Omega1, -s.Omega2 * m.phi_v / m.phi + m.phi * a + m.k1 * m.phi * b, s.Omega1 * m.phi_v / m.phi,
          s.Omega1 * m.k1 * m.phi};
}

CongruenceState rhs_v(const MinimalPatch& p, const IntegralConstants& k, double u, double v, const CongruenceState& s) {
  const MinimalCoefficients m = minimal_coefficients(p, u, v);
  const double a = k.c * s.W - 0.5 * k.c3;
  const double b = k.c * s.Omega - s.W - 0.5 * k.c2;
  return {m.phi * s.Omega2, s.Omega2 * m.phi_u / m.phi, -s.Omega1 * m.phi_u / m.phi + m.phi * a + m.k2 * m.phi * b,
          s.Omega2 * m.k2 * m.phi};
}

// One classical Runge-Kutta step of length h along u (axis 0) or v (axis 1).
CongruenceState rk4_step(const MinimalPatch& p, const IntegralConstants& k, int axis, double u, double v, double h,
                         const CongruenceState& s) {
  auto f = [&](double t, const CongruenceState& y) {
    return axis == 0 ? rhs_u(p, k, u + t, v, y) : rhs_v(p, k, u, v + t, y);
  };
  const CongruenceState k1 = f(0.0, s);
  const CongruenceState k2 = f(0.5 * h, s + (0.5 * h) * k1);
  const CongruenceState k3 = f(0.5 * h, s + (0.5 * h) * k2);
  const CongruenceState k4 = f(h, s + h * k3);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fill out[idx(n)] for every n along one grid line, starting from out[idx(n0)].
template <typename Idx, typename Coord>
void march_line(const MinimalPatch& p, const IntegralConstants& k, int axis, int count, int n0, Idx idx,
                Coord coord, std::vector<CongruenceState>& out) {
  for (int n = n0; n + 1 < count; ++n) {
    const auto [u, v] = coord(n);
    const auto [u1, v1] = coord(n + 1);
    out[idx(n + 1)] = rk4_step(p, k, axis, u, v, axis == 0 ? u1 - u : v1 - v, out[idx(n)]);
  }
  for (int n = n0; n > 0; --n) {
    const auto [u, v] = coord(n);
    const auto [u1, v1] = coord(n - 1);
    out[idx(n - 1)] = rk4_step(p, k, axis, u, v, axis == 0 ? u1 - u : v1 - v, out[idx(n)]);
  }
}

double fd4(const std::vector<double>& f, std::size_t c, std::size_t stride, double h) {
  return (f[c - 2 * stride] - 8.0 * f[c - stride] + 8.0 * f[c + stride] - f[c + 2 * stride]) / (12.0 * h);
}

template <typename F>
ResidualStats collect(const std::vector<CongruencePoint>& pts, F&& residual) {
  ResidualStats st;
  for (const auto& p : pts) {
    if (!p.valid) {
      st.exclude();
      continue;
    }
    st.add(residual(p), p.minimal.u, p.minimal.v);
  }
  return st;
}

// Same, but only where the envelope is an immersion.
template <typename F>
ResidualStats collect_envelope(const std::vector<CongruencePoint>& pts, F&& residual) {
  ResidualStats st;
  for (const auto& p : pts) {
    if (!p.valid) {
      st.exclude();
      continue;
    }
    const SurfaceSample y = envelope(p);
    if (!y.flags.immersed()) {
      st.exclude();
      continue;
    }
    st.add(residual(p, y), p.minimal.u, p.minimal.v);
  }
  return st;
}

double clamp_to(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

std::string to_string(MinimalKind kind) {
  switch (kind) {
    case MinimalKind::enneper: return "enneper";
    case MinimalKind::catenoid: return "catenoid";
    case MinimalKind::plane: return "plane";
  }
  return "";
}

MinimalKind minimal_kind_from_string(const std::string& name) {
  if (name == "enneper") return MinimalKind::enneper;
  if (name == "catenoid") return MinimalKind::catenoid;
  throw std::invalid_argument("unknown minimal surface '" + name + "' (expected enneper or catenoid)");
}

MinimalPatch enneper_patch() { return {"enneper", MinimalKind::enneper, Domain{-1, 1, -1, 1}}; }
MinimalPatch catenoid_patch() { return {"catenoid", MinimalKind::catenoid, Domain{-1, 1, -1, 1}}; }
MinimalPatch plane_patch() { return {"plane", MinimalKind::plane, Domain{-1, 1, -1, 1}}; }

MinimalPoint evaluate_minimal(const MinimalPatch& patch, double u, double v) {
  MinimalPoint m;
  m.u = u;
  m.v = v;
  const auto X = immersion(patch.kind, J4::variable_u(u), J4::variable_v(v));
  const auto Xu = map3(X, [](const J4& a) { return a.d_du(); });
  const auto Xv = map3(X, [](const J4& a) { return a.d_dv(); });
  const auto n = cross(Xu, Xv);
  const J3 inv = 1.0 / sqrt(dot(n, n));
  const auto N = map3(n, [&](const J3& a) { return -(a * inv); });

  const J3 phi2 = dot(Xu, Xu);
  m.phi = sqrt(phi2).truncate<2>();
  const auto Xuu = map3(Xu, [](const J3& a) { return a.d_du(); });
  const auto Xuv = map3(Xu, [](const J3& a) { return a.d_dv(); });
  const auto Xvv = map3(Xv, [](const J3& a) { return a.d_dv(); });
  const auto N2 = map3(N, [](const J3& a) { return a.truncate<2>(); });
  const RJet2 L = dot(Xuu, N2), M = dot(Xuv, N2), Nc = dot(Xvv, N2);
  const RJet2 p2 = phi2.truncate<2>();
  m.k1_jet = L / p2;
  m.k2_jet = Nc / p2;
  m.k1 = m.k1_jet.value();
  m.k2 = m.k2_jet.value();

  m.X = values(X);
  m.X_u = values(Xu);
  m.X_v = values(Xv);
  m.I = Sym2{m.X_u.dot(m.X_u), m.X_u.dot(m.X_v), m.X_v.dot(m.X_v)};
  m.II = Sym2{L.value(), M.value(), Nc.value()};

  const auto Nu = map3(N, [](const J3& a) { return a.d_du(); });
  const RJet2 tau = 0.5 * log(dot(Nu, Nu));
  m.frame = make_frame(N2, tau);
  m.III = Sym2{m.frame.N_u.dot(m.frame.N_u), m.frame.N_u.dot(m.frame.N_v), m.frame.N_v.dot(m.frame.N_v)};

  const double ph2 = phi2.value();
  m.conformal_residual = std::max(std::abs(m.I.uv), std::abs(m.I.uu - m.I.vv)) / ph2;
  m.diagonal_residual = std::abs(m.II.uv) / ph2;
  m.minimality_residual = std::abs(m.k1 + m.k2);
  return m;
}

MinimalCoefficients minimal_coefficients(const MinimalPatch& patch, double u, double v) {
  const auto X = immersion(patch.kind, RJet2::variable_u(u), RJet2::variable_v(v));
  const auto Xu = map3(X, [](const RJet2& a) { return a.d_du(); });
  const auto Xv = map3(X, [](const RJet2& a) { return a.d_dv(); });
  const J1 phi = sqrt(dot(Xu, Xu));
  const Vec3 n = values(Xu).cross(values(Xv));
  const Vec3 N = -n / n.norm();
  const Vec3 Xuu(X[0].duu(), X[1].duu(), X[2].duu());
  const Vec3 Xvv(X[0].dvv(), X[1].dvv(), X[2].dvv());
  const double p2 = phi.value() * phi.value();
  return {phi.value(), phi.du(), phi.dv(), Xuu.dot(N) / p2, Xvv.dot(N) / p2};
}

double first_integral(const CongruenceState& s, const IntegralConstants& k) {
  return s.Omega1 * s.Omega1 + s.Omega2 * s.Omega2 + s.W * s.W - 2.0 * k.c * s.Omega * s.W + k.c2 * s.W +
         k.c3 * s.Omega + k.c1;
}

double SystemResiduals::max() const { return *std::max_element(std::begin(rib), std::end(rib)); }

SystemResiduals system_residuals(const CongruencePoint& p) {
  const RJet2& phi = p.minimal.phi;
  const double f = phi.value();
  const J1 phi1 = phi.truncate<1>();
  const J1 O1 = p.Omega.d_du() / phi1;
  const J1 O2 = p.Omega.d_dv() / phi1;
  const CongruenceState& s = p.state;
  SystemResiduals r;
  r.rib[0] = scaled(O1.dv(), s.Omega2 * phi.du() / f);
  r.rib[1] = scaled(O2.du(), s.Omega1 * phi.dv() / f);
  r.rib[2] = scaled(p.Omega.du(), f * s.Omega1);
  r.rib[3] = scaled(p.Omega.dv(), f * s.Omega2);
  r.rib[4] = scaled(p.W.du(), s.Omega1 * p.minimal.k1 * f);
  r.rib[5] = scaled(p.W.dv(), s.Omega2 * p.minimal.k2 * f);
  return r;
}

AnalyticExample::AnalyticExample(const MinimalPatch& patch, const Grid& grid, const Tolerances& tol)
    : patch_(patch) {
  u_ref_ = clamp_to(0.0, grid.domain.u0, grid.domain.u1);
  v_ref_ = clamp_to(0.0, grid.domain.v0, grid.domain.v1);

  // c from the first integral at the reference point, (c1, c2, c3) = (1, 0, 0)
  const CongruenceState s0 = literal_at(u_ref_, v_ref_).state;
  literal_c_ = (s0.Omega1 * s0.Omega1 + s0.Omega2 * s0.Omega2 + s0.W * s0.W + 1.0) / (2.0 * s0.Omega * s0.W);
  consts_ = IntegralConstants{literal_c_, 1.0, 0.0, 0.0};

  std::vector<CongruencePoint> lit = map_grid<CongruencePoint>(
      grid, Execution::parallel, [&](int i, int j) { return literal_at(grid.u(i), grid.v(j)); });
  literal_system_ = check_system(lit).max_residual;
  literal_drift_ = check_first_integral(lit, consts_).max_residual;
  if (literal_system_ <= tol.first_integral && literal_drift_ <= tol.first_integral) return;

  // Fallback: Omega = Omega_hat + offset, fit (c, c offset) to
  // Omega1^2 + Omega2^2 + W^2 + 1 = 2 c W Omega_hat + 2 (c offset) W.
  source_ = OmegaSource::quadrature;
  std::vector<CongruencePoint> pts = map_grid<CongruencePoint>(
      grid, Execution::parallel, [&](int i, int j) { return at(grid.u(i), grid.v(j)); });
  Eigen::MatrixXd A(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t n = 0; n < pts.size(); ++n) {
    const CongruenceState& s = pts[n].state;
    const auto r = static_cast<Eigen::Index>(n);
    A(r, 0) = 2.0 * s.W * s.Omega;  // offset is still zero here
    A(r, 1) = 2.0 * s.W;
    rhs(r) = s.Omega1 * s.Omega1 + s.Omega2 * s.Omega2 + s.W * s.W + 1.0;
  }
  const Eigen::Vector2d x = A.colPivHouseholderQr().solve(rhs);
  consts_.c = x(0);
  offset_ = x(1) / x(0);
}

CongruencePoint AnalyticExample::literal_at(double u, double v) const {
  CongruencePoint p;
  p.minimal = evaluate_minimal(patch_, u, v);
  const RJet2 ju = RJet2::variable_u(u), jv = RJet2::variable_v(v);
  p.W = example_W(patch_.kind, ju, jv);
  p.Omega = printed_Omega(patch_.kind, ju, jv);
  const double f = p.minimal.phi.value();
  p.state = {p.Omega.value(), p.Omega.du() / f, p.Omega.dv() / f, p.W.value()};
  return p;
}

double AnalyticExample::quadrature_omega(double u, double v) const {
  using boost::math::quadrature::gauss_kronrod;
  auto omega_u = [&](double s, double t) {
    const J1 w = example_W(patch_.kind, J1::variable_u(s), J1::variable_v(t));
    return w.du() / minimal_coefficients(patch_, s, t).k1;
  };
  auto omega_v = [&](double s, double t) {
    const J1 w = example_W(patch_.kind, J1::variable_u(s), J1::variable_v(t));
    return w.dv() / minimal_coefficients(patch_, s, t).k2;
  };
  auto integrate = [](auto&& g, double a, double b) {
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    return sign * gauss_kronrod<double, 31>::integrate(g, std::min(a, b), std::max(a, b), 4, 1e-13);
  };
  const double along_u = integrate([&](double s) { return omega_u(s, v_ref_); }, u_ref_, u);
  const double along_v = integrate([&](double t) { return omega_v(u, t); }, v_ref_, v);
  return along_u + along_v;
}

CongruencePoint AnalyticExample::at(double u, double v) const {
  if (source_ == OmegaSource::literal) return literal_at(u, v);
  CongruencePoint p;
  p.minimal = evaluate_minimal(patch_, u, v);
  const J3 w = example_W(patch_.kind, J3::variable_u(u), J3::variable_v(v));
  p.W = w.truncate<2>();
  const RJet2 ou = w.d_du() / p.minimal.k1_jet;
  const RJet2 ov = w.d_dv() / p.minimal.k2_jet;
  const double value = quadrature_omega(u, v) + offset_;
  p.Omega = make_rjet2(value, ou.value(), ov.value(), ou.du(), 0.5 * (ou.dv() + ov.du()), ov.dv());
  const double f = p.minimal.phi.value();
  p.state = {value, ou.value() / f, ov.value() / f, p.W.value()};
  return p;
}

std::vector<CongruencePoint> AnalyticExample::sample(const Grid& grid, Execution exec) const {
  return map_grid<CongruencePoint>(grid, exec, [&](int i, int j) { return at(grid.u(i), grid.v(j)); });
}

ResidualStats check_first_integral(const std::vector<CongruencePoint>& pts, const IntegralConstants& k,
                                   double reference) {
  return collect(pts, [&](const CongruencePoint& p) {
    const CongruenceState& s = p.state;
    return std::abs(first_integral(s, k) - reference) / std::max(1.0, std::abs(2.0 * k.c * s.Omega * s.W));
  });
}

ResidualStats check_system(const std::vector<CongruencePoint>& pts) {
  return collect(pts, [](const CongruencePoint& p) { return system_residuals(p).max(); });
}

ResidualStats check_minimal_chart(const MinimalPatch& patch, const Grid& grid, Execution exec) {
  const auto r = map_grid<double>(grid, exec, [&](int i, int j) {
    const MinimalPoint m = evaluate_minimal(patch, grid.u(i), grid.v(j));
    return std::max(m.conformal_residual, m.diagonal_residual);
  });
  ResidualStats st;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) st.add(r[grid.index(i, j)], grid.u(i), grid.v(j));
  return st;
}

ResidualStats check_minimality(const MinimalPatch& patch, const Grid& grid, Execution exec) {
  const auto r = map_grid<double>(
      grid, exec, [&](int i, int j) { return evaluate_minimal(patch, grid.u(i), grid.v(j)).minimality_residual; });
  ResidualStats st;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) st.add(r[grid.index(i, j)], grid.u(i), grid.v(j));
  return st;
}

Integration integrate_system(const MinimalPatch& patch, const CongruenceState& init, int i0, int j0,
                             const IntegralConstants& consts, const Grid& grid, Execution exec) {
  if (consts.c == 0.0) throw std::invalid_argument("integral constant c must be nonzero");
  if (i0 < 0 || i0 >= grid.nu || j0 < 0 || j0 >= grid.nv) throw std::invalid_argument("initial node outside grid");
  Integration out;
  out.grid = grid;
  out.i0 = i0;
  out.j0 = j0;
  out.rows.assign(grid.size(), {});
  out.cols.assign(grid.size(), {});
  const bool par = exec == Execution::parallel;

  // rows first: the initial row, then every column
  out.rows[grid.index(i0, j0)] = init;
  march_line(patch, consts, 0, grid.nu, i0, [&](int i) { return grid.index(i, j0); },
             [&](int i) { return std::pair{grid.u(i), grid.v(j0)}; }, out.rows);
#pragma omp parallel for schedule(dynamic) if (par)
  for (int i = 0; i < grid.nu; ++i)
    march_line(patch, consts, 1, grid.nv, j0, [&](int j) { return grid.index(i, j); },
               [&](int j) { return std::pair{grid.u(i), grid.v(j)}; }, out.rows);

  // columns first
  out.cols[grid.index(i0, j0)] = init;
  march_line(patch, consts, 1, grid.nv, j0, [&](int j) { return grid.index(i0, j); },
             [&](int j) { return std::pair{grid.u(i0), grid.v(j)}; }, out.cols);
#pragma omp parallel for schedule(dynamic) if (par)
  for (int j = 0; j < grid.nv; ++j)
    march_line(patch, consts, 0, grid.nu, i0, [&](int i) { return grid.index(i, j); },
               [&](int i) { return std::pair{grid.u(i), grid.v(j)}; }, out.cols);
  return out;
}

ResidualStats check_path_independence(const Integration& integ) {
  ResidualStats st;
  const Grid& g = integ.grid;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const std::size_t n = g.index(i, j);
      st.add(state_gap(integ.rows[n], integ.cols[n]), g.u(i), g.v(j));
    }
  return st;
}

ResidualStats check_integration_drift(const Integration& integ, const IntegralConstants& k) {
  ResidualStats st;
  const Grid& g = integ.grid;
  const double ref = first_integral(integ.rows[g.index(integ.i0, integ.j0)], k);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const CongruenceState& s = integ.rows[g.index(i, j)];
      st.add(std::abs(first_integral(s, k) - ref) / std::max(1.0, std::abs(2.0 * k.c * s.Omega * s.W)), g.u(i),
             g.v(j));
    }
  return st;
}

ResidualStats compare_states(const std::vector<CongruenceState>& a, const std::vector<CongruencePoint>& b,
                             const Grid& grid) {
  ResidualStats st;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const std::size_t n = grid.index(i, j);
      st.add(state_gap(a[n], b[n].state), grid.u(i), grid.v(j));
    }
  return st;
}

std::vector<CongruencePoint> integrated_points(const MinimalPatch& patch, const Integration& integ,
                                               Execution exec) {
  const Grid& g = integ.grid;
  std::vector<CongruencePoint> pts(g.size());
  std::vector<double> Wu(g.size()), Wv(g.size()), Ou(g.size()), Ov(g.size());
  for_each_node(g, exec, [&](int i, int j) {
    const std::size_t n = g.index(i, j);
    CongruencePoint& p = pts[n];
    p.minimal = evaluate_minimal(patch, g.u(i), g.v(j));
    p.state = integ.rows[n];
    const double f = p.minimal.phi.value();
    Wu[n] = p.state.Omega1 * p.minimal.k1 * f;
    Wv[n] = p.state.Omega2 * p.minimal.k2 * f;
    Ou[n] = f * p.state.Omega1;
    Ov[n] = f * p.state.Omega2;
  });
  const double hu = g.du(), hv = g.dv();
  const std::size_t row = static_cast<std::size_t>(g.nu);
  for_each_node(g, exec, [&](int i, int j) {
    const std::size_t n = g.index(i, j);
    CongruencePoint& p = pts[n];
    const CongruenceState& s = p.state;
    if (i < 2 || j < 2 || i > g.nu - 3 || j > g.nv - 3) {
      p.valid = false;
      p.W = make_rjet2(s.W, Wu[n], Wv[n], 0, 0, 0);
      p.Omega = make_rjet2(s.Omega, Ou[n], Ov[n], 0, 0, 0);
      return;
    }
    p.W = make_rjet2(s.W, Wu[n], Wv[n], fd4(Wu, n, 1, hu), 0.5 * (fd4(Wu, n, row, hv) + fd4(Wv, n, 1, hu)),
                     fd4(Wv, n, row, hv));
    p.Omega = make_rjet2(s.Omega, Ou[n], Ov[n], fd4(Ou, n, 1, hu), 0.5 * (fd4(Ou, n, row, hv) + fd4(Ov, n, 1, hu)),
                         fd4(Ov, n, row, hv));
  });
  return pts;
}

SurfaceSample envelope(const CongruencePoint& p) { return immerse_support(p.W, p.minimal.frame); }

EnvelopeStats check_envelope(const std::vector<CongruencePoint>& pts, const IntegralConstants& k) {
  EnvelopeStats st;
  st.middle_sphere = collect_envelope(
      pts, [](const CongruencePoint&, const SurfaceSample& y) { return std::abs(middle_sphere_residual(y)); });
  st.h_over_k = collect_envelope(pts, [&](const CongruencePoint& p, const SurfaceSample& y) {
    return mixed_relative(k.c * p.Omega.value(), -y.h_over_k);
  });
  st.support_relation = collect_envelope(pts, [](const CongruencePoint& p, const SurfaceSample& y) {
    const double w = p.W.value();
    return std::abs(sphere_gradient_norm2(p.W, p.minimal.frame) + w * w + 2.0 * y.h_over_k * w + 1.0);
  });
  st.curvature_lines = collect_envelope(pts, [](const CongruencePoint&, const SurfaceSample& y) {
    return std::abs(y.II.uv) / std::max(1.0, y.II.max_abs());
  });
  return st;
}

HessianStats check_hessian_identities(const std::vector<CongruencePoint>& pts, const IntegralConstants& k) {
  HessianStats st;
  st.omega_hessian = collect(pts, [&](const CongruencePoint& p) {
    const MinimalPoint& m = p.minimal;
    const double f = m.phi.value();
    const Sym2 hess = conformal_hessian(p.Omega, m.phi.du() / f, m.phi.dv() / f);
    const double W = p.W.value(), O = p.Omega.value();
    const Sym2 pred = (k.c * W - 0.5 * k.c3) * m.I + (k.c * O - W - 0.5 * k.c2) * m.II;
    return form_residual(pred, hess);
  });
  st.w_hessian = collect(pts, [&](const CongruencePoint& p) {
    const MinimalPoint& m = p.minimal;
    const double W = p.W.value(), O = p.Omega.value();
    const Sym2 pred = (k.c * W) * m.II + (k.c * O - W) * m.III;
    return form_residual(pred, sphere_hessian(p.W, m.frame));
  });
  st.gradients = collect(pts, [](const CongruencePoint& p) {
    const MinimalPoint& m = p.minimal;
    const double f2 = m.phi.value() * m.phi.value();
    const Vec3 grad_omega = (p.Omega.du() * m.X_u + p.Omega.dv() * m.X_v) / f2;
    const Vec3 grad_w = sphere_gradient(p.W, m.frame);
    return (grad_omega + grad_w).norm() / std::max({1.0, grad_omega.norm(), grad_w.norm()});
  });
  return st;
}

GeneratedFormStats generated_forms_check(const std::vector<CongruencePoint>& pts, const IntegralConstants& k) {
  GeneratedFormStats st;
  auto coeffs = [&](const CongruencePoint& p) {
    return std::pair{0.5 * k.c3 - k.c * p.W.value(), 0.5 * k.c2 - k.c * p.Omega.value()};
  };
  st.first = collect_envelope(pts, [&](const CongruencePoint& p, const SurfaceSample& y) {
    const auto [a, b] = coeffs(p);
    const MinimalPoint& m = p.minimal;
    return form_residual((a * a) * m.I + (2 * a * b) * m.II + (b * b) * m.III, y.I);
  });
  st.second = collect_envelope(pts, [&](const CongruencePoint& p, const SurfaceSample& y) {
    const auto [a, b] = coeffs(p);
    return form_residual(a * p.minimal.II + b * p.minimal.III, y.II);
  });
  st.third = collect_envelope(
      pts, [](const CongruencePoint& p, const SurfaceSample& y) { return form_residual(p.minimal.III, y.III); });
  return st;
}

std::vector<CongruencePoint> perturb_omega(std::vector<CongruencePoint> pts, double eps) {
  for (auto& p : pts) p.Omega = p.Omega * (1.0 + eps);
  return pts;
}

CongruenceRun run_congruence(const MinimalPatch& patch, CongruenceMode mode, const Grid& grid, const Tolerances& tol,
                             Execution exec) {
  CongruenceRun run;
  run.grid = grid;
  VerificationReport& rep = run.report;

  rep.add(make_result("minimal_conformal_chart", check_minimal_chart(patch, grid, exec), tol.minimal_chart));
  rep.add(make_result("minimality", check_minimality(patch, grid, exec), tol.minimal_chart));

  const AnalyticExample ex(patch, grid, tol);
  const IntegralConstants& k = ex.constants();
  const std::vector<CongruencePoint> analytic = ex.sample(grid, exec);
  rep.add(make_result("system_residual", check_system(analytic), tol.first_integral));
  rep.add(make_result("first_integral", check_first_integral(analytic, k), tol.first_integral));

  rep.notes["omega_source"] = ex.source() == OmegaSource::literal ? "literal" : "quadrature";
  rep.notes["literal_omega"] = {{"c_at_reference", ex.literal_c()},
                                {"system_residual", ex.literal_system_residual()},
                                {"first_integral_drift", ex.literal_drift()},
                                {"passed", ex.source() == OmegaSource::literal}};
  rep.notes["constants"] = {{"c", k.c}, {"c1", k.c1}, {"c2", k.c2}, {"c3", k.c3}};
  if (ex.source() == OmegaSource::quadrature) rep.notes["omega_offset"] = ex.omega_offset();

  const std::vector<CongruencePoint>* fields = &analytic;
  std::vector<CongruencePoint> integrated;
  double envelope_tol = tol.congruence, forms_tol = tol.generated_forms;
  if (mode == CongruenceMode::integrate) {
    // initial state at the node nearest the chart origin
    auto nearest = [](double a, double b, int n, double x) {
      return static_cast<int>(std::lround(clamp_to((x - a) / (b - a) * (n - 1), 0.0, n - 1.0)));
    };
    const int i0 = nearest(grid.domain.u0, grid.domain.u1, grid.nu, 0.0);
    const int j0 = nearest(grid.domain.v0, grid.domain.v1, grid.nv, 0.0);
    const CongruenceState init = analytic[grid.index(i0, j0)].state;
    const Integration integ = integrate_system(patch, init, i0, j0, k, grid, exec);
    rep.add(make_result("path_independence", check_path_independence(integ), tol.first_integral));
    rep.add(make_result("integration_first_integral_drift", check_integration_drift(integ, k), tol.first_integral));
    rep.add(make_result("integration_vs_analytic", compare_states(integ.rows, analytic, grid), tol.first_integral));
    rep.notes["initial_node"] = {{"u", grid.u(i0)}, {"v", grid.v(j0)}};
    integrated = integrated_points(patch, integ, exec);
    fields = &integrated;
    envelope_tol = forms_tol = tol.integrated_route;
  }

  const EnvelopeStats env = check_envelope(*fields, k);
  rep.add(make_result("envelope_middle_sphere", env.middle_sphere, envelope_tol));
  rep.add(make_result("envelope_c_omega_vs_hk", env.h_over_k, envelope_tol));
  rep.add(make_result("envelope_support_relation", env.support_relation, envelope_tol));
  rep.add(make_result("envelope_curvature_lines", env.curvature_lines, envelope_tol));

  const HessianStats hs = check_hessian_identities(*fields, k);
  rep.add(make_result("omega_hessian", hs.omega_hessian, forms_tol));
  rep.add(make_result("w_hessian", hs.w_hessian, forms_tol));
  rep.add(make_result("gradient_link", hs.gradients, forms_tol));
  rep.add(make_violation_check("omega_hessian_perturbed_control",
                               check_hessian_identities(perturb_omega(*fields, 0.01), k).omega_hessian,
                               tol.negative_control));

  const GeneratedFormStats gf = generated_forms_check(*fields, k);
  rep.add(make_result("generated_first_form", gf.first, forms_tol));
  rep.add(make_result("generated_second_form", gf.second, forms_tol));
  rep.add(make_result("generated_third_form", gf.third, tol.shared_normal));

  run.envelope.resize(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    run.envelope[n] = envelope((*fields)[n]);
    if (!(*fields)[n].valid) run.envelope[n].flags.degenerate = true;
  }
  rep.notes["regular_samples"] = std::count_if(run.envelope.begin(), run.envelope.end(),
                                               [](const SurfaceSample& y) { return y.flags.regular(); });
  rep.notes["grid_samples"] = grid.size();
  return run;
}

}  // namespace ribaucour
