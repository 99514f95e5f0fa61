#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ribaucour/jet.hpp"

using namespace ribaucour;

namespace {

template <typename S>
S composite(const S& u, const S& v) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  return exp(u * v) * sin(u + 2.0 * v) / (1.0 + u * u) + sqrt(2.0 + cosh(v)) * log(3.0 + sinh(u)) -
         cos(u - v) * v;
}

}  // namespace

TEST_CASE("jet partials of a composite match finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double u = pick(rng), v = pick(rng);
    const RJet2 j = composite(RJet2::variable_u(u), RJet2::variable_v(v));
    const auto fd = oracle::partials([](double a, double b) { return composite(a, b); }, u, v, 1e-3);
    CHECK(j.value() == doctest::Approx(fd.value).epsilon(1e-14));
    CHECK(oracle::rel(j.du(), fd.du) < 1e-9);
    CHECK(oracle::rel(j.dv(), fd.dv) < 1e-9);
    CHECK(oracle::rel(j.duu(), fd.duu) < 1e-6);
    CHECK(oracle::rel(j.duv(), fd.duv) < 1e-6);
    CHECK(oracle::rel(j.dvv(), fd.dvv) < 1e-6);
  }
}

TEST_CASE("division of a jet by itself is exactly one") {
  const RJet2 x = composite(RJet2::variable_u(0.3), RJet2::variable_v(-0.2));
  const RJet2 q = x / x;
  CHECK(q.value() == 1.0);
  CHECK(q.du() == 0.0);
  CHECK(q.dv() == 0.0);
  CHECK(q.duu() == 0.0);
  CHECK(q.duv() == 0.0);
  CHECK(q.dvv() == 0.0);
}

TEST_CASE("product rule holds on random jets") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const RJet2 a = make_rjet2(pick(rng), pick(rng), pick(rng), pick(rng), pick(rng), pick(rng));
    const RJet2 b = make_rjet2(pick(rng), pick(rng), pick(rng), pick(rng), pick(rng), pick(rng));
    const RJet2 p = a * b;
    CHECK(p.du() == doctest::Approx(a.du() * b.value() + a.value() * b.du()));
    CHECK(p.duv() == doctest::Approx(a.duv() * b.value() + a.du() * b.dv() + a.dv() * b.du() +
                                     a.value() * b.duv()));
    CHECK(p.dvv() == doctest::Approx(a.dvv() * b.value() + 2 * a.dv() * b.dv() + a.value() * b.dvv()));
  }
}

TEST_CASE("higher-order jets differentiate down consistently") {
  using J4 = Jet<double, 4>;
  const J4 u = J4::variable_u(0.4), v = J4::variable_v(0.1);
  const J4 f = composite(u, v);
  const RJet2 g = composite(RJet2::variable_u(0.4), RJet2::variable_v(0.1));
  CHECK(f.truncate<2>().duu() == doctest::Approx(g.duu()).epsilon(1e-13));
  const auto fu = f.d_du();
  CHECK(fu.value() == doctest::Approx(g.du()).epsilon(1e-13));
  CHECK(fu.d_dv().value() == doctest::Approx(g.duv()).epsilon(1e-13));
  CHECK(f.partial(2, 2) == doctest::Approx(fu.d_du().d_dv().d_dv().value()).epsilon(1e-12));
}

TEST_CASE("complex jets give real partials of |f|^2") {
  // f = (u + i v)^2, |f|^2 = (u^2 + v^2)^2
  const CJet2 z = CJet2::variable_u(0.5) + CJet2::variable_v(0.0) * std::complex<double>(0, 1) +
                  CJet2(std::complex<double>(0, 0.25));
  const RJet2 m = norm(z * z);
  const double u = 0.5, v = 0.25, r2 = u * u + v * v;
  CHECK(m.value() == doctest::Approx(r2 * r2));
  CHECK(m.du() == doctest::Approx(4 * u * r2));
  CHECK(m.duv() == doctest::Approx(8 * u * v));
  CHECK(m.dvv() == doctest::Approx(4 * r2 + 8 * v * v));
}
