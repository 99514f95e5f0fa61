#pragma once

// Truncated bivariate Taylor jets in the real chart (u, v).
//
// A Jet<T, Order> stores the Taylor coefficients c_ab of a smooth function
// around a base point, for all monomials u^a v^b with a + b <= Order.
// Partial derivatives are recovered as a! b! c_ab.  T may be double or
// std::complex<double>; complex jets carry holomorphic data lifted to the
// real chart so that |f|^2 and friends get exact real partials.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace ribaucour {

template <typename T, int Order>
class Jet {
  static_assert(Order >= 0, "jet order must be non-negative");

 public:
  using value_type = T;
  static constexpr int order = Order;
  static constexpr std::size_t size = (Order + 1) * (Order + 2) / 2;

  constexpr Jet() : c_{} {}
  constexpr Jet(T constant) : c_{} { c_[0] = constant; }  // NOLINT(implicit)

  // Coordinate functions u and v expanded at (u0, v0).
  static constexpr Jet variable_u(T u0) {
    Jet j(u0);
    if constexpr (Order >= 1) j.coeff(1, 0) = T(1);
    return j;
  }
  static constexpr Jet variable_v(T v0) {
    Jet j(v0);
    if constexpr (Order >= 1) j.coeff(0, 1) = T(1);
    return j;
  }

  static constexpr std::size_t index(int a, int b) {
    const int d = a + b;
    return static_cast<std::size_t>(d * (d + 1) / 2 + b);
  }

  constexpr T& coeff(int a, int b) { return c_[index(a, b)]; }
  constexpr const T& coeff(int a, int b) const { return c_[index(a, b)]; }

  // d^(a+b) / du^a dv^b at the base point.
  constexpr T partial(int a, int b) const {
    return coeff(a, b) * T(factorial(a) * factorial(b));
  }

  constexpr T value() const { return c_[0]; }
  constexpr T du() const requires(Order >= 1) { return coeff(1, 0); }
  constexpr T dv() const requires(Order >= 1) { return coeff(0, 1); }
  constexpr T duu() const requires(Order >= 2) { return T(2) * coeff(2, 0); }
  constexpr T duv() const requires(Order >= 2) { return coeff(1, 1); }
  constexpr T dvv() const requires(Order >= 2) { return T(2) * coeff(0, 2); }

  Jet<T, (Order > 0 ? Order - 1 : 0)> d_du() const requires(Order >= 1) {
    Jet<T, Order - 1> r;
    for (int d = 1; d <= Order; ++d)
      for (int b = 0; b <= d - 1; ++b) {
        const int a = d - b;
        r.coeff(a - 1, b) = T(a) * coeff(a, b);
      }
    return r;
  }

  Jet<T, (Order > 0 ? Order - 1 : 0)> d_dv() const requires(Order >= 1) {
    Jet<T, Order - 1> r;
    for (int d = 1; d <= Order; ++d)
      for (int b = 1; b <= d; ++b) {
        const int a = d - b;
        r.coeff(a, b - 1) = T(b) * coeff(a, b);
      }
    return r;
  }

  template <int Lower>
  Jet<T, Lower> truncate() const requires(Lower <= Order) {
    Jet<T, Lower> r;
    for (std::size_t k = 0; k < Jet<T, Lower>::size; ++k) r.data()[k] = c_[k];
    return r;
  }

  constexpr std::array<T, size>& data() { return c_; }
  constexpr const std::array<T, size>& data() const { return c_; }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k < size; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k < size; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator/=(T s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

 private:
  static constexpr long factorial(int n) {
    long f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }

  std::array<T, size> c_;
};

using RJet2 = Jet<double, 2>;
using CJet2 = Jet<std::complex<double>, 2>;

template <typename T, int O>
Jet<T, O> operator+(Jet<T, O> a, const Jet<T, O>& b) { return a += b; }
template <typename T, int O>
Jet<T, O> operator-(Jet<T, O> a, const Jet<T, O>& b) { return a -= b; }
template <typename T, int O>
Jet<T, O> operator-(Jet<T, O> a) {
  for (auto& x : a.data()) x = -x;
  return a;
}
template <typename T, int O>
Jet<T, O> operator+(Jet<T, O> a, T s) { a.coeff(0, 0) += s; return a; }
template <typename T, int O>
Jet<T, O> operator+(T s, Jet<T, O> a) { a.coeff(0, 0) += s; return a; }
template <typename T, int O>
Jet<T, O> operator-(Jet<T, O> a, T s) { a.coeff(0, 0) -= s; return a; }
template <typename T, int O>
Jet<T, O> operator-(T s, const Jet<T, O>& a) { return Jet<T, O>(s) - a; }
template <typename T, int O>
Jet<T, O> operator*(Jet<T, O> a, T s) { return a *= s; }
template <typename T, int O>
Jet<T, O> operator*(T s, Jet<T, O> a) { return a *= s; }
template <typename T, int O>
Jet<T, O> operator/(Jet<T, O> a, T s) { return a /= s; }

// Truncated Cauchy product.
template <typename T, int O>
Jet<T, O> operator*(const Jet<T, O>& x, const Jet<T, O>& y) {
  Jet<T, O> r;
  for (int d1 = 0; d1 <= O; ++d1)
    for (int b1 = 0; b1 <= d1; ++b1) {
      const T xv = x.coeff(d1 - b1, b1);
      if (xv == T(0)) continue;
      for (int d2 = 0; d2 + d1 <= O; ++d2)
        for (int b2 = 0; b2 <= d2; ++b2)
          r.coeff(d1 - b1 + d2 - b2, b1 + b2) += xv * y.coeff(d2 - b2, b2);
    }
  return r;
}

// Series division by back-substitution; n / n yields exactly one.
template <typename T, int O>
Jet<T, O> operator/(const Jet<T, O>& n, const Jet<T, O>& d) {
  Jet<T, O> q;
  const T d0 = d.value();
  for (int deg = 0; deg <= O; ++deg)
    for (int b = 0; b <= deg; ++b) {
      const int a = deg - b;
      T acc = n.coeff(a, b);
      for (int a2 = 0; a2 <= a; ++a2)
        for (int b2 = 0; b2 <= b; ++b2) {
          if (a2 == a && b2 == b) continue;
          acc -= q.coeff(a2, b2) * d.coeff(a - a2, b - b2);
        }
      q.coeff(a, b) = acc / d0;
    }
  return q;
}

template <typename T, int O>
Jet<T, O> operator/(T s, const Jet<T, O>& d) { return Jet<T, O>(s) / d; }

// g(x) for a univariate g given its derivatives g^(k)(x0), k = 0..O.
template <typename T, int O>
Jet<T, O> compose(const Jet<T, O>& x, const std::array<T, O + 1>& derivs) {
  Jet<T, O> h = x;
  h.coeff(0, 0) = T(0);
  Jet<T, O> r(derivs[0]);
  Jet<T, O> power(T(1));
  T inv_fact(1);
  for (int k = 1; k <= O; ++k) {
    power = power * h;
    inv_fact /= T(k);
    r += power * (derivs[k] * inv_fact);
  }
  return r;
}

template <typename T, int O>
Jet<T, O> exp(const Jet<T, O>& x) {
  using std::exp;
  std::array<T, O + 1> d;
  d.fill(exp(x.value()));
  return compose(x, d);
}

template <typename T, int O>
Jet<T, O> log(const Jet<T, O>& x) {
  using std::log;
  std::array<T, O + 1> d;
  const T x0 = x.value();
  d[0] = log(x0);
  T p = T(1) / x0;
  for (int k = 1; k <= O; ++k) {
    d[k] = p;
    p *= -T(k) / x0;
  }
  return compose(x, d);
}

template <typename T, int O>
Jet<T, O> sqrt(const Jet<T, O>& x) {
  using std::sqrt;
  std::array<T, O + 1> d;
  const T x0 = x.value();
  T coef(1);
  T half(0.5);
  T p = sqrt(x0);
  for (int k = 0; k <= O; ++k) {
    d[k] = coef * p;
    coef *= half - T(k);
    p /= x0;
  }
  return compose(x, d);
}

template <typename T, int O>
Jet<T, O> sin(const Jet<T, O>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.value()), c = cos(x.value());
  std::array<T, O + 1> d;
  const T cycle[4] = {s, c, -s, -c};
  for (int k = 0; k <= O; ++k) d[k] = cycle[k % 4];
  return compose(x, d);
}

template <typename T, int O>
Jet<T, O> cos(const Jet<T, O>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.value()), c = cos(x.value());
  std::array<T, O + 1> d;
  const T cycle[4] = {c, -s, -c, s};
  for (int k = 0; k <= O; ++k) d[k] = cycle[k % 4];
  return compose(x, d);
}

template <typename T, int O>
Jet<T, O> sinh(const Jet<T, O>& x) {
  using std::cosh;
  using std::sinh;
  const T s = sinh(x.value()), c = cosh(x.value());
  std::array<T, O + 1> d;
  for (int k = 0; k <= O; ++k) d[k] = (k % 2 == 0) ? s : c;
  return compose(x, d);
}

template <typename T, int O>
Jet<T, O> cosh(const Jet<T, O>& x) {
  using std::cosh;
  using std::sinh;
  const T s = sinh(x.value()), c = cosh(x.value());
  std::array<T, O + 1> d;
  for (int k = 0; k <= O; ++k) d[k] = (k % 2 == 0) ? c : s;
  return compose(x, d);
}

template <int O>
Jet<std::complex<double>, O> conj(const Jet<std::complex<double>, O>& x) {
  Jet<std::complex<double>, O> r;
  for (std::size_t k = 0; k < r.size; ++k) r.data()[k] = std::conj(x.data()[k]);
  return r;
}

template <int O>
Jet<double, O> real(const Jet<std::complex<double>, O>& x) {
  Jet<double, O> r;
  for (std::size_t k = 0; k < r.size; ++k) r.data()[k] = x.data()[k].real();
  return r;
}

template <int O>
Jet<double, O> imag(const Jet<std::complex<double>, O>& x) {
  Jet<double, O> r;
  for (std::size_t k = 0; k < r.size; ++k) r.data()[k] = x.data()[k].imag();
  return r;
}

// |x|^2 as a real jet.
template <int O>
Jet<double, O> norm(const Jet<std::complex<double>, O>& x) {
  return real(x * conj(x));
}

inline RJet2 make_rjet2(double value, double du, double dv, double duu, double duv,
                        double dvv) {
  RJet2 j(value);
  j.coeff(1, 0) = du;
  j.coeff(0, 1) = dv;
  j.coeff(2, 0) = 0.5 * duu;
  j.coeff(1, 1) = duv;
  j.coeff(0, 2) = 0.5 * dvv;
  return j;
}

}  // namespace ribaucour
