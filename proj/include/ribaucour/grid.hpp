#pragma once

// Uniform row-major sampling grids and the data-parallel loop used by every
// per-sample kernel.  Each kernel has a serial reference path kept so the
// OpenMP path can be checked for bitwise agreement.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ribaucour {

struct Domain {
  double u0 = -1, u1 = 1, v0 = -1, v1 = 1;

  // "u0:u1:v0:v1"
  static Domain parse(std::string_view text);
  std::string to_string() const;
};

struct Grid {
  Domain domain;
  int nu = 2, nv = 2;

  Grid() = default;
  Grid(Domain d, int nu_, int nv_) : domain(d), nu(nu_), nv(nv_) {
    if (nu < 2 || nv < 2) throw std::invalid_argument("grid needs at least 2x2 samples");
  }

  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nu) + static_cast<std::size_t>(i);
  }
  double u(int i) const { return domain.u0 + (domain.u1 - domain.u0) * i / (nu - 1); }
  double v(int j) const { return domain.v0 + (domain.v1 - domain.v0) * j / (nv - 1); }
  double du() const { return (domain.u1 - domain.u0) / (nu - 1); }
  double dv() const { return (domain.v1 - domain.v0) / (nv - 1); }
  std::complex<double> z(int i, int j) const { return {u(i), v(j)}; }
};

enum class Execution { serial, parallel };

// f(i, j) for every node, row-major.  f must be safe to call concurrently.
template <typename F>
void for_each_node(const Grid& grid, Execution exec, F&& f) {
  const long n = static_cast<long>(grid.size());
  const int nu = grid.nu;
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < n; ++k) f(static_cast<int>(k % nu), static_cast<int>(k / nu));
  } else {
    for (long k = 0; k < n; ++k) f(static_cast<int>(k % nu), static_cast<int>(k / nu));
  }
}

// Evaluate a per-node kernel into a row-major vector.
template <typename T, typename F>
std::vector<T> map_grid(const Grid& grid, Execution exec, F&& f) {
  std::vector<T> out(grid.size());
  for_each_node(grid, exec, [&](int i, int j) { out[grid.index(i, j)] = f(i, j); });
  return out;
}

}  // namespace ribaucour
