#pragma once

// Lumped piecewise-linear operators on a RadialGrid.
//
// With hats φ_i and weight r dr:
//   mass      m_i    = ∫ φ_i r dr                       (the grid quadrature weights)
//   stiffness A_ij   = ∫ φ_i' φ_j' r dr                 (scalar Laplacian, -(1/r)(r φ')')
//   hoop      d_i    ≈ ∫ φ_i (1/r) dr, lumped           (the -u/r² term of the vector Laplacian)
// The hoop term is lumped so that (A + D) r = 0 row by row: rigid rotation is
// an exact discrete steady state.

#include <span>
#include <vector>

#include "vsl/radial_core.hpp"
#include "vsl/tridiagonal.hpp"

namespace vsl {

struct P1Operators {
  std::vector<double> mass;
  std::vector<double> stiff_diag;
  std::vector<double> stiff_off;  // A_{i,i+1} = A_{i+1,i}, size N
  std::vector<double> hoop;       // diagonal, hoop[0] = 0

  std::size_t size() const noexcept { return mass.size(); }

  /// y = (A + D) u for the vector Laplacian, or A u when with_hoop = false.
  std::vector<double> apply(std::span<const double> u, bool with_hoop) const {
    const std::size_t n = mass.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = (stiff_diag[i] + (with_hoop ? hoop[i] : 0.0)) * u[i];
      if (i > 0) y[i] += stiff_off[i - 1] * u[i - 1];
      if (i + 1 < n) y[i] += stiff_off[i] * u[i + 1];
    }
    return y;
  }
};

inline P1Operators assemble_p1(const RadialGrid& grid) {
  const std::size_t n = grid.size();
  P1Operators op;
  op.mass.assign(grid.weights().begin(), grid.weights().end());
  op.stiff_diag.assign(n, 0.0);
  op.stiff_off.assign(n - 1, 0.0);
  op.hoop.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = grid[i], b = grid[i + 1], h = b - a;
    const double k = 0.5 * (a + b) / h;
    op.stiff_diag[i] += k;
    op.stiff_diag[i + 1] += k;
    op.stiff_off[i] = -k;
  }
  for (std::size_t i = 1; i + 1 < n; ++i)
    op.hoop[i] = 0.5 * (grid.spacing(i - 1) + grid.spacing(i)) / grid[i];
  op.hoop[n - 1] = 0.5 * grid.spacing(n - 2) / grid[n - 1];
  return op;
}

/// Discrete weak form  b_i = ∫ (r w)' φ_i dr  of the radial curl, for the
/// piecewise-linear interpolant of w. Dividing by the lumped mass gives nodal
/// vorticity; summing gives r w |_0^1 = w(1) exactly.
inline std::vector<double> curl_load(std::span<const double> w, const RadialGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = grid[i], c = grid[i + 1], h = c - a;
    const double s = (w[i + 1] - w[i]) / h;
    const double la = w[i] + a * s, lc = w[i + 1] + c * s;  // (r w)' at the cell ends
    b[i] += h * (2.0 * la + lc) / 6.0;
    b[i + 1] += h * (la + 2.0 * lc) / 6.0;
  }
  return b;
}

}  // namespace vsl
