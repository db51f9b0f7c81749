#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vsl/errors.hpp"

namespace vsl {

/// Tridiagonal system: lower[i] multiplies x[i-1], upper[i] multiplies x[i+1].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }
};

/// Thomas algorithm. Throws NumericalError on a vanishing pivot.
inline std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  detail::require(rhs.size() == n, "solve_tridiagonal: size mismatch");
  if (n == 0) return {};
  std::vector<double> c(n), x(rhs.begin(), rhs.end());
  double pivot = a.diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal system");
  c[0] = a.upper[0] / pivot;
  x[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.lower[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal system");
    c[i] = (i + 1 < n) ? a.upper[i] / pivot : 0.0;
    x[i] = (x[i] - a.lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace vsl
