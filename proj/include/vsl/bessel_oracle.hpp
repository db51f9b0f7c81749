#pragma once

// Exact no-slip solution by Fourier-Bessel series:
//   u(r, t) = Σ_n c_n J1(j_n r) exp(-ν j_n² t),   c_n = 2 ∫ u0 J1(j_n r) r dr / J2(j_n)²
// with j_n the positive zeros of J1.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "vsl/errors.hpp"
#include "vsl/quadrature.hpp"
#include "vsl/radial_core.hpp"

namespace vsl {

inline double bessel_j(int order, double x) { return std::cyl_bessel_j(static_cast<double>(order), x); }

/// First n positive zeros of J1, by Newton from (k + 1/4)π using J1' = J0 - J1/x.
inline std::vector<double> bessel_j1_zeros(std::size_t n) {
  std::vector<double> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    double x = (static_cast<double>(k + 1) + 0.25) * std::numbers::pi;
    for (int iter = 0; iter < 50; ++iter) {
      const double j1 = bessel_j(1, x);
      const double dx = j1 / (bessel_j(0, x) - j1 / x);
      x -= dx;
      if (std::abs(dx) < 1e-15 * x) break;
    }
    z[k] = x;
  }
  return z;
}

struct BesselSeries {
  std::vector<double> zeros;
  std::vector<double> coefficients;

  double operator()(double r, double nu, double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < zeros.size(); ++k)
      s += coefficients[k] * bessel_j(1, zeros[k] * r) * std::exp(-nu * zeros[k] * zeros[k] * t);
    return s;
  }

  /// |c_M| exp(-ν j_M² t) for the last retained mode.
  double truncation_estimate(double nu, double t) const {
    const double j = zeros.back();
    return std::abs(coefficients.back()) * std::exp(-nu * j * j * t);
  }
};

/// Coefficients for a profile u0(r), projected by composite Gauss-Legendre.
template <class F>
BesselSeries bessel_series(F&& u0, std::size_t n_modes) {
  if (n_modes < 1) throw InvalidArgument("bessel_series: need at least one mode");
  BesselSeries s{bessel_j1_zeros(n_modes), std::vector<double>(n_modes)};
  static const GaussRule rule = gauss_legendre(10);
  for (std::size_t k = 0; k < n_modes; ++k) {
    const double j = s.zeros[k];
    const std::size_t panels = 16 + 2 * (k + 1);
    const double proj = integrate_composite([&](double r) { return u0(r) * bessel_j(1, j * r) * r; },
                                            0.0, 1.0, panels, rule);
    const double j2 = bessel_j(2, j);
    s.coefficients[k] = 2.0 * proj / (j2 * j2);
  }
  return s;
}

/// Closed form for u0 = r:  ∫ r² J1(j r) dr = J2(j)/j,  so c_n = 2 / (j_n J2(j_n)).
inline BesselSeries bessel_series_rigid(std::size_t n_modes) {
  if (n_modes < 1) throw InvalidArgument("bessel_series: need at least one mode");
  BesselSeries s{bessel_j1_zeros(n_modes), std::vector<double>(n_modes)};
  for (std::size_t k = 0; k < n_modes; ++k)
    s.coefficients[k] = 2.0 / (s.zeros[k] * bessel_j(2, s.zeros[k]));
  return s;
}

struct OracleField {
  RadialField field;
  double truncation_estimate;
};

inline OracleField evaluate_series(const BesselSeries& s, const GridPtr& grid, double nu, double t) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  if (!(t >= 0.0)) throw InvalidArgument("bessel oracle: t must be nonnegative");
  auto f = RadialField::sample(grid, FieldKind::velocity_theta, [&](double r) { return s(r, nu, t); });
  return OracleField{std::move(f), s.truncation_estimate(nu, t)};
}

/// No-slip oracle for nodal initial data (projected through its piecewise-linear interpolant).
inline OracleField bessel_series_oracle(const RadialField& u0, double nu, double t, std::size_t n_modes) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  const auto& g = u0.grid();
  const auto r = g.nodes();
  const auto v = u0.values();
  auto interp = [&](double x) {
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    if (it == r.end()) return v.back();
    const auto i = static_cast<std::size_t>(it - r.begin());
    const double w = (x - r[i - 1]) / (r[i] - r[i - 1]);
    return (1.0 - w) * v[i - 1] + w * v[i];
  };
  const auto series = bessel_series(interp, n_modes);
  return evaluate_series(series, u0.grid_ptr(), nu, t);
}

}  // namespace vsl
