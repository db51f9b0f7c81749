#pragma once

// Radially symmetric Navier-Stokes on the unit disk.
//
// For u = u_θ(r, t) e_θ the pressure decouples and the momentum equation is
//   ∂_t u = ν (u'' + u'/r - u/r²),   u(0, t) = 0,   u(1, t) = α(t).
// Space: lumped P1 operators (p1_operators.hpp). Time: Crank-Nicolson with
// four half-size backward Euler steps at start-up to damp the incompatible
// initial boundary jump.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vsl/errors.hpp"
#include "vsl/p1_operators.hpp"
#include "vsl/radial_core.hpp"
#include "vsl/tridiagonal.hpp"

namespace vsl {

/// Boundary tangential velocity α(t), piecewise linear through a table.
class BoundaryForcing {
public:
  BoundaryForcing(std::vector<double> times, std::vector<double> values)
      : times_(std::move(times)), values_(std::move(values)) {
    detail::require(times_.size() >= 2 && times_.size() == values_.size(),
                    "BoundaryForcing: need at least two (t, alpha) samples");
    detail::require(times_.front() == 0.0, "BoundaryForcing: table must start at t = 0");
    for (std::size_t i = 0; i < times_.size(); ++i) {
      detail::require(std::isfinite(values_[i]) && std::isfinite(times_[i]),
                      "BoundaryForcing: non-finite sample");
      if (i > 0)
        detail::require(times_[i] > times_[i - 1], "BoundaryForcing: times must be strictly increasing");
    }
  }

  static BoundaryForcing constant(double alpha, double T) {
    detail::require(T > 0.0, "BoundaryForcing: T must be positive");
    return BoundaryForcing({0.0, T}, {alpha, alpha});
  }

  /// α(t) = amplitude · ½(1 - cos(2πt/T)), tabulated on `samples` intervals.
  static BoundaryForcing cosine_ramp(double amplitude, double T, std::size_t samples = 4096) {
    detail::require(T > 0.0 && samples >= 1, "BoundaryForcing: bad cosine ramp");
    std::vector<double> t(samples + 1), a(samples + 1);
    for (std::size_t i = 0; i <= samples; ++i) {
      t[i] = T * static_cast<double>(i) / static_cast<double>(samples);
      a[i] = amplitude * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t[i] / T));
    }
    t.back() = T;
    return BoundaryForcing(std::move(t), std::move(a));
  }

  double operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
    return (1.0 - w) * values_[k - 1] + w * values_[k];
  }

  double end_time() const { return times_.back(); }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }

  bool is_constant() const {
    return std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
  }

private:
  std::vector<double> times_;
  std::vector<double> values_;
};

struct Trajectory {
  double nu = 0.0;
  double T = 0.0;
  std::vector<double> times;
  std::vector<RadialField> fields;
  BoundaryForcing forcing = BoundaryForcing::constant(0.0, 1.0);

  const RadialGrid& grid() const { return fields.front().grid(); }
  std::size_t size() const noexcept { return times.size(); }

  const RadialField& at(double t) const {
    for (std::size_t k = 0; k < times.size(); ++k)
      if (times[k] == t) return fields[k];
    throw InvalidArgument("Trajectory: t = " + std::to_string(t) + " is not an output time");
  }
};

/// ω = (1/r)(r u)', as the lumped projection of the weak curl. Exact (≡ 2) for
/// u = r, including r = 0, and 2π ∫ ω r dr = 2π u(1) to rounding.
inline RadialField vorticity_radial(const RadialField& u) {
  if (u.kind() != FieldKind::velocity_theta)
    throw InvalidArgument("vorticity_radial: expects an azimuthal velocity");
  const auto& grid = u.grid();
  auto b = curl_load(u.values(), grid);
  const auto m = grid.weights();
  for (std::size_t i = 0; i < b.size(); ++i) b[i] /= m[i];
  return RadialField(u.grid_ptr(), std::move(b), FieldKind::vorticity);
}

struct EulerReference {
  RadialField u_bar;
  RadialField omega_bar;
  double B;  // ∫_D ω̄
};

/// Radial data are steady Euler solutions: ū(t) = u0.
inline EulerReference euler_reference(const RadialField& u0) {
  if (u0.kind() != FieldKind::velocity_theta)
    throw InvalidArgument("euler_reference: expects an azimuthal velocity");
  auto omega = vorticity_radial(u0);
  const double B = 2.0 * std::numbers::pi * integrate_rdr(omega);
  return EulerReference{u0, std::move(omega), B};
}

struct SolverOptions {
  double dt = 1e-4;
  std::size_t startup_steps = 4;           // backward Euler steps of size dt/2
  std::size_t min_layer_nodes = 8;          // boundary-layer resolution rule
  std::function<void(const std::string&)> warn;  // receives resolution warnings
};

/// Number of nodes inside the layer r ≥ 1 - sqrt(νT).
inline std::size_t boundary_layer_nodes(const RadialGrid& grid, double nu, double T) {
  return grid.nodes_within(std::sqrt(nu * T));
}

inline Trajectory solve_ns_radial(const RadialField& u0, double nu, const BoundaryForcing& forcing,
                                  double T, std::vector<double> output_times,
                                  const SolverOptions& opt = {}) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("T must be positive");
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw InvalidArgument("dt must be positive");
  if (u0.kind() != FieldKind::velocity_theta)
    throw InvalidArgument("solve_ns_radial: initial data must be an azimuthal velocity");
  if (output_times.empty()) throw InvalidArgument("solve_ns_radial: no output times");
  for (std::size_t k = 0; k < output_times.size(); ++k) {
    const double t = output_times[k];
    if (!(t > 0.0) || t > T) throw InvalidArgument("solve_ns_radial: output times must lie in (0, T]");
    if (k > 0 && !(t > output_times[k - 1]))
      throw InvalidArgument("solve_ns_radial: output times must be strictly increasing");
  }

  const auto& grid = u0.grid();
  const std::size_t n = grid.size();
  if (opt.warn && boundary_layer_nodes(grid, nu, T) < opt.min_layer_nodes)
    opt.warn("boundary layer under-resolved: " + std::to_string(boundary_layer_nodes(grid, nu, T)) +
             " nodes in [1 - sqrt(nu T), 1], want " + std::to_string(opt.min_layer_nodes));

  const P1Operators op = assemble_p1(grid);
  std::vector<double> u(u0.values().begin(), u0.values().end());
  std::vector<double> k_diag(n);
  for (std::size_t i = 0; i < n; ++i) k_diag[i] = op.stiff_diag[i] + op.hoop[i];

  const std::size_t m = n - 2;  // interior unknowns 1..n-2
  Tridiagonal sys(m);
  std::vector<double> rhs(m);

  double t = 0.0;
  std::size_t step = 0;

  auto advance = [&](double h, double theta) {
    const double t_new = t + h;
    const double a_new = forcing(t_new);
    const double c_impl = theta * h * nu, c_expl = (1.0 - theta) * h * nu;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = j + 1;
      sys.diag[j] = op.mass[i] + c_impl * k_diag[i];
      sys.lower[j] = c_impl * op.stiff_off[i - 1];
      sys.upper[j] = c_impl * op.stiff_off[i];
      const double ku = k_diag[i] * u[i] + op.stiff_off[i - 1] * u[i - 1] + op.stiff_off[i] * u[i + 1];
      rhs[j] = op.mass[i] * u[i] - c_expl * ku;
    }
    rhs[m - 1] -= c_impl * op.stiff_off[n - 2] * a_new;
    const auto x = solve_tridiagonal(sys, rhs);
    ++step;
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(x[j])) throw NumericalBlowup(step, t_new);
      u[j + 1] = x[j];
    }
    u[0] = 0.0;
    u[n - 1] = a_new;
    t = t_new;
  };

  Trajectory traj;
  traj.nu = nu;
  traj.T = T;
  traj.forcing = forcing;
  traj.times.reserve(output_times.size());
  traj.fields.reserve(output_times.size());

  for (const double target : output_times) {
    if (step < opt.startup_steps) {
      const std::size_t left = opt.startup_steps - step;
      const double h = std::min(0.5 * opt.dt, (target - t) / static_cast<double>(left));
      for (std::size_t s = 0; s < left; ++s) advance(h, 1.0);
    }
    const double span = target - t;
    if (span > 1e-12 * target) {
      const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / opt.dt - 1e-9)));
      const double h = span / static_cast<double>(count);
      for (std::size_t s = 0; s + 1 < count; ++s) advance(h, 0.5);
      advance(target - t, 0.5);
    }
    t = target;
    traj.times.push_back(target);
    traj.fields.emplace_back(u0.grid_ptr(), u, FieldKind::velocity_theta);
  }
  return traj;
}

/// Energy ‖u‖²_{L²(D)}.
inline double energy_disk(const RadialField& u) {
  const double n = l2_norm_disk(u);
  return n * n;
}

}  // namespace vsl
