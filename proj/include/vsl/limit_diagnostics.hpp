#pragma once

// Limit conditions evaluated on one trajectory against the stationary Euler
// reference, and the verdict rule applied across a viscosity sweep.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsl/errors.hpp"
#include "vsl/ns_disk_solver.hpp"
#include "vsl/p1_operators.hpp"
#include "vsl/radial_core.hpp"
#include "vsl/tridiagonal.hpp"

namespace vsl {

/// Euler reference plus forcing; the sheet strength is a(t) = ū(1) - α(t).
struct SheetTarget {
  EulerReference euler;
  BoundaryForcing forcing;

  double amplitude(double t) const { return euler.u_bar.boundary_value() - forcing(t); }
};

enum class ConditionId { A, B, E2b, F2, Kato_i, Kato_ii, Wang_iiprime, Hminus1, H1dual };

inline constexpr std::array<ConditionId, 9> all_conditions = {
    ConditionId::A,      ConditionId::B,       ConditionId::E2b,
    ConditionId::F2,     ConditionId::Kato_i,  ConditionId::Kato_ii,
    ConditionId::Wang_iiprime, ConditionId::Hminus1, ConditionId::H1dual};

/// Conditions whose verdicts must agree. H1dual is the contrast: it keeps the
/// boundary measure and so does not vanish when a sheet forms.
inline constexpr std::array<ConditionId, 8> equivalence_set = {
    ConditionId::A,      ConditionId::B,       ConditionId::E2b,
    ConditionId::F2,     ConditionId::Kato_i,  ConditionId::Kato_ii,
    ConditionId::Wang_iiprime, ConditionId::Hminus1};

inline std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::A: return "A";
    case ConditionId::B: return "B";
    case ConditionId::E2b: return "E2b";
    case ConditionId::F2: return "F2";
    case ConditionId::Kato_i: return "Kato_i";
    case ConditionId::Kato_ii: return "Kato_ii";
    case ConditionId::Wang_iiprime: return "Wang_iiprime";
    case ConditionId::Hminus1: return "Hminus1";
    case ConditionId::H1dual: return "H1dual";
  }
  return "?";
}

inline ConditionId parse_condition(std::string_view s) {
  for (auto id : all_conditions)
    if (to_string(id) == s) return id;
  throw InvalidArgument("unknown condition id '" + std::string(s) + "'");
}

enum class Verdict { converges, stalls, diverges };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converges: return "converges";
    case Verdict::stalls: return "stalls";
    case Verdict::diverges: return "diverges";
  }
  return "?";
}

inline Verdict parse_verdict(std::string_view s) {
  for (auto v : {Verdict::converges, Verdict::stalls, Verdict::diverges})
    if (to_string(v) == s) return v;
  throw InvalidArgument("unknown verdict '" + std::string(s) + "'");
}

namespace detail {
inline void require_grid(const Trajectory& traj, const RadialGrid& grid, const char* where) {
  if (traj.fields.empty()) throw InvalidArgument(std::string(where) + ": empty trajectory");
  require_same_grid(traj.grid(), grid, where);
}

inline double pairing_disk(std::span<const double> a, std::span<const double> b, const RadialGrid& g) {
  const auto w = g.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return 2.0 * std::numbers::pi * s;
}
}  // namespace detail

/// ‖u(t) - ū‖_{L²(D)} per output time.
inline std::vector<double> energy_distance_series(const Trajectory& traj, const EulerReference& euler) {
  detail::require_grid(traj, euler.u_bar.grid(), "energy_distance");
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& u : traj.fields) out.push_back(l2_distance_disk(u, euler.u_bar));
  return out;
}

inline double energy_distance_sup(const Trajectory& traj, const EulerReference& euler) {
  const auto s = energy_distance_series(traj, euler);
  return *std::max_element(s.begin(), s.end());
}

/// (u(t), w)_{L²(D)} per output time.
inline std::vector<double> velocity_pairing(const Trajectory& traj, const RadialField& w) {
  detail::require_grid(traj, w.grid(), "velocity_pairing");
  std::vector<double> out;
  for (const auto& u : traj.fields) out.push_back(detail::pairing_disk(u.values(), w.values(), w.grid()));
  return out;
}

/// (ω(t), f)_{L²(D)} per output time.
inline std::vector<double> vorticity_pairing(const Trajectory& traj, const TestFunction& f) {
  if (traj.fields.empty()) throw InvalidArgument("vorticity_pairing: empty trajectory");
  const auto fs = f.sample(traj.grid());
  std::vector<double> out;
  for (const auto& u : traj.fields) {
    const auto omega = vorticity_radial(u);
    out.push_back(detail::pairing_disk(omega.values(), fs, traj.grid()));
  }
  return out;
}

/// (ω̄, f) - 2π a(t) f(1).
inline double sheet_target(const SheetTarget& sheet, const TestFunction& f, double t) {
  const auto& g = sheet.euler.omega_bar.grid();
  const double bulk = detail::pairing_disk(sheet.euler.omega_bar.values(), f.sample(g), g);
  return bulk - 2.0 * std::numbers::pi * sheet.amplitude(t) * f.trace();
}

struct KatoRegion {
  bool full = true;
  double c = 1.0;

  static KatoRegion full_domain() { return {true, 1.0}; }
  static KatoRegion kato_layer(double c) { return {false, c}; }
};

/// ν ∫_0^T ‖∇u‖²_{L²(region)} dt over the output times: trapezoid between
/// outputs, with the first value held on [0, t_1].
inline double kato_functional(const Trajectory& traj, KatoRegion region) {
  if (traj.fields.empty()) throw InvalidArgument("kato_functional: empty trajectory");
  double a = 0.0;
  if (!region.full) {
    if (!(region.c > 0.0)) throw InvalidArgument("kato_functional: layer constant must be positive");
    if (region.c * traj.nu >= 1.0) throw InvalidArgument("kato_functional: layer width c*nu must be below 1");
    a = 1.0 - region.c * traj.nu;
  }
  std::vector<double> g;
  g.reserve(traj.size());
  for (const auto& u : traj.fields) g.push_back(grad_norm_sq_disk(u, a));
  double integral = traj.times.front() * g.front();
  for (std::size_t k = 1; k < g.size(); ++k)
    integral += 0.5 * (traj.times[k] - traj.times[k - 1]) * (g[k] + g[k - 1]);
  return traj.nu * integral;
}

/// Tangential-gradient functional. Radial fields have no θ-dependence, so it vanishes identically.
inline double wang_iiprime(const Trajectory& traj) {
  if (traj.fields.empty()) throw InvalidArgument("wang_iiprime: empty trajectory");
  return 0.0;
}

enum class DualMode { Hminus1, H1dual };

/// Dual norm of a radial distribution g (as L² density), tested against radial H¹_0 or H¹.
///
/// Hminus1: solve A φ = M g with φ(1) = 0;  H1dual: (A + M) φ = M g with natural
/// boundary condition. In both cases the norm is sqrt(2π φᵀ M g), the energy of
/// the Riesz representative.
inline double dual_norm(const RadialField& g, DualMode mode) {
  const auto& grid = g.grid();
  const auto op = assemble_p1(grid);
  const std::size_t n = grid.size();
  const auto m = grid.weights();
  std::vector<double> load(n);
  for (std::size_t i = 0; i < n; ++i) load[i] = m[i] * g[i];

  const std::size_t k = mode == DualMode::Hminus1 ? n - 1 : n;
  Tridiagonal a(k);
  std::vector<double> rhs(load.begin(), load.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t i = 0; i < k; ++i) {
    a.diag[i] = op.stiff_diag[i] + (mode == DualMode::H1dual ? m[i] : 0.0);
    if (i > 0) a.lower[i] = op.stiff_off[i - 1];
    if (i + 1 < k) a.upper[i] = op.stiff_off[i];
  }
  const auto phi = solve_tridiagonal(a, rhs);
  double e = 0.0;
  for (std::size_t i = 0; i < k; ++i) e += phi[i] * rhs[i];
  return std::sqrt(2.0 * std::numbers::pi * std::max(e, 0.0));
}

/// ω(t) - ω̄ as a scalar field.
inline RadialField vorticity_difference(const RadialField& u, const EulerReference& euler) {
  require_same_grid(u.grid(), euler.u_bar.grid(), "vorticity_difference");
  const auto omega = vorticity_radial(u);
  std::vector<double> d(omega.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = omega[i] - euler.omega_bar[i];
  return RadialField(u.grid_ptr(), std::move(d), FieldKind::scalar);
}

inline TestFunction amplitude_probe() {
  return TestFunction("r2", [](double r) { return r * r; }, [](double r) { return 2.0 * r; }, TestSpace::H1);
}

/// [(ω̄, f) - (ω(t), f)] / (2π f(1)) for the probe f.
inline double sheet_amplitude_estimate(const Trajectory& traj, const EulerReference& euler, double t,
                                       const TestFunction& f = amplitude_probe()) {
  if (f.trace() == 0.0) throw InvalidArgument("sheet_amplitude_estimate: probe trace must be nonzero");
  const auto& g = euler.omega_bar.grid();
  const auto d = vorticity_difference(traj.at(t), euler);
  return -detail::pairing_disk(d.values(), f.sample(g), g) / (2.0 * std::numbers::pi * f.trace());
}

/// (H¹(D))' norm of the boundary functional f ↦ 2π a f(1) = ∫_Γ a f, restricted to
/// radial f. Its Riesz representative solves -Δφ + φ = 0, ∂_n φ = a, i.e.
/// φ = a I0(r)/I1(1), giving the norm |a| sqrt(2π I0(1)/I1(1)).
inline double sheet_measure_dual_norm(double a) {
  auto bessel_i = [](int order, double x) {
    double term = std::pow(0.5 * x, order) / std::tgamma(order + 1.0), sum = 0.0;
    for (int k = 0; k < 60; ++k) {
      sum += term;
      term *= 0.25 * x * x / ((k + 1.0) * (k + 1.0 + order));
    }
    return sum;
  };
  return std::abs(a) * std::sqrt(2.0 * std::numbers::pi * bessel_i(0, 1.0) / bessel_i(1, 1.0));
}

struct VerdictRule {
  double ratio = 0.5;      // last must fall below ratio · first
  double zero_tol = 1e-6;  // series entirely below this counts as converged
};

/// values ordered by decreasing ν. converges: all below zero_tol, or monotone
/// non-increasing with last < ratio · first. diverges: last > first / ratio.
/// stalls: anything else.
inline Verdict classify_verdict(std::span<const double> values, const VerdictRule& rule = {}) {
  if (values.size() < 2) throw InvalidArgument("classify_verdict: need at least two values");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("classify_verdict: non-finite value");
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak <= rule.zero_tol) return Verdict::converges;
  bool monotone = true;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1]) monotone = false;
  if (monotone && values.back() < rule.ratio * values.front()) return Verdict::converges;
  return std::abs(values.back()) * rule.ratio > std::abs(values.front()) ? Verdict::diverges : Verdict::stalls;
}

struct DiagnosticOptions {
  std::vector<TestFunction> probes = default_probes();
  std::vector<std::function<double(double)>> velocity_probes = {
      [](double r) { return r; }, [](double r) { return r * (1.0 - r * r); }};
  double kato_layer_c = 1.0;
};

/// Everything measured on one trajectory.
struct NuDiagnostics {
  double nu = 0.0;
  std::array<double, all_conditions.size()> value{};  // indexed by ConditionId
  std::vector<double> times;
  std::vector<double> energy_distance;
  std::vector<double> hminus1;
  std::vector<double> h1dual;
  std::vector<double> amplitude_estimate;
  std::vector<double> amplitude_target;
  double circulation_error = 0.0;       // max |(ω, 1) - 2πα(t)|
  double pairing_energy_excess = 0.0;   // max of lhs - rhs over probes and times
  double dual_domination_excess = 0.0;  // max of Hminus1 - energy distance
  double h1dual_oracle_final = 0.0;

  double& operator[](ConditionId id) { return value[static_cast<std::size_t>(id)]; }
  double operator[](ConditionId id) const { return value[static_cast<std::size_t>(id)]; }
};

inline NuDiagnostics evaluate_conditions(const Trajectory& traj, const SheetTarget& sheet,
                                         const DiagnosticOptions& opt = {}) {
  const auto& euler = sheet.euler;
  detail::require_grid(traj, euler.u_bar.grid(), "evaluate_conditions");
  const auto& grid = traj.grid();
  const double two_pi = 2.0 * std::numbers::pi;

  NuDiagnostics d;
  d.nu = traj.nu;
  d.times = traj.times;
  d.energy_distance = energy_distance_series(traj, euler);

  std::vector<std::vector<double>> probe_samples;
  std::vector<double> probe_grad, probe_bulk;
  for (const auto& f : opt.probes) {
    probe_samples.push_back(f.sample(grid));
    probe_grad.push_back(f.grad_norm_disk());
    probe_bulk.push_back(detail::pairing_disk(euler.omega_bar.values(), probe_samples.back(), grid));
  }
  std::vector<std::vector<double>> vprobes;
  std::vector<double> vprobe_ref;
  for (const auto& w : opt.velocity_probes) {
    std::vector<double> s(grid.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = w(grid[i]);
    vprobe_ref.push_back(detail::pairing_disk(euler.u_bar.values(), s, grid));
    vprobes.push_back(std::move(s));
  }

  const auto amp_probe = amplitude_probe().sample(grid);
  const std::vector<double> ones(grid.size(), 1.0);
  double a_sup = 0.0, e2b_sup = 0.0, f2_sup = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const auto& u = traj.fields[k];
    const auto diff = vorticity_difference(u, euler);
    const auto omega = vorticity_radial(u);
    const double a_t = sheet.amplitude(t);

    for (std::size_t p = 0; p < vprobes.size(); ++p)
      a_sup = std::max(a_sup, std::abs(detail::pairing_disk(u.values(), vprobes[p], grid) - vprobe_ref[p]));

    for (std::size_t p = 0; p < opt.probes.size(); ++p) {
      const double pairing = detail::pairing_disk(omega.values(), probe_samples[p], grid);
      const double target = probe_bulk[p] - two_pi * a_t * opt.probes[p].trace();
      const double err = std::abs(pairing - target);
      if (opt.probes[p].space() == TestSpace::H1_0) f2_sup = std::max(f2_sup, err);
      else e2b_sup = std::max(e2b_sup, err);
      d.pairing_energy_excess =
          std::max(d.pairing_energy_excess, err - d.energy_distance[k] * probe_grad[p]);
    }

    d.circulation_error = std::max(
        d.circulation_error, std::abs(detail::pairing_disk(omega.values(), ones, grid) - two_pi * traj.forcing(t)));
    d.hminus1.push_back(dual_norm(diff, DualMode::Hminus1));
    d.h1dual.push_back(dual_norm(diff, DualMode::H1dual));
    d.dual_domination_excess = std::max(d.dual_domination_excess, d.hminus1.back() - d.energy_distance[k]);
    d.amplitude_estimate.push_back(-detail::pairing_disk(diff.values(), amp_probe, grid) / two_pi);
    d.amplitude_target.push_back(a_t);
  }
  d.h1dual_oracle_final = sheet_measure_dual_norm(d.amplitude_target.back());

  d[ConditionId::A] = a_sup;
  d[ConditionId::B] = *std::max_element(d.energy_distance.begin(), d.energy_distance.end());
  d[ConditionId::E2b] = e2b_sup;
  d[ConditionId::F2] = f2_sup;
  d[ConditionId::Kato_i] = kato_functional(traj, KatoRegion::full_domain());
  d[ConditionId::Kato_ii] = kato_functional(traj, KatoRegion::kato_layer(opt.kato_layer_c));
  d[ConditionId::Wang_iiprime] = wang_iiprime(traj);
  d[ConditionId::Hminus1] = *std::max_element(d.hminus1.begin(), d.hminus1.end());
  d[ConditionId::H1dual] = *std::max_element(d.h1dual.begin(), d.h1dual.end());
  return d;
}

}  // namespace vsl
