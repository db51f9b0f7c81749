#pragma once

// Viscosity sweeps: one solve + diagnostics per ν, merged in decreasing-ν order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vsl/errors.hpp"
#include "vsl/limit_diagnostics.hpp"
#include "vsl/ns_disk_solver.hpp"
#include "vsl/radial_core.hpp"

namespace vsl {

enum class ForcingKind { constant, cosine, table };

struct SweepConfig {
  std::string name = "sweep";
  std::string u0 = "rigid";  // rigid: r, compatible: r - r³, zero
  ForcingKind forcing = ForcingKind::constant;
  double alpha = 0.0;  // constant value, or cosine amplitude
  std::vector<double> alpha_times;
  std::vector<double> alpha_values;
  double T = 1.0;
  std::vector<double> nus;
  std::size_t N = 2048;
  Grading grading = Grading::sine_clustered;
  double dt = 1e-4;
  double dt_kappa = 0.0;  // when positive, dt = dt_kappa · min spacing
  std::size_t outputs = 32;
  double first_output = 1e-3;  // first output time as a fraction of T
  VerdictRule rule;
  double kato_c = 1.0;

  void validate() const {
    if (nus.empty()) throw InvalidArgument("sweep: nus must not be empty");
    if (nus.size() < 3) throw InvalidArgument("sweep: need at least 3 viscosities");
    for (std::size_t i = 0; i < nus.size(); ++i) {
      if (!(nus[i] > 0.0) || !std::isfinite(nus[i])) throw InvalidArgument("nu must be positive");
      if (i > 0 && !(nus[i] < nus[i - 1])) throw InvalidArgument("sweep: nus must be strictly decreasing");
    }
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    if (N < 2) throw InvalidArgument("N must be at least 2");
    if (!(dt > 0.0) && !(dt_kappa > 0.0)) throw InvalidArgument("dt must be positive");
    if (outputs < 1) throw InvalidArgument("outputs must be at least 1");
    if (!(first_output > 0.0 && first_output <= 1.0)) throw InvalidArgument("first_output must lie in (0, 1]");
    if (u0 != "rigid" && u0 != "compatible" && u0 != "zero") throw InvalidArgument("unknown u0 profile '" + u0 + "'");
    if (!(rule.ratio > 0.0 && rule.ratio < 1.0)) throw InvalidArgument("verdict_ratio must lie in (0, 1)");
  }

  GridPtr make_grid() const { return make_graded_grid(N, grading); }

  RadialField initial_field(const GridPtr& grid) const {
    if (u0 == "rigid") return RadialField::sample(grid, FieldKind::velocity_theta, [](double r) { return r; });
    if (u0 == "compatible")
      return RadialField::sample(grid, FieldKind::velocity_theta, [](double r) { return r - r * r * r; });
    if (u0 == "zero") return RadialField::zeros(grid, FieldKind::velocity_theta);
    throw InvalidArgument("unknown u0 profile '" + u0 + "'");
  }

  BoundaryForcing make_forcing() const {
    switch (forcing) {
      case ForcingKind::constant: return BoundaryForcing::constant(alpha, T);
      case ForcingKind::cosine: return BoundaryForcing::cosine_ramp(alpha, T);
      case ForcingKind::table: return BoundaryForcing(alpha_times, alpha_values);
    }
    throw InvalidArgument("unknown forcing");
  }

  double time_step(const RadialGrid& grid) const { return dt_kappa > 0.0 ? dt_kappa * grid.min_spacing() : dt; }

  /// outputs log-spaced times from first_output · T to T.
  std::vector<double> output_times() const {
    std::vector<double> t(outputs);
    if (outputs == 1) return {T};
    const double lo = std::log(first_output), step = -lo / static_cast<double>(outputs - 1);
    for (std::size_t k = 0; k < outputs; ++k) t[k] = T * std::exp(lo + step * static_cast<double>(k));
    t.back() = T;
    return t;
  }
};

/// Calls solve_ns_radial; swappable for fault injection.
struct RadialSolver {
  Trajectory operator()(const RadialField& u0, double nu, const BoundaryForcing& forcing, double T,
                        const std::vector<double>& times, const SolverOptions& opt) const {
    return solve_ns_radial(u0, nu, forcing, T, times, opt);
  }
};

struct NuOutcome {
  double nu = 0.0;
  bool ok = false;
  std::string error;
  std::vector<std::string> warnings;
  NuDiagnostics diag;
  std::vector<double> r, u_final, omega_final;
  double seconds = 0.0;
};

struct ConditionSummary {
  ConditionId id;
  std::vector<double> values;  // decreasing ν
  std::optional<double> fitted_rate;
  std::optional<Verdict> verdict;
};

struct SweepResult {
  SweepConfig config;
  std::vector<NuOutcome> per_nu;  // decreasing ν
  std::vector<ConditionSummary> conditions;
  double B = 0.0;
  double euler_boundary = 0.0;  // ū(1)

  bool complete() const {
    return !per_nu.empty() && std::all_of(per_nu.begin(), per_nu.end(), [](const auto& o) { return o.ok; });
  }
  const ConditionSummary& condition(ConditionId id) const {
    for (const auto& c : conditions)
      if (c.id == id) return c;
    throw InvalidArgument("SweepResult: missing condition " + std::string(to_string(id)));
  }
};

/// Least-squares slope of log(value) against log(nu) over points[begin, end).
inline double fit_rate(const std::vector<std::pair<double, double>>& points, std::size_t begin, std::size_t end) {
  if (end > points.size() || begin >= end || end - begin < 2) throw InvalidArgument("fit_rate: need at least 2 points in the window");
  double sx = 0.0, sy = 0.0;
  const double n = static_cast<double>(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0)) throw InvalidArgument("fit_rate: values must be positive");
    sx += std::log(points[i].first);
    sy += std::log(points[i].second);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dx = std::log(points[i].first) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(points[i].second) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_rate: viscosities must differ");
  return sxy / sxx;
}

inline std::vector<std::pair<double, double>> condition_points(const SweepResult& res, ConditionId id) {
  std::vector<std::pair<double, double>> pts;
  const auto& c = res.condition(id);
  for (std::size_t i = 0; i < res.per_nu.size(); ++i) pts.emplace_back(res.per_nu[i].nu, c.values[i]);
  return pts;
}

/// Verdicts and rates from the per-ν values. The rate window drops the largest ν.
inline void summarize_conditions(SweepResult& res) {
  res.conditions.clear();
  for (auto id : all_conditions) {
    ConditionSummary s{id, {}, std::nullopt, std::nullopt};
    for (const auto& o : res.per_nu) s.values.push_back(o.ok ? o.diag[id] : std::nan(""));
    if (res.complete()) {
      s.verdict = classify_verdict(s.values, res.config.rule);
      const bool positive = std::all_of(s.values.begin() + 1, s.values.end(),
                                        [&](double v) { return v > res.config.rule.zero_tol; });
      if (s.values.size() >= 3 && positive) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.values.size(); ++i) pts.emplace_back(res.per_nu[i].nu, s.values[i]);
        s.fitted_rate = fit_rate(pts, 1, pts.size());
      }
    }
    res.conditions.push_back(std::move(s));
  }
}

/// Threads allowed by VSL_THREADS (default: hardware concurrency).
inline std::size_t sweep_threads(std::size_t tasks) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VSL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<std::size_t>(v);
  }
  return std::min(n, std::max<std::size_t>(tasks, 1));
}

template <class Solver = RadialSolver>
SweepResult run_sweep(const SweepConfig& config, const Solver& solver = Solver{}) {
  config.validate();
  const auto grid = config.make_grid();
  const auto u0 = config.initial_field(grid);
  const auto forcing = config.make_forcing();
  const auto times = config.output_times();
  const auto euler = euler_reference(u0);
  const SheetTarget sheet{euler, forcing};
  DiagnosticOptions dopt;
  dopt.kato_layer_c = config.kato_c;

  SweepResult res;
  res.config = config;
  res.B = euler.B;
  res.euler_boundary = euler.u_bar.boundary_value();
  res.per_nu.resize(config.nus.size());

  auto task = [&](std::size_t idx) {
    NuOutcome& out = res.per_nu[idx];
    out.nu = config.nus[idx];
    const auto start = std::chrono::steady_clock::now();
    try {
      SolverOptions sopt;
      sopt.dt = config.time_step(*grid);
      sopt.warn = [&out](const std::string& w) { out.warnings.push_back(w); };
      const Trajectory traj = solver(u0, out.nu, forcing, config.T, times, sopt);
      out.diag = evaluate_conditions(traj, sheet, dopt);
      const auto& uf = traj.fields.back();
      out.r.assign(grid->nodes().begin(), grid->nodes().end());
      out.u_final.assign(uf.values().begin(), uf.values().end());
      const auto om = vorticity_radial(uf);
      out.omega_final.assign(om.values().begin(), om.values().end());
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const std::size_t nthreads = sweep_threads(config.nus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.nus.size(); i = next++) task(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::stable_sort(res.per_nu.begin(), res.per_nu.end(), [](const auto& a, const auto& b) { return a.nu > b.nu; });
  summarize_conditions(res);
  return res;
}

struct EquivalenceReport {
  bool equivalent = false;
  Verdict majority = Verdict::converges;
  std::vector<ConditionId> disagreeing;
  double sheet_amplitude_limit = 0.0;   // estimate at t = T, smallest ν
  double sheet_amplitude_target = 0.0;  // ū(1) - α(T)
  double h1dual_final = 0.0;            // dual_norm(ω(T) - ω̄, H1dual), smallest ν
  double h1dual_oracle = 0.0;
  std::string text;
};

inline EquivalenceReport equivalence_report(const SweepResult& res) {
  if (!res.complete() || res.conditions.size() != all_conditions.size())
    throw InvalidArgument("equivalence_report: incomplete sweep result");
  for (const auto& c : res.conditions)
    if (!c.verdict) throw InvalidArgument("equivalence_report: undefined verdict");

  EquivalenceReport rep;
  std::array<int, 3> count{};
  for (auto id : equivalence_set) ++count[static_cast<std::size_t>(*res.condition(id).verdict)];
  rep.majority = static_cast<Verdict>(std::max_element(count.begin(), count.end()) - count.begin());
  for (auto id : equivalence_set)
    if (*res.condition(id).verdict != rep.majority) rep.disagreeing.push_back(id);
  rep.equivalent = rep.disagreeing.empty();

  const auto& last = res.per_nu.back().diag;
  rep.sheet_amplitude_limit = last.amplitude_estimate.back();
  rep.sheet_amplitude_target = last.amplitude_target.back();
  rep.h1dual_final = last.h1dual.back();
  rep.h1dual_oracle = last.h1dual_oracle_final;

  char amp[96];
  std::snprintf(amp, sizeof amp, "sheet amplitude %.4g (target %.4g)", rep.sheet_amplitude_limit,
                rep.sheet_amplitude_target);
  std::ostringstream os;
  if (rep.equivalent) {
    os << "equivalent: all " << (rep.majority == Verdict::converges ? "converge" : to_string(rep.majority)) << ", "
       << amp;
  } else {
    os << "NOT equivalent: falsification candidate; majority verdict " << to_string(rep.majority)
       << ", disagreeing:";
    for (auto id : rep.disagreeing) os << ' ' << to_string(id) << '(' << to_string(*res.condition(id).verdict) << ')';
    os << "; " << amp;
  }
  rep.text = os.str();
  return rep;
}

}  // namespace vsl
