#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "vsl/bessel_oracle.hpp"
#include "vsl/ns_disk_solver.hpp"

using namespace vsl;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
RadialField rigid(const GridPtr& g) {
  return RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r; });
}

std::vector<double> log_times(double T, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = T * std::pow(1e-3, 1.0 - static_cast<double>(k) / static_cast<double>(n - 1));
  t.back() = T;
  return t;
}

double rel_l2(const RadialField& a, const RadialField& b) { return l2_distance_disk(a, b) / l2_norm_disk(b); }
}  // namespace

TEST_CASE("boundary forcing interpolates its table", "[ns_disk_solver]") {
  const BoundaryForcing f({0.0, 0.5, 1.0}, {0.0, 2.0, 1.0});
  REQUIRE(f(0.0) == 0.0);
  REQUIRE(f(0.25) == 1.0);
  REQUIRE(f(0.75) == 1.5);
  REQUIRE(f(2.0) == 1.0);
  REQUIRE_THROWS_AS(BoundaryForcing({0.0, 0.0}, {1.0, 1.0}), InvalidArgument);
  REQUIRE_THROWS_AS(BoundaryForcing({0.1, 1.0}, {1.0, 1.0}), InvalidArgument);
  REQUIRE_THROWS_AS(BoundaryForcing({0.0, 1.0}, {1.0, INFINITY}), InvalidArgument);
  const auto c = BoundaryForcing::cosine_ramp(1.0, 2.0);
  REQUIRE_THAT(c(1.0), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(c(0.5), WithinAbs(0.5, 1e-6));
  REQUIRE(c(2.0) == 0.0);
}

TEST_CASE("vorticity_radial oracles", "[ns_disk_solver]") {
  for (auto grading : {Grading::uniform, Grading::sine_clustered}) {
    const auto g = make_graded_grid(64, grading);
    const auto w = vorticity_radial(rigid(g));
    REQUIRE(w.kind() == FieldKind::vorticity);
    for (double v : w.values()) REQUIRE_THAT(v, WithinAbs(2.0, 1e-8));
    const auto zero = vorticity_radial(RadialField::zeros(g, FieldKind::velocity_theta));
    for (double v : zero.values()) REQUIRE(v == 0.0);
  }
  REQUIRE_THROWS_AS(vorticity_radial(RadialField::zeros(make_graded_grid(8, Grading::uniform), FieldKind::scalar)),
                    InvalidArgument);
}

TEST_CASE("vorticity_radial is second order on a cubic profile", "[ns_disk_solver]") {
  std::vector<double> err;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto g = make_graded_grid(n, Grading::uniform);
    const auto u = RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r - r * r * r; });
    const auto w = vorticity_radial(u);
    const auto exact = RadialField::sample(g, FieldKind::vorticity, [](double r) { return 2.0 - 4.0 * r * r; });
    double e = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
      if ((*g)[i] <= 0.9) e = std::max(e, std::abs(w[i] - exact[i]));
    err.push_back(e);
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) REQUIRE(std::log2(err[k] / err[k + 1]) >= 1.9);
}

TEST_CASE("euler_reference oracles", "[ns_disk_solver]") {
  const auto g = make_graded_grid(256, Grading::sine_clustered);
  const auto e = euler_reference(rigid(g));
  REQUIRE_THAT(e.B, WithinAbs(2.0 * std::numbers::pi, 1e-12));
  for (double v : e.omega_bar.values()) REQUIRE_THAT(v, WithinAbs(2.0, 1e-10));

  const auto z = euler_reference(RadialField::zeros(g, FieldKind::velocity_theta));
  REQUIRE(z.B == 0.0);

  const auto c = euler_reference(RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r - r * r * r; }));
  REQUIRE_THAT(c.B, WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(c.B, WithinAbs(2.0 * std::numbers::pi * c.u_bar.boundary_value(), 1e-12));
  for (std::size_t i = 0; i < g->size(); ++i)
    if ((*g)[i] < 0.9) REQUIRE_THAT(c.omega_bar[i], WithinAbs(2.0 - 4.0 * (*g)[i] * (*g)[i], 1e-3));
}

TEST_CASE("solver preconditions", "[ns_disk_solver]") {
  const auto g = make_graded_grid(32, Grading::uniform);
  const auto f = BoundaryForcing::constant(0.0, 1.0);
  REQUIRE_THROWS_WITH(solve_ns_radial(rigid(g), 0.0, f, 1.0, {1.0}), ContainsSubstring("nu must be positive"));
  REQUIRE_THROWS_AS(solve_ns_radial(rigid(g), -1.0, f, 1.0, {1.0}), InvalidArgument);
  REQUIRE_THROWS_AS(solve_ns_radial(rigid(g), 1e-3, f, 1.0, {0.0, 1.0}), InvalidArgument);
  REQUIRE_THROWS_AS(solve_ns_radial(rigid(g), 1e-3, f, 1.0, {0.5, 0.5}), InvalidArgument);
  REQUIRE_THROWS_AS(solve_ns_radial(rigid(g), 1e-3, f, 1.0, {1.5}), InvalidArgument);
  REQUIRE_THROWS_AS(solve_ns_radial(rigid(g), 1e-3, f, 1.0, {}), InvalidArgument);
  SolverOptions bad;
  bad.dt = 0.0;
  REQUIRE_THROWS_AS(solve_ns_radial(rigid(g), 1e-3, f, 1.0, {1.0}, bad), InvalidArgument);
}

TEST_CASE("non-finite state raises a blowup naming the step", "[ns_disk_solver]") {
  const auto g = make_graded_grid(32, Grading::uniform);
  const auto huge = RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return 1e308 * r; });
  try {
    solve_ns_radial(huge, 1.0, BoundaryForcing::constant(0.0, 1.0), 1.0, {1.0});
    FAIL("expected NumericalBlowup");
  } catch (const NumericalBlowup& e) {
    REQUIRE(e.step() == 1);
    REQUIRE_THAT(std::string(e.what()), ContainsSubstring("step 1"));
  }
}

TEST_CASE("boundary layer resolution warning", "[ns_disk_solver]") {
  const auto g = make_graded_grid(16, Grading::uniform);
  std::vector<std::string> warnings;
  SolverOptions opt;
  opt.dt = 1e-2;
  opt.warn = [&](const std::string& w) { warnings.push_back(w); };
  solve_ns_radial(rigid(g), 1e-4, BoundaryForcing::constant(0.0, 1.0), 1.0, {1.0}, opt);
  REQUIRE(warnings.size() == 1);
  REQUIRE_THAT(warnings[0], ContainsSubstring("under-resolved"));

  warnings.clear();
  const auto fine = make_graded_grid(2048, Grading::sine_clustered);
  solve_ns_radial(rigid(fine), 1e-4, BoundaryForcing::constant(0.0, 1.0), 1.0, {1.0}, opt);
  REQUIRE(warnings.empty());
}

TEST_CASE("rigid rotation with a co-moving wall is steady", "[ns_disk_solver][property]") {
  const auto g = make_graded_grid(512, Grading::sine_clustered);
  const auto u0 = rigid(g);
  SolverOptions opt;
  opt.dt = 1e-3;
  for (double nu : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
    const auto traj = solve_ns_radial(u0, nu, BoundaryForcing::constant(1.0, 1.0), 1.0, log_times(1.0, 16), opt);
    REQUIRE(traj.size() == 16);
    for (const auto& u : traj.fields) REQUIRE(l2_distance_disk(u, u0) <= 1e-8);
  }
}

TEST_CASE("trajectory invariants: boundary values and circulation", "[ns_disk_solver][property]") {
  const auto g = make_graded_grid(1024, Grading::sine_clustered);
  SolverOptions opt;
  opt.dt = 5e-4;
  for (const auto& forcing : {BoundaryForcing::constant(0.0, 1.0), BoundaryForcing::cosine_ramp(1.0, 1.0),
                              BoundaryForcing({0.0, 0.3, 1.0}, {0.5, -1.0, 2.0})}) {
    for (double nu : {1e-2, 1e-4}) {
      const auto times = log_times(1.0, 24);
      const auto traj = solve_ns_radial(rigid(g), nu, forcing, 1.0, times, opt);
      REQUIRE(traj.times == times);
      for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& u = traj.fields[k];
        REQUIRE(u[0] == 0.0);
        REQUIRE(u.boundary_value() == forcing(times[k]));
        const double circulation = 2.0 * std::numbers::pi * integrate_rdr(vorticity_radial(u));
        REQUIRE_THAT(circulation, WithinAbs(2.0 * std::numbers::pi * forcing(times[k]), 1e-8));
      }
    }
  }
}

TEST_CASE("no-slip energy is non-increasing", "[ns_disk_solver][property]") {
  const auto g = make_graded_grid(1024, Grading::sine_clustered);
  SolverOptions opt;
  opt.dt = 5e-4;
  for (double nu : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto traj = solve_ns_radial(rigid(g), nu, BoundaryForcing::constant(0.0, 1.0), 1.0, log_times(1.0, 32), opt);
    for (std::size_t k = 1; k < traj.size(); ++k)
      REQUIRE(energy_disk(traj.fields[k]) <= energy_disk(traj.fields[k - 1]) * (1.0 + 1e-14));
  }
}

TEST_CASE("solver agrees with the Bessel series", "[ns_disk_solver]") {
  const auto g = make_graded_grid(2048, Grading::sine_clustered);
  const auto series = bessel_series_rigid(200);
  SolverOptions opt;
  opt.dt = 1e-4;
  const double nu = 1e-3;
  const auto traj = solve_ns_radial(rigid(g), nu, BoundaryForcing::constant(0.0, 1.0), 1.0, {0.1, 0.5, 1.0}, opt);
  for (double t : {0.1, 0.5, 1.0}) {
    const auto exact = evaluate_series(series, g, nu, t).field;
    REQUIRE(rel_l2(traj.at(t), exact) <= 1e-5);
  }
}

TEST_CASE("spatial order against the Bessel series", "[ns_disk_solver]") {
  const double nu = 1e-2, t = 0.5;
  const auto series = bessel_series_rigid(200);
  SolverOptions opt;
  opt.dt = 2e-5;
  std::vector<double> err;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const auto g = make_graded_grid(n, Grading::sine_clustered);
    const auto traj = solve_ns_radial(rigid(g), nu, BoundaryForcing::constant(0.0, 1.0), t, {t}, opt);
    err.push_back(l2_distance_disk(traj.fields.back(), evaluate_series(series, g, nu, t).field));
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) REQUIRE(std::log2(err[k] / err[k + 1]) >= 1.9);
}

TEST_CASE("temporal order is second order after the start-up steps", "[ns_disk_solver]") {
  const double nu = 1e-2, t = 0.5;
  const auto g = make_graded_grid(256, Grading::sine_clustered);
  const auto u0 = RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r - r * r * r; });
  SolverOptions ref_opt;
  ref_opt.dt = 1e-5;
  const auto ref = solve_ns_radial(u0, nu, BoundaryForcing::constant(0.0, 1.0), t, {t}, ref_opt).fields.back();
  std::vector<double> err;
  for (double dt : {4e-2, 2e-2, 1e-2, 5e-3}) {
    SolverOptions opt;
    opt.dt = dt;
    err.push_back(l2_distance_disk(solve_ns_radial(u0, nu, BoundaryForcing::constant(0.0, 1.0), t, {t}, opt).fields.back(), ref));
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) REQUIRE(std::log2(err[k] / err[k + 1]) >= 1.8);
}
