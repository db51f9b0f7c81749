#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "vsl/radial_core.hpp"

using namespace vsl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
RadialField scalar(const GridPtr& g, double (*f)(double)) {
  return RadialField::sample(g, FieldKind::scalar, f);
}
}  // namespace

TEST_CASE("graded grid nodes", "[radial_core]") {
  const auto u = make_graded_grid(4, Grading::uniform);
  const std::vector<double> expect{0.0, 0.25, 0.5, 0.75, 1.0};
  REQUIRE(u->size() == 5);
  for (std::size_t i = 0; i < 5; ++i) REQUIRE((*u)[i] == expect[i]);

  const auto s = make_graded_grid(2, Grading::sine_clustered);
  REQUIRE(s->size() == 3);
  REQUIRE((*s)[0] == 0.0);
  REQUIRE_THAT((*s)[1], WithinAbs(0.7071067811865476, 1e-16));
  REQUIRE((*s)[2] == 1.0);

  REQUIRE_THROWS_AS(make_graded_grid(1, Grading::uniform), InvalidArgument);
  REQUIRE_THROWS_AS(make_graded_grid(0, Grading::sine_clustered), InvalidArgument);
}

TEST_CASE("sine grading spacing shrinks toward the wall", "[radial_core]") {
  for (std::size_t n : {2u, 3u, 17u, 256u, 2048u}) {
    const auto g = make_graded_grid(n, Grading::sine_clustered);
    REQUIRE(g->nodes().front() == 0.0);
    REQUIRE(g->nodes().back() == 1.0);
    for (std::size_t i = 0; i + 1 < g->intervals(); ++i) {
      REQUIRE(g->spacing(i) > 0.0);
      REQUIRE(g->spacing(i + 1) <= g->spacing(i) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("radial field invariants", "[radial_core]") {
  const auto g = make_graded_grid(8, Grading::uniform);
  REQUIRE_THROWS_AS(RadialField(g, std::vector<double>(8, 0.0), FieldKind::scalar), InvalidArgument);
  std::vector<double> bad(9, 1.0);
  REQUIRE_THROWS_AS(RadialField(g, bad, FieldKind::velocity_theta), InvalidArgument);
  bad[0] = 0.0;
  bad[3] = std::nan("");
  REQUIRE_THROWS_AS(RadialField(g, bad, FieldKind::scalar), InvalidArgument);
  const auto u = RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r + 1.0; });
  REQUIRE(u[0] == 0.0);
}

TEST_CASE("test functions carry their trace class", "[radial_core]") {
  REQUIRE_THROWS_AS(TestFunction("bad", [](double) { return 1.0; }, [](double) { return 0.0; }, TestSpace::H1_0),
                    InvalidArgument);
  const auto probes = default_probes();
  REQUIRE(probes.size() == 5);
  const std::vector<double> traces{1, 1, 1, 0, 0};
  for (std::size_t i = 0; i < 5; ++i) {
    REQUIRE(probes[i].trace() == traces[i]);
    REQUIRE((probes[i].space() == TestSpace::H1_0) == (traces[i] == 0.0));
  }
  // ‖∇(r²)‖² = 2π ∫ 4r³ dr = 2π
  REQUIRE_THAT(probes[2].grad_norm_disk(), WithinRel(std::sqrt(2.0 * std::numbers::pi), 1e-12));
}

TEST_CASE("integrate_rdr oracles", "[radial_core]") {
  for (auto grading : {Grading::uniform, Grading::sine_clustered}) {
    const auto g = make_graded_grid(37, grading);
    REQUIRE_THAT(integrate_rdr(scalar(g, [](double) { return 1.0; })), WithinAbs(0.5, 1e-15));
    REQUIRE(integrate_rdr(scalar(g, [](double) { return 0.0; })) == 0.0);
  }
  const auto g = make_graded_grid(1000, Grading::uniform);
  REQUIRE_THAT(integrate_rdr(scalar(g, [](double r) { return r; })), WithinAbs(1.0 / 3.0, 1e-6));
  const auto probe = default_probes()[1];
  REQUIRE_THAT(integrate_rdr(probe, *g), WithinAbs(1.0 / 3.0, 1e-6));

  const auto other = make_graded_grid(999, Grading::uniform);
  REQUIRE_THROWS_AS(integrate_rdr(scalar(other, [](double) { return 1.0; }), *g), InvalidArgument);
}

TEST_CASE("integrate_rdr converges at second order", "[radial_core]") {
  std::vector<double> err;
  for (std::size_t n : {100u, 200u, 400u, 800u}) {
    const auto g = make_graded_grid(n, Grading::uniform);
    err.push_back(std::abs(integrate_rdr(scalar(g, [](double r) { return r * r; })) - 0.25));
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) REQUIRE(std::log2(err[k] / err[k + 1]) >= 1.9);
}

TEST_CASE("l2_norm_disk oracles", "[radial_core]") {
  const auto g = make_graded_grid(1000, Grading::uniform);
  REQUIRE_THAT(l2_norm_disk(scalar(g, [](double) { return 1.0; })), WithinAbs(std::sqrt(std::numbers::pi), 1e-12));
  REQUIRE_THAT(l2_norm_disk(scalar(g, [](double r) { return r; })), WithinAbs(std::sqrt(std::numbers::pi / 2.0), 1e-6));
  REQUIRE(l2_norm_disk(scalar(g, [](double) { return 0.0; })) == 0.0);
}

TEST_CASE("grad_norm_sq_disk oracles", "[radial_core]") {
  const auto g = make_graded_grid(512, Grading::sine_clustered);
  const auto rigid = RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r; });
  REQUIRE_THAT(grad_norm_sq_disk(rigid, 0.0), WithinAbs(2.0 * std::numbers::pi, 1e-4));
  REQUIRE(grad_norm_sq_disk(RadialField::zeros(g, FieldKind::velocity_theta), 0.0) == 0.0);
  for (double c : {0.5, 0.1, 0.01, 0.0037}) {
    const double expect = 2.0 * std::numbers::pi * (1.0 - (1.0 - c) * (1.0 - c));
    REQUIRE_THAT(grad_norm_sq_disk(rigid, 1.0 - c), WithinAbs(expect, 1e-4));
  }
  REQUIRE_THROWS_AS(grad_norm_sq_disk(rigid, 1.0), InvalidArgument);
  REQUIRE_THROWS_AS(grad_norm_sq_disk(rigid, -0.1), InvalidArgument);
  REQUIRE_THROWS_AS(grad_norm_sq_disk(scalar(g, [](double) { return 1.0; }), 0.0), InvalidArgument);
}

TEST_CASE("grad_norm_sq_disk matches a smooth profile", "[radial_core]") {
  // u = r(1 - r²):  ∫ (1 - 3r²)² r dr + ∫ (1 - r²)² r dr = 1/2 + 1/6
  const double exact = 2.0 * std::numbers::pi * (0.5 + 1.0 / 6.0);
  const auto g = make_graded_grid(2000, Grading::sine_clustered);
  const auto u = RadialField::sample(g, FieldKind::velocity_theta, [](double r) { return r * (1 - r * r); });
  REQUIRE_THAT(grad_norm_sq_disk(u, 0.0), WithinRel(exact, 1e-5));
}

TEST_CASE("property: integrate_rdr is linear", "[radial_core][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = make_graded_grid(3 + static_cast<std::size_t>(rng() % 300),
                                    trial % 2 ? Grading::uniform : Grading::sine_clustered);
    std::vector<double> f(g->size()), h(g->size()), mix(g->size());
    const double a = U(rng), b = U(rng);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = U(rng);
      h[i] = U(rng);
      mix[i] = a * f[i] + b * h[i];
    }
    const double lhs = integrate_rdr(mix, *g);
    const double rhs = a * integrate_rdr(f, *g) + b * integrate_rdr(h, *g);
    REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-13));
  }
}

TEST_CASE("property: l2_norm_disk triangle inequality", "[radial_core][property]") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N01;
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = make_graded_grid(3 + static_cast<std::size_t>(rng() % 200), Grading::sine_clustered);
    std::vector<double> f(g->size()), h(g->size()), s(g->size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = N01(rng);
      h[i] = N01(rng);
      s[i] = f[i] + h[i];
    }
    REQUIRE(l2_norm_disk(s, *g) <= l2_norm_disk(f, *g) + l2_norm_disk(h, *g) + 1e-12);
  }
}

TEST_CASE("property: grad_norm_sq_disk is monotone in the region", "[radial_core][property]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0), V(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = make_graded_grid(4 + static_cast<std::size_t>(rng() % 300), Grading::sine_clustered);
    std::vector<double> v(g->size());
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = V(rng);
    const RadialField u(g, v, FieldKind::velocity_theta);
    double a1 = U(rng) * 0.999, a2 = U(rng) * 0.999;
    if (a1 > a2) std::swap(a1, a2);
    REQUIRE(grad_norm_sq_disk(u, a2) <= grad_norm_sq_disk(u, a1) + 1e-12);
  }
}
