#pragma once

// Radial grids, fields and the disk norms used by every diagnostic.
//
// Fields are nodal samples on a graded mesh of [0, 1]. All disk integrals
// reduce to  ∫_D g = 2π ∫_0^1 g(r) r dr.  The quadrature integrates the
// piecewise-linear interpolant of g against the weight r exactly
// (product trapezoid rule), so it is second order with positive weights and
// exact for g ∈ {1, r}. The same weights are the lumped mass of the radial
// operators in ns_disk_solver.hpp, which is what makes the discrete Green and
// integration-by-parts identities hold to rounding error.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vsl/errors.hpp"
#include "vsl/quadrature.hpp"

namespace vsl {

enum class Grading { uniform, sine_clustered };

inline const char* to_string(Grading g) {
  return g == Grading::uniform ? "uniform" : "sine";
}

class RadialGrid {
public:
  RadialGrid(std::vector<double> nodes, Grading grading)
      : nodes_(std::move(nodes)), grading_(grading) {
    detail::require(nodes_.size() >= 3, "RadialGrid: need at least 3 nodes");
    detail::require(nodes_.front() == 0.0 && nodes_.back() == 1.0,
                    "RadialGrid: nodes must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
      detail::require(nodes_[i + 1] > nodes_[i], "RadialGrid: nodes must be strictly increasing");
    weights_.assign(nodes_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      const double a = nodes_[i], b = nodes_[i + 1], h = b - a;
      weights_[i] += h * (2.0 * a + b) / 6.0;
      weights_[i + 1] += h * (a + 2.0 * b) / 6.0;
    }
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  Grading grading() const noexcept { return grading_; }
  double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

  double min_spacing() const {
    double h = 1.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) h = std::min(h, spacing(i));
    return h;
  }
  double max_spacing() const {
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) h = std::max(h, spacing(i));
    return h;
  }

  /// Quadrature weights for ∫_0^1 g r dr: w_i = ∫ φ_i(r) r dr with φ_i the hat functions.
  std::span<const double> weights() const noexcept { return weights_; }

  /// Number of nodes with r ≥ 1 - width.
  std::size_t nodes_within(double width) const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [&](double r) { return r >= 1.0 - width; }));
  }

  bool same_as(const RadialGrid& other) const {
    return this == &other || nodes_ == other.nodes_;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Grading grading_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// uniform: r_i = i/N;  sine_clustered: r_i = sin(iπ/(2N)), clustered toward r = 1.
inline GridPtr make_graded_grid(std::size_t n, Grading grading) {
  if (n < 2) throw InvalidArgument("make_graded_grid: N must be at least 2");
  std::vector<double> r(n + 1);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / nn;
    r[i] = grading == Grading::uniform ? s : std::sin(0.5 * std::numbers::pi * s);
  }
  r.front() = 0.0;
  r.back() = 1.0;
  return std::make_shared<const RadialGrid>(std::move(r), grading);
}

enum class FieldKind { velocity_theta, vorticity, scalar };

class RadialField {
public:
  RadialField(GridPtr grid, std::vector<double> values, FieldKind kind)
      : grid_(std::move(grid)), values_(std::move(values)), kind_(kind) {
    detail::require(grid_ != nullptr, "RadialField: null grid");
    detail::require(values_.size() == grid_->size(), "RadialField: value count does not match grid");
    for (double v : values_) detail::require(std::isfinite(v), "RadialField: non-finite sample");
    if (kind_ == FieldKind::velocity_theta)
      detail::require(values_.front() == 0.0, "RadialField: azimuthal velocity must vanish at r = 0");
  }

  template <class F>
  static RadialField sample(GridPtr grid, FieldKind kind, F&& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*grid)[i]);
    if (kind == FieldKind::velocity_theta) v.front() = 0.0;
    return RadialField(std::move(grid), std::move(v), kind);
  }

  static RadialField zeros(GridPtr grid, FieldKind kind) {
    std::vector<double> v(grid->size(), 0.0);
    return RadialField(std::move(grid), std::move(v), kind);
  }

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double boundary_value() const { return values_.back(); }
  FieldKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return values_.size(); }

private:
  GridPtr grid_;
  std::vector<double> values_;
  FieldKind kind_;
};

inline void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* where) {
  if (!a.same_as(b)) throw InvalidArgument(std::string(where) + ": grid mismatch");
}

enum class TestSpace { H1, H1_0 };

/// Radial test profile f(r) with its derivative; trace is f(1).
class TestFunction {
public:
  TestFunction(std::string name, std::function<double(double)> profile,
               std::function<double(double)> derivative, TestSpace space)
      : name_(std::move(name)), profile_(std::move(profile)),
        derivative_(std::move(derivative)), space_(space) {
    if (space_ == TestSpace::H1_0 && std::abs(trace()) > 1e-14)
      throw InvalidArgument("TestFunction " + name_ + ": H1_0 profile must vanish at r = 1");
  }

  double operator()(double r) const { return profile_(r); }
  double derivative(double r) const { return derivative_(r); }
  double trace() const { return profile_(1.0); }
  TestSpace space() const noexcept { return space_; }
  const std::string& name() const noexcept { return name_; }

  std::vector<double> sample(const RadialGrid& grid) const {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = profile_(grid[i]);
    return v;
  }

  /// ‖∇f‖_{L²(D)} = sqrt(2π ∫ (f')² r dr), by composite Gauss-Legendre.
  double grad_norm_disk() const {
    static const GaussRule rule = gauss_legendre(8);
    const double s = integrate_composite(
        [&](double r) {
          const double d = derivative_(r);
          return d * d * r;
        },
        0.0, 1.0, 64, rule);
    return std::sqrt(2.0 * std::numbers::pi * s);
  }

private:
  std::string name_;
  std::function<double(double)> profile_;
  std::function<double(double)> derivative_;
  TestSpace space_;
};

/// Probes {1, r, r², 1 - r², (1 - r²)²}; traces {1, 1, 1, 0, 0}.
inline std::vector<TestFunction> default_probes() {
  return {
      TestFunction("one", [](double) { return 1.0; }, [](double) { return 0.0; }, TestSpace::H1),
      TestFunction("r", [](double r) { return r; }, [](double) { return 1.0; }, TestSpace::H1),
      TestFunction("r2", [](double r) { return r * r; }, [](double r) { return 2.0 * r; },
                   TestSpace::H1),
      TestFunction("one_minus_r2", [](double r) { return 1.0 - r * r; },
                   [](double r) { return -2.0 * r; }, TestSpace::H1_0),
      TestFunction("one_minus_r2_sq",
                   [](double r) { return (1.0 - r * r) * (1.0 - r * r); },
                   [](double r) { return -4.0 * r * (1.0 - r * r); }, TestSpace::H1_0),
  };
}

/// ∫_0^1 g(r) r dr for nodal samples g.
inline double integrate_rdr(std::span<const double> g, const RadialGrid& grid) {
  detail::require(g.size() == grid.size(), "integrate_rdr: grid/field size mismatch");
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw InvalidArgument("integrate_rdr: non-finite sample");
    sum += w[i] * g[i];
  }
  return sum;
}

inline double integrate_rdr(const RadialField& f, const RadialGrid& grid) {
  require_same_grid(f.grid(), grid, "integrate_rdr");
  return integrate_rdr(f.values(), grid);
}

inline double integrate_rdr(const RadialField& f) { return integrate_rdr(f.values(), f.grid()); }

inline double integrate_rdr(const TestFunction& f, const RadialGrid& grid) {
  const auto v = f.sample(grid);
  return integrate_rdr(v, grid);
}

/// ‖f‖_{L²(D)} for a radial scalar or azimuthal vector field.
inline double l2_norm_disk(std::span<const double> f, const RadialGrid& grid) {
  const auto w = grid.weights();
  detail::require(f.size() == grid.size(), "l2_norm_disk: grid/field size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) throw InvalidArgument("l2_norm_disk: non-finite sample");
    sum += w[i] * f[i] * f[i];
  }
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

inline double l2_norm_disk(const RadialField& f) { return l2_norm_disk(f.values(), f.grid()); }

/// ‖a - b‖_{L²(D)} for two fields on the same grid.
inline double l2_distance_disk(const RadialField& a, const RadialField& b) {
  require_same_grid(a.grid(), b.grid(), "l2_distance_disk");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  return l2_norm_disk(d, a.grid());
}

/// ‖∇(u e_θ)‖² over the annulus {a < |x| < 1}:  2π ∫_a^1 [(u')² + (u/r)²] r dr.
///
/// u' is the cell slope of the piecewise-linear interpolant, integrated exactly
/// against r; (u/r)² r = u²/r is integrated by the trapezoid rule with the
/// r → 0 limit u'(0)²·0 = 0. Both pieces are exact for rigid rotation. Over
/// the whole disk the result equals the discrete dissipation uᵀKu of the solver.
inline double grad_norm_sq_disk(const RadialField& u, double a) {
  if (u.kind() != FieldKind::velocity_theta)
    throw InvalidArgument("grad_norm_sq_disk: expects an azimuthal velocity");
  if (!(a >= 0.0 && a < 1.0)) throw InvalidArgument("grad_norm_sq_disk: region must satisfy 0 <= a < 1");
  const auto& g = u.grid();
  const auto r = g.nodes();
  const auto v = u.values();
  auto radial_part = [&](std::size_t i) { return r[i] > 0.0 ? v[i] * v[i] / r[i] : 0.0; };

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double lo = r[i], hi = r[i + 1];
    if (hi <= a) continue;
    const double h = hi - lo;
    const double slope = (v[i + 1] - v[i]) / h;
    const double start = std::max(lo, a);
    sum += slope * slope * 0.5 * (hi * hi - start * start);
    const double q_lo = radial_part(i), q_hi = radial_part(i + 1);
    const double q_start = q_lo + (q_hi - q_lo) * (start - lo) / h;
    sum += 0.5 * (hi - start) * (q_start + q_hi);
  }
  return 2.0 * std::numbers::pi * sum;
}

}  // namespace vsl
