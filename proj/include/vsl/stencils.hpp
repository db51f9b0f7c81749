#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "vsl/errors.hpp"

namespace vsl {

/// Finite-difference weights for derivatives 0..max_order at z from nodes x
/// (Fornberg's recursion). Result row k holds the weights of the k-th derivative.
inline std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x,
                                                         std::size_t max_order) {
  const std::size_t n = x.size();
  detail::require(n > max_order, "fornberg_weights: too few nodes for the requested order");
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Five-point derivative stencils on n + 1 equispaced nodes (n ≥ 4):
/// centered in the interior, one-sided at the two nodes next to each end.
/// Exact on polynomials of degree ≤ 4.
class FivePointStencil {
public:
  FivePointStencil(std::size_t n, double h, std::size_t order) : n_(n) {
    detail::require(n >= 4, "FivePointStencil: need at least 4 intervals");
    weights_.resize(n + 1);
    start_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const std::size_t s = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i) - 2, 0,
                                                       static_cast<std::ptrdiff_t>(n) - 4);
      start_[i] = s;
      std::vector<double> x(5);
      for (std::size_t k = 0; k < 5; ++k) x[k] = (static_cast<double>(s + k) - static_cast<double>(i)) * h;
      weights_[i] = fornberg_weights(0.0, x, order)[order];
    }
  }

  std::size_t start(std::size_t i) const { return start_[i]; }
  const std::vector<double>& weights(std::size_t i) const { return weights_[i]; }
  std::size_t intervals() const noexcept { return n_; }

  /// Apply along a strided line: values f[offset + k * stride], k = 0..n.
  void apply(std::span<const double> f, std::span<double> out, std::size_t offset, std::size_t stride) const {
    for (std::size_t i = 0; i <= n_; ++i) {
      const auto& w = weights_[i];
      double s = 0.0;
      for (std::size_t k = 0; k < 5; ++k) s += w[k] * f[offset + (start_[i] + k) * stride];
      out[offset + i * stride] = s;
    }
  }

private:
  std::size_t n_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::size_t> start_;
};

/// Composite Simpson weights on n (even) intervals of width h.
inline std::vector<double> simpson_weights(std::size_t n, double h) {
  detail::require(n >= 2 && n % 2 == 0, "simpson_weights: interval count must be even");
  std::vector<double> w(n + 1);
  for (std::size_t i = 0; i <= n; ++i) w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  for (auto& x : w) x *= h / 3.0;
  return w;
}

}  // namespace vsl
