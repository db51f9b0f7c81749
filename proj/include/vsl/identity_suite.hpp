#pragma once

// The check-identities table: exactness on low-degree polynomials, refinement
// order on random solenoidal fields, and the disk constructions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vsl/tensor_checks.hpp"

namespace vsl {

struct IdentityCheck {
  std::string name;
  double value;
  double threshold;
  bool lower_is_better;  // value ≤ threshold, otherwise value ≥ threshold

  bool pass() const { return lower_is_better ? value <= threshold : value >= threshold; }
};

/// Divergence-free quadratic test fields and a generic quadratic partner.
inline Point poly_solenoidal(int dim, const Point& x) {
  if (dim == 2) return {x[0] * x[0] + x[1], -2.0 * x[0] * x[1] + x[0], 0.0};
  return {x[0] * x[0], -2.0 * x[0] * x[1] + x[2] * x[2], x[0] * x[1]};
}

inline Point poly_generic(int dim, const Point& x) {
  if (dim == 2) return {x[1] * x[1], x[0] * x[1] + 1.0, 0.0};
  return {x[1] * x[2], x[0] * x[0] + x[2], x[2] * x[2] + x[0]};
}

/// Observed orders log2(e_k / e_{k+1}) for successive halvings.
inline std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> p;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) p.push_back(std::log2(errors[k] / errors[k + 1]));
  return p;
}

inline std::vector<IdentityCheck> run_identity_suite(int dim, std::size_t n, std::uint64_t seed) {
  if (dim != 2 && dim != 3) throw InvalidArgument("dim must be 2 or 3");
  if (n < 64 || n % 16 != 0) throw InvalidArgument("n must be a multiple of 16 and at least 64");
  std::vector<IdentityCheck> out;
  const std::string d = std::to_string(dim) + "d";

  {
    const auto u = FieldSample::box(dim, n / 4, [&](const Point& x) { return poly_solenoidal(dim, x); });
    const auto v = FieldSample::box(dim, n / 4, [&](const Point& x) { return poly_generic(dim, x); });
    for (auto id : {Identity::vorticity_product, Identity::div_gradT, Identity::omegavsgrad})
      out.push_back({std::string("poly_") + to_string(id) + "_" + d, identity_residual(id, u, v), 1e-10, true});
    const auto w = vorticity_matrix(v);
    double asym = 0.0;
    for (std::size_t node = 0; node < w.nodes(); ++node)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) asym = std::max(asym, std::abs(w(node, i, j) + w(node, j, i)));
    out.push_back({"antisymmetry_" + d, asym, 0.0, true});
  }

  {
    const RandomSolenoidal fu(dim, seed), fv(dim, seed + 1);
    for (auto id : {Identity::vorticity_product, Identity::div_gradT, Identity::omegavsgrad}) {
      std::vector<double> errs;
      for (std::size_t m = n / 8; m <= n; m *= 2) {
        const auto u = FieldSample::box(dim, m, fu);
        const auto v = FieldSample::box(dim, m, fv);
        errs.push_back(identity_residual(id, u, v));
      }
      const auto p = observed_orders(errs);
      out.push_back({std::string("order_") + to_string(id) + "_" + d, *std::min_element(p.begin(), p.end()), 1.9,
                     false});
    }
    const auto u = FieldSample::box(dim, n / 4, fu);
    const std::array<std::array<double, 3>, 3> S = {{{1.0, 0.3, -0.2}, {0.3, 2.0, 0.5}, {-0.2, 0.5, -1.0}}};
    out.push_back({"symmetric_pairing_" + d, std::abs(vorticity_pairing_matrix(u, S)), 1e-12, true});
  }

  {
    const std::size_t nr = 32, nt = 32;
    const auto u = FieldSample::disk(nr, nt, [](const Point& x) {
      return Point{x[0] * x[0] - x[1] + 0.5, x[0] * x[1] + x[0] + std::sin(x[1]), 0.0};
    });
    const auto h1 = helmholtz_project(u);
    const auto h2 = helmholtz_project(h1.v);
    double idem = 0.0;
    for (int c = 0; c < 2; ++c)
      for (std::size_t node = 0; node < u.nodes(); ++node)
        idem = std::max(idem, std::abs(h2.v[c][node] - h1.v[c][node]));
    out.push_back({"helmholtz_idempotence", idem, 1e-10, true});
    const double orth = std::abs(inner_product(u, {h1.v[0], h1.v[1]}, h1.grad_p));
    out.push_back({"helmholtz_orthogonality", orth, 1e-10, true});

    const auto shift = FieldSample::disk(nr, nt, [](const Point& x) { return Point{1.0 - x[1], x[0], 0.0}; });
    const auto hs = helmholtz_project(shift);
    double err = 0.0;
    for (std::size_t node = 0; node < shift.nodes(); ++node) {
      const auto x = shift.position(node);
      err = std::max({err, std::abs(hs.v[0][node] + x[1]), std::abs(hs.v[1][node] - x[0]),
                      std::abs(hs.p[0][node] - x[0])});
    }
    out.push_back({"helmholtz_rotation_plus_gradient", err, 1e-6, true});

    const auto ue = FieldSample::disk(nr, nt, [](const Point&) { return Point{1.0, 0.0, 0.0}; });
    const auto fx = FieldSample::disk_scalar(nr, nt, [](const Point& x) { return x[0]; });
    out.push_back({"ibp_disk", ibp_residual(ue, fx), 1e-6, true});

    const auto vs = FieldSample::disk(nr, nt, [](const Point& x) {
      const double q = 1.0 - x[0] * x[0] - x[1] * x[1];
      return Point{4.0 * x[1] * q, -4.0 * x[0] * q, 0.0};
    });
    const auto sf = stream_function_and_M(vs);
    double ferr = 0.0;
    for (std::size_t node = 0; node < vs.nodes(); ++node) {
      const double r = vs.polar(node).first;
      ferr = std::max(ferr, std::abs(sf.f[0][node] - (1.0 - r * r) * (1.0 - r * r)));
    }
    out.push_back({"stream_function_roundtrip", ferr, 1e-6, true});
    out.push_back({"stream_div_M", sf.div_M_error, 1e-6, true});
  }
  return out;
}

}  // namespace vsl
