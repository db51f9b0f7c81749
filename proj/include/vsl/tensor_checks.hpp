#pragma once

// Vector-calculus identities checked on sampled fields.
//
// Box samples live on (n + 1)^d equispaced nodes of [0, 1]^d; derivatives are
// five-point stencils, integrals composite Simpson. Disk samples live on polar
// nodes r_i = i/n_r (i = 1..n_r), θ_j = 2πj/n_θ, store Cartesian components,
// differentiate with five-point stencils in r and spectrally in θ, and
// integrate with Simpson in r and the trapezoid rule in θ.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vsl/errors.hpp"
#include "vsl/stencils.hpp"

namespace vsl {

enum class SampleDomain { box, disk };

using Point = std::array<double, 3>;

class FieldSample {
public:
  using VectorFn = std::function<Point(const Point&)>;
  using ScalarFn = std::function<double(const Point&)>;

  /// Vector field on the box with n intervals per axis.
  static FieldSample box(int dim, std::size_t n, const VectorFn& f, bool boundary_flag = false) {
    FieldSample s(SampleDomain::box, dim, box_shape(dim, n), 1.0 / static_cast<double>(n), dim);
    s.boundary_flag_ = boundary_flag;
    s.fill([&](const Point& x, std::size_t node) {
      const auto v = f(x);
      for (int c = 0; c < dim; ++c) s.comp_[c][node] = v[c];
    });
    return s;
  }

  static FieldSample box_scalar(int dim, std::size_t n, const ScalarFn& f) {
    FieldSample s(SampleDomain::box, dim, box_shape(dim, n), 1.0 / static_cast<double>(n), 1);
    s.fill([&](const Point& x, std::size_t node) { s.comp_[0][node] = f(x); });
    return s;
  }

  /// Vector field on the unit disk, n_r radial intervals (even), n_θ angles.
  static FieldSample disk(std::size_t n_r, std::size_t n_theta, const VectorFn& f,
                          bool boundary_flag = false) {
    FieldSample s(SampleDomain::disk, 2, disk_shape(n_r, n_theta), 1.0 / static_cast<double>(n_r), 2);
    s.boundary_flag_ = boundary_flag;
    s.fill([&](const Point& x, std::size_t node) {
      const auto v = f(x);
      s.comp_[0][node] = v[0];
      s.comp_[1][node] = v[1];
    });
    return s;
  }

  static FieldSample disk_scalar(std::size_t n_r, std::size_t n_theta, const ScalarFn& f) {
    FieldSample s(SampleDomain::disk, 2, disk_shape(n_r, n_theta), 1.0 / static_cast<double>(n_r), 1);
    s.fill([&](const Point& x, std::size_t node) { s.comp_[0][node] = f(x); });
    return s;
  }

  /// Same layout, new components.
  FieldSample with_components(std::vector<std::vector<double>> comp) const {
    FieldSample s(domain_, dim_, shape_, h_, comp.size());
    for (const auto& c : comp) detail::require(c.size() == nodes(), "FieldSample: component size mismatch");
    s.comp_ = std::move(comp);
    s.check_finite();
    return s;
  }

  SampleDomain domain() const noexcept { return domain_; }
  int dim() const noexcept { return dim_; }
  std::array<std::size_t, 3> shape() const noexcept { return shape_; }
  double h() const noexcept { return h_; }
  bool boundary_flag() const noexcept { return boundary_flag_; }
  std::size_t components() const noexcept { return comp_.size(); }
  std::size_t nodes() const noexcept { return shape_[0] * shape_[1] * shape_[2]; }
  const std::vector<double>& operator[](std::size_t c) const { return comp_[c]; }

  /// Box: intervals per axis. Disk: radial intervals.
  std::size_t intervals() const noexcept { return domain_ == SampleDomain::box ? shape_[0] - 1 : shape_[0]; }
  std::size_t angles() const noexcept { return shape_[1]; }

  /// Physical coordinates of a node.
  Point position(std::size_t node) const {
    if (domain_ == SampleDomain::box) {
      const std::size_t i = node % shape_[0], j = (node / shape_[0]) % shape_[1], k = node / (shape_[0] * shape_[1]);
      return {static_cast<double>(i) * h_, static_cast<double>(j) * h_, static_cast<double>(k) * h_};
    }
    const auto [r, th] = polar(node);
    return {r * std::cos(th), r * std::sin(th), 0.0};
  }

  /// Disk nodes: (r, θ); node = j * n_r + (i - 1).
  std::pair<double, double> polar(std::size_t node) const {
    const std::size_t i = node % shape_[0] + 1, j = node / shape_[0];
    return {static_cast<double>(i) * h_,
            2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(shape_[1])};
  }

private:
  FieldSample(SampleDomain domain, int dim, std::array<std::size_t, 3> shape, double h, std::size_t ncomp)
      : domain_(domain), dim_(dim), shape_(shape), h_(h),
        comp_(ncomp, std::vector<double>(shape[0] * shape[1] * shape[2], 0.0)) {}

  static std::array<std::size_t, 3> box_shape(int dim, std::size_t n) {
    if (dim != 2 && dim != 3) throw InvalidArgument("FieldSample: dim must be 2 or 3");
    if (n < 4 || n % 2 != 0) throw InvalidArgument("FieldSample: interval count must be even and at least 4");
    return {n + 1, n + 1, dim == 3 ? n + 1 : 1};
  }

  static std::array<std::size_t, 3> disk_shape(std::size_t n_r, std::size_t n_theta) {
    if (n_r < 4 || n_r % 2 != 0) throw InvalidArgument("FieldSample: radial intervals must be even and at least 4");
    if (n_theta < 4 || n_theta % 2 != 0) throw InvalidArgument("FieldSample: angle count must be even and at least 4");
    return {n_r, n_theta, 1};
  }

  template <class G>
  void fill(G&& g) {
    for (std::size_t node = 0; node < nodes(); ++node) g(position(node), node);
    check_finite();
  }

  void check_finite() const {
    for (const auto& c : comp_)
      for (double v : c)
        if (!std::isfinite(v)) throw InvalidArgument("FieldSample: non-finite sample");
  }

  SampleDomain domain_;
  int dim_;
  std::array<std::size_t, 3> shape_;
  double h_;
  std::vector<std::vector<double>> comp_;
  bool boundary_flag_ = false;
};

namespace detail {

/// ∂_axis of one scalar array on a box sample.
inline std::vector<double> box_derivative(const FieldSample& s, std::span<const double> f, int axis,
                                          std::size_t order = 1) {
  const auto shape = s.shape();
  const std::size_t n = shape[0] - 1;
  const FivePointStencil st(n, s.h(), order);
  std::vector<double> out(f.size());
  const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? shape[0] : shape[0] * shape[1]);
  for (std::size_t node = 0; node < f.size(); ++node) {
    const std::size_t pos = (node / stride) % shape[static_cast<std::size_t>(axis)];
    if (pos != 0) continue;
    st.apply(f, out, node, stride);
  }
  return out;
}

/// Real DFT derivative in θ along each ring (Nyquist mode dropped).
inline std::vector<double> theta_derivative(const FieldSample& s, std::span<const double> f) {
  const std::size_t nr = s.shape()[0], nt = s.angles();
  std::vector<double> out(f.size(), 0.0);
  std::vector<double> cs(nt), sn(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    cs[j] = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nt));
    sn[j] = std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nt));
  }
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t k = 1; 2 * k < nt; ++k) {
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        const std::size_t q = (k * j) % nt;
        a += f[j * nr + i] * cs[q];
        b += f[j * nr + i] * sn[q];
      }
      a *= 2.0 / static_cast<double>(nt);
      b *= 2.0 / static_cast<double>(nt);
      const double kk = static_cast<double>(k);
      for (std::size_t j = 0; j < nt; ++j) {
        const std::size_t q = (k * j) % nt;
        out[j * nr + i] += kk * (b * cs[q] - a * sn[q]);
      }
    }
  }
  return out;
}

/// Five-point radial derivative on the nodes r = h..1 of every ray.
inline std::vector<double> radial_derivative(const FieldSample& s, std::span<const double> f) {
  const std::size_t nr = s.shape()[0], nt = s.angles();
  const FivePointStencil st(nr - 1, s.h(), 1);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < nt; ++j) st.apply(f, out, j * nr, 1);
  return out;
}

/// Cartesian gradient of one scalar array: result[a] = ∂_a f.
inline std::vector<std::vector<double>> gradient_scalar(const FieldSample& s, std::span<const double> f) {
  std::vector<std::vector<double>> g;
  if (s.domain() == SampleDomain::box) {
    for (int a = 0; a < s.dim(); ++a) g.push_back(box_derivative(s, f, a));
    return g;
  }
  const auto fr = radial_derivative(s, f);
  const auto ft = theta_derivative(s, f);
  g.assign(2, std::vector<double>(f.size()));
  for (std::size_t node = 0; node < f.size(); ++node) {
    const auto [r, th] = s.polar(node);
    const double c = std::cos(th), sn = std::sin(th);
    g[0][node] = c * fr[node] - sn / r * ft[node];
    g[1][node] = sn * fr[node] + c / r * ft[node];
  }
  return g;
}

/// Quadrature weight per node for ∫_Ω.
inline std::vector<double> volume_weights(const FieldSample& s) {
  std::vector<double> w(s.nodes());
  if (s.domain() == SampleDomain::box) {
    const auto sw = simpson_weights(s.intervals(), s.h());
    const auto shape = s.shape();
    for (std::size_t node = 0; node < w.size(); ++node) {
      const std::size_t i = node % shape[0], j = (node / shape[0]) % shape[1], k = node / (shape[0] * shape[1]);
      w[node] = sw[i] * sw[j] * (s.dim() == 3 ? sw[k] : 1.0);
    }
    return w;
  }
  const std::size_t nr = s.shape()[0];
  const auto sw = simpson_weights(nr, s.h());  // node 0 (r = 0) carries r·g = 0
  const double dth = 2.0 * std::numbers::pi / static_cast<double>(s.angles());
  for (std::size_t node = 0; node < w.size(); ++node) {
    const std::size_t i = node % nr + 1;
    w[node] = sw[i] * s.polar(node).first * dth;
  }
  return w;
}

inline double integrate(const std::vector<double>& w, std::span<const double> g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += w[i] * g[i];
  return sum;
}

/// ∫_Γ w·n for a vector field given as Cartesian component arrays.
inline double boundary_flux(const FieldSample& s, const std::vector<std::vector<double>>& w) {
  double sum = 0.0;
  if (s.domain() == SampleDomain::disk) {
    const std::size_t nr = s.shape()[0], nt = s.angles();
    const double dth = 2.0 * std::numbers::pi / static_cast<double>(nt);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t node = j * nr + (nr - 1);
      const double th = s.polar(node).second;
      sum += dth * (w[0][node] * std::cos(th) + w[1][node] * std::sin(th));
    }
    return sum;
  }
  const auto shape = s.shape();
  const std::size_t n = s.intervals();
  const auto sw = simpson_weights(n, s.h());
  for (std::size_t node = 0; node < s.nodes(); ++node) {
    const std::array<std::size_t, 3> idx = {node % shape[0], (node / shape[0]) % shape[1],
                                            node / (shape[0] * shape[1])};
    for (int a = 0; a < s.dim(); ++a) {
      const std::size_t ia = idx[static_cast<std::size_t>(a)];
      if (ia != 0 && ia != n) continue;
      double face_w = 1.0;
      for (int b = 0; b < s.dim(); ++b)
        if (b != a) face_w *= sw[idx[static_cast<std::size_t>(b)]];
      sum += (ia == n ? 1.0 : -1.0) * face_w * w[static_cast<std::size_t>(a)][node];
    }
  }
  return sum;
}

inline void require_vector(const FieldSample& u, const char* where) {
  if (u.components() != static_cast<std::size_t>(u.dim()))
    throw InvalidArgument(std::string(where) + ": expects a vector field");
}

inline void require_same_layout(const FieldSample& a, const FieldSample& b, const char* where) {
  if (a.domain() != b.domain() || a.shape() != b.shape() || a.dim() != b.dim())
    throw InvalidArgument(std::string(where) + ": samples have different layouts");
}

}  // namespace detail

/// Velocity gradient, G[i][j][node] = ∂_j u^i.
using Gradient = std::vector<std::vector<std::vector<double>>>;

inline Gradient gradient(const FieldSample& u) {
  detail::require_vector(u, "gradient");
  Gradient g;
  for (int i = 0; i < u.dim(); ++i) g.push_back(detail::gradient_scalar(u, u[static_cast<std::size_t>(i)]));
  return g;
}

inline std::vector<double> divergence(const FieldSample& u) {
  const auto g = gradient(u);
  std::vector<double> d(u.nodes(), 0.0);
  for (int i = 0; i < u.dim(); ++i)
    for (std::size_t node = 0; node < d.size(); ++node) d[node] += g[i][i][node];
  return d;
}

/// ω(u) = ½(∇u - ∇uᵀ) per node, row-major dim × dim.
class VorticityMatrix {
public:
  VorticityMatrix(int dim, std::size_t nodes) : dim_(dim), data_(static_cast<std::size_t>(dim * dim) * nodes, 0.0) {}

  int dim() const noexcept { return dim_; }
  std::size_t nodes() const noexcept { return data_.size() / static_cast<std::size_t>(dim_ * dim_); }
  double operator()(std::size_t node, int i, int j) const { return data_[index(node, i, j)]; }
  double& operator()(std::size_t node, int i, int j) { return data_[index(node, i, j)]; }

private:
  std::size_t index(std::size_t node, int i, int j) const {
    return node * static_cast<std::size_t>(dim_ * dim_) + static_cast<std::size_t>(i * dim_ + j);
  }
  int dim_;
  std::vector<double> data_;
};

inline VorticityMatrix vorticity_matrix(const FieldSample& u) {
  const auto g = gradient(u);
  VorticityMatrix w(u.dim(), u.nodes());
  for (std::size_t node = 0; node < u.nodes(); ++node)
    for (int i = 0; i < u.dim(); ++i)
      for (int j = i + 1; j < u.dim(); ++j) {
        const double a = 0.5 * (g[i][j][node] - g[j][i][node]);
        w(node, i, j) = a;
        w(node, j, i) = -a;
      }
  return w;
}

enum class Identity { vorticity_product, div_gradT, omegavsgrad };

inline const char* to_string(Identity id) {
  switch (id) {
    case Identity::vorticity_product: return "vorticity_product";
    case Identity::div_gradT: return "div_gradT";
    case Identity::omegavsgrad: return "omegavsgrad";
  }
  return "?";
}

struct IdentityOptions {
  /// max |div u| allowed, relative to max |∇u| (absolute floor 1e-12).
  double divergence_tolerance = 1e-2;
};

namespace detail {
inline void require_solenoidal(const FieldSample& u, const IdentityOptions& opt) {
  const auto g = gradient(u);
  double div_max = 0.0, grad_max = 0.0;
  for (std::size_t node = 0; node < u.nodes(); ++node) {
    double d = 0.0;
    for (int i = 0; i < u.dim(); ++i) {
      d += g[i][i][node];
      for (int j = 0; j < u.dim(); ++j) grad_max = std::max(grad_max, std::abs(g[i][j][node]));
    }
    div_max = std::max(div_max, std::abs(d));
  }
  if (div_max > std::max(1e-12, opt.divergence_tolerance * grad_max))
    throw PreconditionViolation("velocity is not divergence-free: max |div u|", div_max);
}

/// (∇u v)^j = v^i ∂_i u^j.
inline std::vector<std::vector<double>> advective(const Gradient& gu, const FieldSample& v) {
  const int d = v.dim();
  std::vector<std::vector<double>> w(static_cast<std::size_t>(d), std::vector<double>(v.nodes(), 0.0));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      for (std::size_t node = 0; node < v.nodes(); ++node) w[j][node] += v[i][node] * gu[j][i][node];
  return w;
}

inline std::vector<double> divergence_of(const FieldSample& layout, const std::vector<std::vector<double>>& w) {
  std::vector<double> d(layout.nodes(), 0.0);
  for (int j = 0; j < layout.dim(); ++j) {
    const auto g = gradient_scalar(layout, w[static_cast<std::size_t>(j)]);
    for (std::size_t node = 0; node < d.size(); ++node) d[node] += g[static_cast<std::size_t>(j)][node];
  }
  return d;
}
}  // namespace detail

/// Residual of a vector-calculus identity.
///  vorticity_product: max_x |2ω(u)·ω(v) - ∇u·∇v + div(∇u v)|        (div u = 0)
///  div_gradT:         max_x |div (∇u)ᵀ - ∇ div u|                    (v unused)
///  omegavsgrad:       |(∇u, ∇v) - 2(ω(u), ω(v)) - ∫_Γ (∇u v)·n|      (div u = 0)
inline double identity_residual(Identity which, const FieldSample& u, const FieldSample& v,
                                const IdentityOptions& opt = {}) {
  detail::require_vector(u, "identity_residual");
  detail::require_vector(v, "identity_residual");
  detail::require_same_layout(u, v, "identity_residual");
  const int d = u.dim();
  const std::size_t nodes = u.nodes();

  if (which == Identity::div_gradT) {
    // Σ_i ∂_i ∂_j u^i, with compact second-derivative stencils on the diagonal
    // terms on boxes, against ∂_j Σ_i ∂_i u^i.
    const auto gu = gradient(u);
    std::vector<double> div(nodes, 0.0);
    for (int i = 0; i < d; ++i)
      for (std::size_t node = 0; node < nodes; ++node) div[node] += gu[i][i][node];
    const auto grad_div = detail::gradient_scalar(u, div);
    double res = 0.0;
    for (int j = 0; j < d; ++j) {
      std::vector<double> lhs(nodes, 0.0);
      for (int i = 0; i < d; ++i) {
        std::vector<double> term;
        if (i == j && u.domain() == SampleDomain::box) {
          term = detail::box_derivative(u, u[static_cast<std::size_t>(i)], i, 2);
        } else {
          term = detail::gradient_scalar(u, gu[i][j])[static_cast<std::size_t>(i)];
        }
        for (std::size_t node = 0; node < nodes; ++node) lhs[node] += term[node];
      }
      for (std::size_t node = 0; node < nodes; ++node)
        res = std::max(res, std::abs(lhs[node] - grad_div[j][node]));
    }
    return res;
  }

  detail::require_solenoidal(u, opt);
  const auto gu = gradient(u);
  const auto gv = gradient(v);
  const auto w = detail::advective(gu, v);
  std::vector<double> two_omega(nodes, 0.0), grad_dot(nodes, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (std::size_t node = 0; node < nodes; ++node) {
        const double ou = 0.5 * (gu[i][j][node] - gu[j][i][node]);
        const double ov = 0.5 * (gv[i][j][node] - gv[j][i][node]);
        two_omega[node] += 2.0 * ou * ov;
        grad_dot[node] += gu[i][j][node] * gv[i][j][node];
      }

  if (which == Identity::vorticity_product) {
    const auto divw = detail::divergence_of(u, w);
    double res = 0.0;
    for (std::size_t node = 0; node < nodes; ++node)
      res = std::max(res, std::abs(two_omega[node] - grad_dot[node] + divw[node]));
    return res;
  }

  const auto vw = detail::volume_weights(u);
  return std::abs(detail::integrate(vw, grad_dot) - detail::integrate(vw, two_omega) -
                  detail::boundary_flux(u, w));
}

/// |(u, ∇f) + (div u, f) - ∫_Γ (u·n) f|.
inline double ibp_residual(const FieldSample& u, const FieldSample& f) {
  detail::require_vector(u, "ibp_residual");
  if (f.components() != 1) throw InvalidArgument("ibp_residual: f must be scalar");
  detail::require_same_layout(u, f, "ibp_residual");
  const auto gf = detail::gradient_scalar(f, f[0]);
  const auto div = divergence(u);
  std::vector<double> vol(u.nodes(), 0.0);
  for (std::size_t node = 0; node < u.nodes(); ++node) {
    for (int a = 0; a < u.dim(); ++a) vol[node] += u[a][node] * gf[a][node];
    vol[node] += div[node] * f[0][node];
  }
  std::vector<std::vector<double>> uf(static_cast<std::size_t>(u.dim()), std::vector<double>(u.nodes()));
  for (int a = 0; a < u.dim(); ++a)
    for (std::size_t node = 0; node < u.nodes(); ++node) uf[a][node] = u[a][node] * f[0][node];
  return std::abs(detail::integrate(detail::volume_weights(u), vol) - detail::boundary_flux(u, uf));
}

/// (ω(u), S) = Σ ∫ ω_ij S_ij for a constant matrix S.
inline double vorticity_pairing_matrix(const FieldSample& u, const std::array<std::array<double, 3>, 3>& S) {
  const auto w = vorticity_matrix(u);
  const auto vw = detail::volume_weights(u);
  double sum = 0.0;
  for (std::size_t node = 0; node < u.nodes(); ++node) {
    double p = 0.0;
    for (int i = 0; i < u.dim(); ++i)
      for (int j = 0; j < u.dim(); ++j) p += w(node, i, j) * S[i][j];
    sum += vw[node] * p;
  }
  return sum;
}

struct StreamResult {
  FieldSample f;
  FieldSample M;                  // components M00, M01, M10, M11
  double perp_gradient_error;     // max |∇⊥f - v|
  double div_M_error;             // max |div M - v|
};

/// Stream function with f = 0 on the boundary circle, f(r, θ) = -∫_r^1 v_θ ds, and
/// M = [[0, -f], [f, 0]] so that div M = ∇⊥f = v.
inline StreamResult stream_function_and_M(const FieldSample& v, double trace_tolerance = 1e-8,
                                          const IdentityOptions& opt = {}) {
  detail::require_vector(v, "stream_function_and_M");
  if (v.domain() != SampleDomain::disk || v.dim() != 2)
    throw InvalidArgument("stream_function_and_M: needs a 2-D disk sample");
  const std::size_t nr = v.shape()[0], nt = v.angles();

  double trace = 0.0;
  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t node = j * nr + nr - 1;
    const double th = v.polar(node).second;
    trace = std::max(trace, std::abs(v[0][node] * std::cos(th) + v[1][node] * std::sin(th)));
  }
  if (trace > trace_tolerance)
    throw InvalidArgument("stream_function_and_M: normal trace is nonzero (max |v.n| = " +
                          std::to_string(trace) + ")");
  detail::require_solenoidal(v, opt);

  // Backward cumulative integral along each ray, exact for cubics: interior
  // intervals use the four-point rule (-1, 13, 13, -1)/24 h, the first
  // interval next to r = 0 a one-sided four-point rule.
  std::vector<double> f(v.nodes(), 0.0);
  const double h = v.h();
  std::vector<double> vt(nr);
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      const std::size_t node = j * nr + i;
      const double th = v.polar(node).second;
      vt[i] = -std::sin(th) * v[0][node] + std::cos(th) * v[1][node];
    }
    double acc = 0.0;
    f[j * nr + nr - 1] = 0.0;
    for (std::size_t i = nr - 1; i-- > 0;) {
      double seg;
      if (i >= 1 && i + 2 < nr) {
        seg = h * (-vt[i - 1] + 13.0 * vt[i] + 13.0 * vt[i + 1] - vt[i + 2]) / 24.0;
      } else if (i + 2 >= nr) {
        seg = h * (vt[i - 2] - 5.0 * vt[i - 1] + 19.0 * vt[i] + 9.0 * vt[i + 1]) / 24.0;
      } else {
        seg = h * (9.0 * vt[i] + 19.0 * vt[i + 1] - 5.0 * vt[i + 2] + vt[i + 3]) / 24.0;
      }
      acc -= seg;
      f[j * nr + i] = acc;
    }
  }

  FieldSample fs = v.with_components({f});
  std::vector<double> minus_f(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) minus_f[i] = -f[i];
  FieldSample M = v.with_components({std::vector<double>(f.size(), 0.0), minus_f, f, std::vector<double>(f.size(), 0.0)});

  const auto gf = detail::gradient_scalar(fs, f);
  const auto g01 = detail::gradient_scalar(fs, M[1]);
  const auto g10 = detail::gradient_scalar(fs, M[2]);
  double perp_err = 0.0, div_err = 0.0;
  for (std::size_t node = 0; node < f.size(); ++node) {
    perp_err = std::max({perp_err, std::abs(-gf[1][node] - v[0][node]), std::abs(gf[0][node] - v[1][node])});
    div_err = std::max({div_err, std::abs(g01[1][node] - v[0][node]), std::abs(g10[0][node] - v[1][node])});
  }
  return StreamResult{std::move(fs), std::move(M), perp_err, div_err};
}

struct HelmholtzResult {
  FieldSample v;  // in H
  FieldSample p;  // potential, normalized by zero mean-mode value at r = 1
  std::vector<std::vector<double>> grad_p;
};

/// u = v + ∇p on the disk: per angular mode, ∇p is the weighted least-squares
/// (discrete L²(D)) projection of u onto discrete gradients. The result is
/// orthogonal to every discrete gradient, which is the weak form of div v = 0,
/// v·n = 0 on Γ.
inline HelmholtzResult helmholtz_project(const FieldSample& u) {
  detail::require_vector(u, "helmholtz_project");
  if (u.domain() != SampleDomain::disk) throw InvalidArgument("helmholtz_project: needs a disk sample");
  const std::size_t nr = u.shape()[0], nt = u.angles();
  const double h = u.h();
  const double dth = 2.0 * std::numbers::pi / static_cast<double>(nt);

  // polar components
  std::vector<double> ur(u.nodes()), ut(u.nodes());
  for (std::size_t node = 0; node < u.nodes(); ++node) {
    const double th = u.polar(node).second;
    ur[node] = std::cos(th) * u[0][node] + std::sin(th) * u[1][node];
    ut[node] = -std::sin(th) * u[0][node] + std::cos(th) * u[1][node];
  }

  std::vector<double> cs(nt), sn(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    cs[j] = std::cos(dth * static_cast<double>(j));
    sn[j] = std::sin(dth * static_cast<double>(j));
  }
  auto coeff = [&](const std::vector<double>& g, std::size_t i, std::size_t k, bool sine) {
    double s = 0.0;
    for (std::size_t j = 0; j < nt; ++j) s += g[j * nr + i] * (sine ? sn[(k * j) % nt] : cs[(k * j) % nt]);
    const double norm = (k == 0 || 2 * k == nt) ? 1.0 / static_cast<double>(nt) : 2.0 / static_cast<double>(nt);
    return s * norm;
  };

  // Radial differentiation matrix and weights.
  const FivePointStencil st(nr - 1, h, 1);
  Eigen::MatrixXd Dr = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nr));
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t k = 0; k < 5; ++k)
      Dr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(st.start(i) + k)) = st.weights(i)[k];
  const auto sw = simpson_weights(nr, h);
  Eigen::VectorXd sqrt_w(2 * nr);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = static_cast<double>(i + 1) * h;
    sqrt_w(static_cast<Eigen::Index>(i)) = std::sqrt(sw[i + 1] * r);
    sqrt_w(static_cast<Eigen::Index>(nr + i)) = sqrt_w(static_cast<Eigen::Index>(i));
  }

  std::vector<double> p(u.nodes(), 0.0), pr(u.nodes(), 0.0), pt(u.nodes(), 0.0);
  for (std::size_t k = 0; 2 * k <= nt; ++k) {
    const bool nyquist = 2 * k == nt;
    const double keff = nyquist ? 0.0 : static_cast<double>(k);
    for (bool sine : {false, true}) {
      if (sine && (k == 0 || nyquist)) continue;
      // cos part:  ∇(q cos kθ) = (q' cos kθ, -k q/r sin kθ)
      // sin part:  ∇(q sin kθ) = (q' sin kθ,  k q/r cos kθ)
      const double sign = sine ? 1.0 : -1.0;
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * nr), static_cast<Eigen::Index>(nr));
      G.topRows(static_cast<Eigen::Index>(nr)) = Dr;
      Eigen::VectorXd b(2 * nr);
      for (std::size_t i = 0; i < nr; ++i) {
        const double r = static_cast<double>(i + 1) * h;
        G(static_cast<Eigen::Index>(nr + i), static_cast<Eigen::Index>(i)) = sign * keff / r;
        b(static_cast<Eigen::Index>(i)) = coeff(ur, i, k, sine);
        b(static_cast<Eigen::Index>(nr + i)) = coeff(ut, i, k, !sine);
      }
      const bool gauge = keff == 0.0;  // constants have zero gradient: pin q(1) = 0
      const Eigen::Index cols = static_cast<Eigen::Index>(gauge ? nr - 1 : nr);
      const Eigen::MatrixXd A = sqrt_w.asDiagonal() * G.leftCols(cols);
      const Eigen::VectorXd rhs = sqrt_w.asDiagonal() * b;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
      if (qr.rank() < cols) throw NumericalError("helmholtz_project: singular mode solve");
      Eigen::VectorXd q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nr));
      q.head(cols) = qr.solve(rhs);
      if (!q.allFinite()) throw NumericalError("helmholtz_project: non-finite mode solve");
      const Eigen::VectorXd gq = G * q;
      for (std::size_t j = 0; j < nt; ++j) {
        const double ang_p = sine ? sn[(k * j) % nt] : cs[(k * j) % nt];
        const double ang_t = sine ? cs[(k * j) % nt] : sn[(k * j) % nt];
        for (std::size_t i = 0; i < nr; ++i) {
          const std::size_t node = j * nr + i;
          p[node] += q(static_cast<Eigen::Index>(i)) * ang_p;
          pr[node] += gq(static_cast<Eigen::Index>(i)) * ang_p;
          pt[node] += gq(static_cast<Eigen::Index>(nr + i)) * ang_t;
        }
      }
    }
  }

  std::vector<std::vector<double>> gp(2, std::vector<double>(u.nodes())), vc(2, std::vector<double>(u.nodes()));
  for (std::size_t node = 0; node < u.nodes(); ++node) {
    const double th = u.polar(node).second, c = std::cos(th), s = std::sin(th);
    gp[0][node] = c * pr[node] - s * pt[node];
    gp[1][node] = s * pr[node] + c * pt[node];
    vc[0][node] = u[0][node] - gp[0][node];
    vc[1][node] = u[1][node] - gp[1][node];
  }
  return HelmholtzResult{u.with_components(std::move(vc)), u.with_components({std::move(p)}), std::move(gp)};
}

/// Discrete L²(D) inner product of two vector fields on the same sample layout.
inline double inner_product(const FieldSample& layout, const std::vector<std::vector<double>>& a,
                            const std::vector<std::vector<double>>& b) {
  const auto w = detail::volume_weights(layout);
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    for (std::size_t node = 0; node < layout.nodes(); ++node) s += w[node] * a[c][node] * b[c][node];
  return s;
}

/// Smooth solenoidal fields from random Fourier potentials (wavenumbers π·{0, 1}):
/// d = 2, u = ∇⊥ψ; d = 3, u = curl A.
class RandomSolenoidal {
public:
  RandomSolenoidal(int dim, std::uint64_t seed) : dim_(dim) {
    if (dim != 2 && dim != 3) throw InvalidArgument("RandomSolenoidal: dim must be 2 or 3");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
    const int ncomp = dim == 2 ? 1 : 3;
    for (int c = 0; c < ncomp; ++c)
      for (int kx = 0; kx <= 1; ++kx)
        for (int ky = 0; ky <= 1; ++ky)
          for (int kz = 0; kz <= (dim == 3 ? 1 : 0); ++kz) {
            if (kx + ky + kz == 0) continue;
            modes_.push_back({c, {kx * std::numbers::pi, ky * std::numbers::pi, kz * std::numbers::pi},
                              amp(rng), phase(rng)});
          }
  }

  Point operator()(const Point& x) const {
    // gradient of each potential component
    std::array<Point, 3> g{};
    for (const auto& m : modes_) {
      const double arg = m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] + m.phase;
      const double d = -m.amp * std::sin(arg);
      for (int a = 0; a < 3; ++a) g[static_cast<std::size_t>(m.comp)][a] += d * m.k[a];
    }
    if (dim_ == 2) return {-g[0][1], g[0][0], 0.0};
    return {g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]};
  }

private:
  struct Mode {
    int comp;
    Point k;
    double amp;
    double phase;
  };
  int dim_;
  std::vector<Mode> modes_;
};

}  // namespace vsl
