#pragma once

// Zonal-harmonic expansions on S^{d-1}, Funk-Hecke multipliers of zonal
// kernels, and the kernel that annihilates a chosen degree.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/quadrature.hpp"
#include "nodal/specfun.hpp"

namespace nodal::sphere {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// weight * C_degree^{(d-2)/2}(<x, pole>)
struct ZonalTerm {
  int degree = 1;
  Vec pole;
  double weight = 0.0;
};

/// Finite sum of zonal harmonics on S^{d-1}, d >= 3.
class SphereFn {
 public:
  SphereFn(int dim, std::vector<ZonalTerm> terms) : dim_(dim), terms_(std::move(terms)) {
    if (dim < 3) throw DomainError("SphereFn: dimension must be >= 3");
    for (const auto& t : terms_) {
      if (static_cast<int>(t.pole.size()) != dim) throw DomainError("SphereFn: pole has wrong dimension");
      if (std::abs(norm(t.pole) - 1.0) > 1e-12) throw DomainError("SphereFn: pole is not a unit vector");
      if (t.degree < 1) throw DomainError("SphereFn: degree must be >= 1 (mean value 0)");
      if (!std::isfinite(t.weight)) throw DomainError("SphereFn: non-finite weight");
    }
  }

  /// Validates a non-empty degree set; convolution results may be empty.
  static SphereFn checked(int dim, std::vector<ZonalTerm> terms) {
    if (terms.empty()) throw DomainError("SphereFn: at least one term is required");
    return SphereFn(dim, std::move(terms));
  }

  int dim() const { return dim_; }
  const std::vector<ZonalTerm>& terms() const { return terms_; }
  double gegenbauer_index() const { return 0.5 * (dim_ - 2); }

  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& t : terms_) out.push_back(t.degree);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // No unit-norm check; used on grids already known to lie on the sphere.
  double eval_unchecked(std::span<const double> x) const {
    const double lam = gegenbauer_index();
    double s = 0.0;
    for (const auto& t : terms_) {
      s += t.weight * specfun::gegenbauer(t.degree, lam, std::clamp(dot(x, t.pole), -1.0, 1.0));
    }
    return s;
  }

 private:
  int dim_;
  std::vector<ZonalTerm> terms_;
};

inline double eval(const SphereFn& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw DomainError("sphere::eval: point has wrong dimension");
  if (std::abs(norm(x) - 1.0) > 1e-10) throw DomainError("sphere::eval: point is not on the unit sphere");
  return f.eval_unchecked(x);
}

/// Kernel g : [-1, 1] -> R used in sphere convolutions. Regular kernels are
/// C^2 bumps scale * (1 - u^2)^3, u = (t - center) / half_width.
class ZonalKernel {
 public:
  static ZonalKernel bump(double center, double half_width, double scale = 1.0) {
    if (!(half_width > 0.0)) throw DomainError("ZonalKernel: half width must be positive");
    if (!(scale > 0.0)) throw DomainError("ZonalKernel: scale must be positive");
    if (center - half_width < -1.0 || center + half_width > 1.0) {
      throw DomainError("ZonalKernel: support must lie in [-1, 1]");
    }
    return ZonalKernel(Kind::kBump, center, half_width, scale);
  }

  // g == value on [-1, 1]; not a bump, intended for orthogonality checks.
  static ZonalKernel constant_for_testing(double value) {
    return ZonalKernel(Kind::kConstant, 0.0, 1.0, value);
  }

  double operator()(double t) const {
    if (kind_ == Kind::kConstant) return (t >= -1.0 && t <= 1.0) ? scale_ : 0.0;
    const double u = (t - center_) / half_width_;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double v = 1.0 - u * u;
    return scale_ * v * v * v;
  }

  double support_lo() const { return kind_ == Kind::kConstant ? -1.0 : center_ - half_width_; }
  double support_hi() const { return kind_ == Kind::kConstant ? 1.0 : center_ + half_width_; }
  double center() const { return center_; }
  double half_width() const { return half_width_; }
  double scale() const { return scale_; }
  bool is_bump() const { return kind_ == Kind::kBump; }

  ZonalKernel scaled(double c) const {
    ZonalKernel k = *this;
    k.scale_ *= c;
    return k;
  }

 private:
  enum class Kind { kBump, kConstant };
  ZonalKernel(Kind kind, double c, double h, double s) : kind_(kind), center_(c), half_width_(h), scale_(s) {}

  Kind kind_;
  double center_;
  double half_width_;
  double scale_;
};

/// int_{-1}^{1} g(t) * h(t) * (1 - t^2)^{(d-3)/2} dt over the support of g,
/// computed in the angle t = cos(theta) so the weight becomes
/// sin^{d-2}(theta) and stays smooth at t = +-1.
template <class H>
double weighted_kernel_integral(const ZonalKernel& g, int d, H&& h, int panels) {
  const double th_lo = std::acos(std::clamp(g.support_hi(), -1.0, 1.0));
  const double th_hi = std::acos(std::clamp(g.support_lo(), -1.0, 1.0));
  auto integrand = [&](double th) {
    const double t = std::cos(th);
    return g(t) * h(t) * std::pow(std::sin(th), d - 2);
  };
  return specfun::integrate_composite(integrand, th_lo, th_hi, panels, 24);
}

/// int g(t) C_k^{(d-2)/2}(t) (1 - t^2)^{(d-3)/2} dt
inline double funk_hecke_integral(const ZonalKernel& g, int k, int d) {
  if (d < 3) throw DomainError("funk_hecke_integral: d must be >= 3");
  if (k < 0) throw DomainError("funk_hecke_integral: degree must be >= 0");
  const double lam = 0.5 * (d - 2);
  const int panels = 8 + k;
  return weighted_kernel_integral(g, d, [&](double t) { return specfun::gegenbauer(k, lam, t); }, panels);
}

/// Funk-Hecke multiplier lambda_k(g): convolution with g(<x, .>) acts on
/// degree-k harmonics as multiplication by
///   |S^{d-2}| / C_k(1) * int g C_k (1 - t^2)^{(d-3)/2} dt,
/// so that lambda_0(1) = |S^{d-1}|.
inline double funk_hecke_eigenvalue(const ZonalKernel& g, int k, int d) {
  const double lam = 0.5 * (d - 2);
  return specfun::sphere_area(d - 1) / specfun::gegenbauer_at_one(k, lam) * funk_hecke_integral(g, k, d);
}

/// Term-wise convolution: each weight is multiplied by lambda_degree(g).
/// Terms whose new weight is below 1e-13 of the operator scale
/// lambda_0(g) * max|weight| are dropped.
inline SphereFn convolve(const SphereFn& f, const ZonalKernel& g) {
  const int d = f.dim();
  std::map<int, double> multiplier;
  for (int k : f.degrees()) multiplier[k] = funk_hecke_eigenvalue(g, k, d);
  double max_w = 0.0;
  for (const auto& t : f.terms()) max_w = std::max(max_w, std::abs(t.weight));
  const double cutoff = 1e-13 * std::abs(funk_hecke_eigenvalue(g, 0, d)) * max_w;
  std::vector<ZonalTerm> out;
  for (const auto& t : f.terms()) {
    ZonalTerm n = t;
    n.weight = t.weight * multiplier[t.degree];
    if (std::abs(n.weight) > cutoff) out.push_back(std::move(n));
  }
  return SphereFn(d, std::move(out));
}

/// Orthonormal basis of the orthogonal complement of unit vector x
/// (columns 2..d of the Householder reflection sending e_1 to x).
inline std::vector<Vec> complement_basis(std::span<const double> x) {
  const std::size_t d = x.size();
  Vec v(x.begin(), x.end());
  const double sign = x[0] >= 0.0 ? 1.0 : -1.0;
  v[0] += sign;  // v = x + sign e_1
  const double vv = dot(v, v);
  std::vector<Vec> basis;
  for (std::size_t j = 1; j < d; ++j) {
    Vec col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
    basis.push_back(std::move(col));
  }
  return basis;
}

/// int_{S^{d-1}} g(<x, y>) F(y) dsigma(y) by direct quadrature in
/// coordinates centred at x: y = cos(theta) x + sin(theta) omega with omega
/// on the great sphere orthogonal to x (product rule of the given order) and
/// composite Gauss-Legendre in theta over the kernel support.
template <class Fn>
double convolve_by_quadrature(Fn&& F, const ZonalKernel& g, std::span<const double> x, int order = 24,
                              int panels = 8) {
  const int d = static_cast<int>(x.size());
  const auto basis = complement_basis(x);
  const specfun::SphereRule omega_rule(d - 1, order);
  const double th_lo = std::acos(std::clamp(g.support_hi(), -1.0, 1.0));
  const double th_hi = std::acos(std::clamp(g.support_lo(), -1.0, 1.0));
  Vec y(d);
  Vec om(d - 1);
  auto ring = [&](double th) {
    const double c = std::cos(th);
    const double s = std::sin(th);
    const double weight = g(c) * std::pow(s, d - 2);
    if (weight == 0.0) return 0.0;
    CompensatedSum acc;
    for (std::size_t i = 0; i < omega_rule.size(); ++i) {
      const double w = omega_rule.node(i, om);
      for (int a = 0; a < d; ++a) {
        double v = c * x[a];
        for (int b = 0; b + 1 < d; ++b) v += s * om[b] * basis[b][a];
        y[a] = v;
      }
      acc.add(w * F(std::span<const double>(y)));
    }
    return weight * acc.value();
  };
  return specfun::integrate_composite(ring, th_lo, th_hi, panels, 24);
}

struct AnnihilatorInfo {
  ZonalKernel kernel;
  double largest_root;      // x_1 of C_m^{(d-2)/2}
  double support_floor;     // 1 - (d+4)^2 / (4 m^2)
  double moment;            // int g C_m w
  double abs_moment;        // int g |C_m| w
};

namespace detail {
// (1 - u^2)^3 bump integral of g*|C_m|*w on the support, t-space composite
// Gauss-Legendre (independent of the angle substitution used elsewhere).
inline double abs_moment(const ZonalKernel& g, int m, int d) {
  const double lam = 0.5 * (d - 2);
  auto h = [&](double t) {
    return g(t) * std::abs(specfun::gegenbauer(m, lam, t)) * std::pow(1.0 - t * t, 0.5 * (d - 3));
  };
  return specfun::integrate_composite(h, g.support_lo(), g.support_hi(), 64, 16);
}
}  // namespace detail

/// Nonnegative bump kernel supported in (1 - (d+4)^2/(4m^2), 1) whose
/// degree-m Funk-Hecke moment vanishes: a fixed-shape bump slides across the
/// largest Gegenbauer root and the centre is bisected on the sign of the
/// moment.
inline AnnihilatorInfo annihilator_bump_info(int m, int d) {
  if (d < 3) throw DomainError("annihilator_bump: d must be >= 3");
  if (!(2.0 * m > d + 4.0)) throw DomainError("annihilator_bump: require m > (d+4)/2");
  const double lam = 0.5 * (d - 2);
  const double x1 = specfun::gegenbauer_max_root(m, lam);
  const double floor = 1.0 - (d + 4.0) * (d + 4.0) / (4.0 * m * m);
  if (!(x1 > floor)) throw ConstructionError("annihilator_bump: largest root below support floor");
  double h = std::min({0.05, 0.45 * (x1 - floor), 0.45 * (1.0 - x1)});
  auto moment_at = [&](double c, double width) {
    return funk_hecke_integral(ZonalKernel::bump(c, width), m, d);
  };
  for (int shrink = 0; shrink < 60; ++shrink, h *= 0.5) {
    double lo = x1 - h;
    double hi = x1 + h;
    double mlo = moment_at(lo, h);
    double mhi = moment_at(hi, h);
    if (!((mlo < 0.0 && mhi > 0.0) || (mlo > 0.0 && mhi < 0.0))) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double mm = moment_at(mid, h);
      if (mm == 0.0) {
        lo = hi = mid;
        mlo = mhi = 0.0;
        break;
      }
      if ((mm < 0.0) == (mlo < 0.0)) {
        lo = mid;
        mlo = mm;
      } else {
        hi = mid;
        mhi = mm;
      }
    }
    const double c = std::abs(mlo) <= std::abs(mhi) ? lo : hi;
    ZonalKernel g = ZonalKernel::bump(c, h);
    return {g, x1, floor, moment_at(c, h), detail::abs_moment(g, m, d)};
  }
  throw ConstructionError("annihilator_bump: no sign-changing bracket around the largest root");
}

inline ZonalKernel annihilator_bump(int m, int d) { return annihilator_bump_info(m, d).kernel; }

/// pi^2 d sum over distinct degrees of 1/k.
inline double bound_theorem2(const SphereFn& f) {
  double s = 0.0;
  for (int k : f.degrees()) s += 1.0 / k;
  return std::numbers::pi * std::numbers::pi * f.dim() * s;
}

/// Upper bound for the first Dirichlet eigenvalue of a geodesic cap of
/// radius r on S^d (d = 2, 3, and d >= 4 cases).
inline double cap_lambda1_upper(int d, double r) {
  if (d < 2) throw DomainError("cap_lambda1_upper: d must be >= 2");
  if (!(r > 0.0 && r < std::numbers::pi)) throw DomainError("cap_lambda1_upper: r must lie in (0, pi)");
  const double r2 = r * r;
  if (d == 2) {
    const double j = specfun::bessel_first_zero(0.0);
    return j * j / r2 + 1.0 / 3.0;
  }
  if (d == 3) return std::numbers::pi * std::numbers::pi / r2 + 1.0;
  const double j = specfun::bessel_first_zero(0.5 * (d - 2));
  const double s = std::sin(r);
  return j * j / r2 - (d - 1.0) * (d - 1.0) / 4.0 + (d - 1.0) * (d - 3.0) / 4.0 * (1.0 / (s * s) - 1.0 / r2);
}

inline double geodesic_distance(std::span<const double> a, std::span<const double> b) {
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

}  // namespace nodal::sphere
