#pragma once

// Special functions used throughout the library: Gamma, ball volumes,
// Bessel J of real order and its first positive zero, Gegenbauer
// polynomials and their largest root.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"
#include "nodal/quadrature.hpp"

namespace nodal::specfun {

/// Order of a Bessel function of the first kind; finite and nonnegative.
class BesselOrder {
 public:
  BesselOrder(double nu) : nu_(nu) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(nu) || nu < 0.0) throw DomainError("BesselOrder: require finite nu >= 0");
  }
  double value() const { return nu_; }
  operator double() const { return nu_; }  // NOLINT(google-explicit-constructor)

 private:
  double nu_;
};

inline double gamma_fn(double x) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("gamma_fn: require finite x > 0");
  return std::tgamma(x);
}

/// Volume of the unit ball in R^n.
inline double ball_volume(int n) {
  if (n < 1) throw DomainError("ball_volume: require n >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Surface area of the unit sphere S^{n-1} in R^n, i.e. n * ball_volume(n).
inline double sphere_area(int n) { return n * ball_volume(n); }

namespace detail {

// Ascending series; accurate when x^2/4 is not large compared to nu + 1.
inline double bessel_j_series(double nu, double x) {
  const double q = 0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -q / (k * (k + nu));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > q) break;
  }
  return sum;
}

// Miller backward recurrence from order mu + N down to mu, where
// mu = frac(nu), normalized by the Neumann-type identity
//   (x/2)^mu = sum_k (mu + 2k) Gamma(mu + k) / k! * J_{mu+2k}(x).
inline double bessel_j_miller(double nu, double x) {
  const double mu = nu - std::floor(nu);
  const int n = static_cast<int>(std::floor(nu));
  const double top = std::max(static_cast<double>(n), x);
  int start = static_cast<int>(std::ceil(top + 50.0 + 8.0 * std::cbrt(top)));
  if (start % 2 != 0) ++start;

  // c_k for k = 0..start/2
  const int kmax = start / 2;
  std::vector<double> c(kmax + 1);
  c[0] = std::tgamma(mu + 1.0);
  double g = std::tgamma(mu + 1.0);  // Gamma(mu + k) / k! at k = 1
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) g *= (mu + k - 1.0) / k;
    c[k] = (mu + 2.0 * k) * g;
  }

  double j_next = 0.0;      // J_{mu+m+1}
  double j_cur = 1e-300;    // J_{mu+m}
  double sum = (start % 2 == 0) ? c[kmax] * j_cur : 0.0;
  double wanted = (start == n) ? j_cur : 0.0;
  for (int m = start; m > 0; --m) {
    const double j_prev = 2.0 * (mu + m) / x * j_cur - j_next;
    j_next = j_cur;
    j_cur = j_prev;  // now order mu + m - 1
    const int order = m - 1;
    if (order == n) wanted = j_cur;
    if (order % 2 == 0) sum += c[order / 2] * j_cur;
    if (std::abs(j_cur) > 1e250) {
      j_cur *= 1e-250;
      j_next *= 1e-250;
      sum *= 1e-250;
      wanted *= 1e-250;
    }
  }
  return wanted * std::pow(0.5 * x, mu) / sum;
}

}  // namespace detail

/// Bessel function of the first kind J_nu(x) for real nu >= 0, x >= 0.
inline double bessel_j(BesselOrder order, double x) {
  const double nu = order.value();
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j: require finite x >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= 8.0 || 0.25 * x * x <= nu + 1.0) return detail::bessel_j_series(nu, x);
  return detail::bessel_j_miller(nu, x);
}

/// Smallest strictly positive zero j_{nu,1} of J_nu. Scans upward from
/// max(nu, 0.1) in steps of 0.25 (the first zero exceeds nu), then bisects.
inline double bessel_first_zero(BesselOrder order) {
  const double nu = order.value();
  double lo = std::max(nu, 0.1);
  double flo = bessel_j(nu, lo);
  double hi = lo + 0.25;
  double fhi = bessel_j(nu, hi);
  while ((flo > 0.0) == (fhi > 0.0) && fhi != 0.0) {
    lo = hi;
    flo = fhi;
    hi += 0.25;
    fhi = bessel_j(nu, hi);
  }
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j(nu, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Gegenbauer polynomial C_m^{(lam)}(t) by the three-term recurrence
///   m C_m = 2 (m + lam - 1) t C_{m-1} - (m + 2 lam - 2) C_{m-2}.
inline double gegenbauer(int m, double lam, double t) {
  if (m < 0) throw DomainError("gegenbauer: require m >= 0");
  if (!(lam > -0.5)) throw DomainError("gegenbauer: require lam > -1/2");
  if (!(std::abs(t) <= 1.0 + 1e-14)) throw DomainError("gegenbauer: require |t| <= 1");
  t = std::clamp(t, -1.0, 1.0);
  if (m == 0) return 1.0;
  double c0 = 1.0;
  double c1 = 2.0 * lam * t;
  for (int k = 2; k <= m; ++k) {
    const double c2 = (2.0 * (k + lam - 1.0) * t * c1 - (k + 2.0 * lam - 2.0) * c0) / k;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

/// C_m^{(lam)}(1) = Gamma(m + 2 lam) / (m! Gamma(2 lam)).
inline double gegenbauer_at_one(int m, double lam) { return gegenbauer(m, lam, 1.0); }

/// Largest root of C_m^{(lam)} for m >= 1, lam > 0. Scans downward from 1
/// with a step below the local root spacing near t = 1, then bisects.
inline double gegenbauer_max_root(int m, double lam) {
  if (m < 1) throw DomainError("gegenbauer_max_root: require m >= 1");
  if (!(lam > 0.0)) throw DomainError("gegenbauer_max_root: require lam > 0");
  const double step = std::min(1e-3, 0.1 / (static_cast<double>(m) * m));
  double hi = 1.0;
  double fhi = gegenbauer(m, lam, hi);
  double lo = hi;
  double flo = fhi;
  while (true) {
    lo = std::max(-1.0, hi - step);
    flo = gegenbauer(m, lam, lo);
    if (flo == 0.0) return lo;
    if ((flo > 0.0) != (fhi > 0.0)) break;
    if (lo <= -1.0) throw ConstructionError("gegenbauer_max_root: no sign change found");
    hi = lo;
    fhi = flo;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = gegenbauer(m, lam, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Gauss-Gegenbauer rule with `order` nodes for the weight (1 - t^2)^(mu - 1/2)
/// on (-1, 1), mu > 0. Roots of C_order^(mu) by a fine scan plus bisection
/// (they are simple and at least ~2/order^2 apart); weights from
/// 1 / ((1 - t^2) C'(t)^2), normalized to the exact weight integral.
inline QuadRule gauss_gegenbauer(int order, double mu) {
  if (order < 1) throw DomainError("gauss_gegenbauer: order must be >= 1");
  if (!(mu > 0.0)) throw DomainError("gauss_gegenbauer: require mu > 0");
  QuadRule rule;
  rule.order = order;
  auto c = [&](double t) { return gegenbauer(order, mu, t); };
  const int half = order / 2;
  // roots are symmetric; scan (0, 1] and mirror
  std::vector<double> pos;
  const double step = 0.05 / (static_cast<double>(order) * order);
  double lo = 1.0;
  double flo = c(lo);
  while (static_cast<int>(pos.size()) < half) {
    const double hi = lo;
    const double fhi = flo;
    lo = std::max(0.0, hi - step);
    flo = c(lo);
    if ((flo > 0.0) == (fhi > 0.0) && flo != 0.0) {
      if (lo <= 0.0) throw ConstructionError("gauss_gegenbauer: missing roots");
      continue;
    }
    double a = lo;
    double b = hi;
    double fa = flo;
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = c(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fm > 0.0) == (fa > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    pos.push_back(0.5 * (a + b));
  }
  for (int i = 0; i < half; ++i) rule.nodes.push_back(-pos[i]);
  if (order % 2 == 1) rule.nodes.push_back(0.0);
  for (int i = half - 1; i >= 0; --i) rule.nodes.push_back(pos[i]);
  double total = 0.0;
  for (double t : rule.nodes) {
    // d/dt C_m^(mu) = 2 mu C_{m-1}^(mu+1)
    const double d = 2.0 * mu * gegenbauer(order - 1, mu + 1.0, t);
    rule.weights.push_back(1.0 / ((1.0 - t * t) * d * d));
    total += rule.weights.back();
  }
  const double exact = std::sqrt(std::numbers::pi) * std::tgamma(mu + 0.5) / std::tgamma(mu + 1.0);
  for (double& w : rule.weights) w *= exact / total;
  return rule;
}

/// Product rule on the unit sphere S^{n-1} in R^n: Gauss-Gegenbauer in the
/// cosine of each polar angle, uniform trapezoid with 2*order nodes in the
/// azimuth. Exact for polynomials of degree <= 2*order - 1; weights sum to
/// |S^{n-1}|.
/// Nodes are generated on the fly, so rules for n = 6 with large orders
/// cost no memory.
class SphereRule {
 public:
  SphereRule(int ambient_dim, int order) : dim_(ambient_dim), order_(order) {
    if (ambient_dim < 2) throw DomainError("SphereRule: ambient dimension must be >= 2");
    if (ambient_dim > 16) throw DomainError("SphereRule: ambient dimension must be <= 16");
    if (order < 1) throw DomainError("SphereRule: order must be >= 1");
    // Polar level j (0-based) carries weight sin^m, m = n-2-j, i.e.
    // (1 - t^2)^((m-1)/2) dt in t = cos(theta).
    for (int j = 0; j + 2 < dim_; ++j) {
      const QuadRule gg = gauss_gegenbauer(order, 0.5 * (dim_ - 2 - j));
      Level lev;
      for (int i = 0; i < order; ++i) {
        const double t = gg.nodes[i];
        lev.cos.push_back(t);
        lev.sin.push_back(std::sqrt(std::max(0.0, 1.0 - t * t)));
        lev.weight.push_back(gg.weights[i]);
      }
      levels_.push_back(std::move(lev));
    }
    const int naz = 2 * order;
    for (int i = 0; i < naz; ++i) {
      const double ph = 2.0 * std::numbers::pi * i / naz;
      az_cos_.push_back(std::cos(ph));
      az_sin_.push_back(std::sin(ph));
    }
    az_weight_ = 2.0 * std::numbers::pi / naz;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  std::size_t size() const {
    std::size_t n = az_cos_.size();
    for (const auto& l : levels_) n *= l.cos.size();
    return n;
  }

  /// Node `index` written into `out` (length dim); returns its weight.
  double node(std::size_t index, std::span<double> out) const {
    const std::size_t naz = az_cos_.size();
    const std::size_t ia = index % naz;
    index /= naz;
    double w = az_weight_;
    double scale = 1.0;
    const std::size_t nl = levels_.size();
    for (std::size_t j = 0; j < nl; ++j) {
      const auto& lev = levels_[j];
      const std::size_t ip = index % lev.cos.size();
      index /= lev.cos.size();
      out[j] = scale * lev.cos[ip];
      scale *= lev.sin[ip];
      w *= lev.weight[ip];
    }
    out[nl] = scale * az_cos_[ia];
    out[nl + 1] = scale * az_sin_[ia];
    return w;
  }

  /// Sum of weight * f(node) in a fixed order (deterministic under
  /// parallel evaluation). Work is split over the polar index combinations;
  /// each task sweeps one azimuthal ring.
  template <class F>
  double integrate(F&& f) const {
    const std::size_t naz = az_cos_.size();
    const std::size_t rings = size() / naz;
    const std::size_t nl = levels_.size();
    return parallel_sum(
        rings,
        [&](std::size_t ring) {
          double buf[16];
          double scale = 1.0;
          double w = az_weight_;
          std::size_t rem = ring;
          for (std::size_t j = 0; j < nl; ++j) {
            const auto& lev = levels_[j];
            const std::size_t ip = rem % lev.cos.size();
            rem /= lev.cos.size();
            buf[j] = scale * lev.cos[ip];
            scale *= lev.sin[ip];
            w *= lev.weight[ip];
          }
          const std::span<const double> p(buf, static_cast<std::size_t>(dim_));
          double acc = 0.0;
          for (std::size_t ia = 0; ia < naz; ++ia) {
            buf[nl] = scale * az_cos_[ia];
            buf[nl + 1] = scale * az_sin_[ia];
            acc += f(p);
          }
          return w * acc;
        },
        64);
  }

 private:
  struct Level {
    std::vector<double> cos, sin, weight;
  };
  int dim_;
  int order_;
  std::vector<Level> levels_;
  std::vector<double> az_cos_, az_sin_;
  double az_weight_ = 0.0;
};

}  // namespace nodal::specfun
