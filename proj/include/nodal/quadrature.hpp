#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"

namespace nodal::specfun {

/// Fixed quadrature rule on an interval. A Gauss-Legendre rule with `order`
/// nodes integrates polynomials of degree <= 2*order - 1 exactly.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  int exactness_degree() const { return 2 * order - 1; }

  template <class F>
  double integrate(F&& f) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < nodes.size(); ++i) s.add(weights[i] * f(nodes[i]));
    return s.value();
  }
};

/// Gauss-Legendre rule with `order` nodes on (a, b). Nodes from Newton
/// iteration on the Legendre recurrence.
inline QuadRule gauss_legendre(int order, double a = -1.0, double b = 1.0) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  if (!(a < b)) throw DomainError("gauss_legendre: require a < b");
  QuadRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // recompute derivative at the converged node
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 1; j <= order; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = order * (z * p0 - p1) / (z * z - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[order - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[order - 1 - i] = half * w;
  }
  return rule;
}

/// Composite Gauss-Legendre: `panels` equal panels with `order` nodes each.
template <class F>
double integrate_composite(F&& f, double a, double b, int panels, int order) {
  const QuadRule ref = gauss_legendre(order);
  const double width = (b - a) / panels;
  CompensatedSum s;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int i = 0; i < order; ++i) {
      const double t = lo + 0.5 * width * (ref.nodes[i] + 1.0);
      s.add(0.5 * width * ref.weights[i] * f(t));
    }
  }
  return s.value();
}

/// Caller-declared endpoint behaviour: the integrand behaves like
/// (t - a)^lower_exponent near a and (b - t)^upper_exponent near b, with
/// exponents > -1. Zero means regular. At the upper end f is evaluated at
/// b - s, which rounds for tiny s; strong upper singularities (exponent
/// near -1) are better moved to the lower end by reflection.
struct EndpointHint {
  double lower_exponent = 0.0;
  double upper_exponent = 0.0;
};

struct QuadOptions {
  double tol = 1e-10;
  int max_depth = 40;
  int max_intervals = 4000;
  EndpointHint hint{};
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  int depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// Gauss-Kronrod 7/15 on [a, b]; error is |K15 - G7|.
template <class F>
Segment gk15(F& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss), depth};
}

// Globally adaptive bisection on a regular integrand.
template <class F>
QuadResult adapt(F& f, double a, double b, const QuadOptions& opt) {
  std::priority_queue<Segment> open;
  std::vector<Segment> closed;
  int evaluations = 15;
  Segment first = gk15(f, a, b, 0);
  double value = first.value;
  double error = first.error;
  open.push(first);
  auto converged = [&] {
    return error <= opt.tol || error <= 50.0 * 2.2e-16 * std::abs(value);
  };
  while (!open.empty() && !converged()) {
    if (static_cast<int>(open.size() + closed.size()) >= opt.max_intervals) break;
    Segment s = open.top();
    open.pop();
    if (s.depth >= opt.max_depth) {
      closed.push_back(s);
      continue;
    }
    const double mid = 0.5 * (s.a + s.b);
    Segment l = gk15(f, s.a, mid, s.depth + 1);
    Segment r = gk15(f, mid, s.b, s.depth + 1);
    evaluations += 30;
    value += l.value + r.value - s.value;
    error += l.error + r.error - s.error;
    open.push(l);
    open.push(r);
  }
  // Re-sum from the leaves to avoid drift from the running updates.
  CompensatedSum v;
  CompensatedSum e;
  while (!open.empty()) {
    v.add(open.top().value);
    e.add(open.top().error);
    open.pop();
  }
  for (const auto& s : closed) {
    v.add(s.value);
    e.add(s.error);
  }
  return {v.value(), e.value(), evaluations};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. Endpoint power
/// singularities declared in opt.hint are removed by the substitution
/// u = (t - a)^(1 + alpha) (resp. at b) on the half-interval next to that end.
/// Throws AccuracyError (carrying the best estimate) if the error estimate
/// stays above opt.tol once the depth or interval budget is exhausted.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  if (!(a < b)) throw DomainError("integrate: require a < b");
  if (!(opt.tol > 0.0)) throw DomainError("integrate: tol must be positive");
  const double alo = opt.hint.lower_exponent;
  const double ahi = opt.hint.upper_exponent;
  if (alo <= -1.0 || ahi <= -1.0) throw DomainError("integrate: endpoint exponents must exceed -1");

  QuadResult total;
  auto accumulate = [&](const QuadResult& r) {
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  };
  QuadOptions part = opt;
  const bool split = alo != 0.0 || ahi != 0.0;
  if (!split) {
    accumulate(detail::adapt(f, a, b, opt));
  } else {
    part.tol = 0.5 * opt.tol;
    const double mid = 0.5 * (a + b);
    if (alo != 0.0) {
      const double p = 1.0 + alo;
      auto g = [&](double u) {
        const double s = std::pow(u, 1.0 / p);
        return f(a + s) * s / (p * u);
      };
      accumulate(detail::adapt(g, 0.0, std::pow(mid - a, p), part));
    } else {
      accumulate(detail::adapt(f, a, mid, part));
    }
    if (ahi != 0.0) {
      const double p = 1.0 + ahi;
      auto g = [&](double u) {
        const double s = std::pow(u, 1.0 / p);
        return f(b - s) * s / (p * u);
      };
      accumulate(detail::adapt(g, 0.0, std::pow(b - mid, p), part));
    } else {
      accumulate(detail::adapt(f, mid, b, part));
    }
  }
  if (!(total.error <= opt.tol || total.error <= 100.0 * 2.2e-16 * std::abs(total.value))) {
    throw AccuracyError("integrate: tolerance " + std::to_string(opt.tol) +
                            " not reached on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
                        total.value, total.error);
  }
  return total;
}

template <class F>
double quad_adaptive(F&& f, double a, double b, double tol = 1e-10, EndpointHint hint = {}) {
  QuadOptions opt;
  opt.tol = tol;
  opt.hint = hint;
  return integrate(std::forward<F>(f), a, b, opt).value;
}

}  // namespace nodal::specfun
