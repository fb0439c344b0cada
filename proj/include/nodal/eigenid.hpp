#pragma once

// Global Laplacian eigenfunctions on R^n realized as plane-wave sums, the
// Coulomb-kernel ball identity
//   int_{|x-y|<=r} phi(y) |y-x|^{2-n} dy = Q_n(sqrt(lambda) r) phi(x) / lambda,
// and the wave-equation formulas (Kirchhoff in R^3, Poisson in R^2) for
// u_tt - Delta u = f with vanishing initial data.
//
// The Bessel function of the second kind never appears: it is excluded by
// regularity at r = 0, which the R(0) = 0 check exercises numerically.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <iterator>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/quadrature.hpp"
#include "nodal/specfun.hpp"

namespace nodal::eigenid {

using Vec = std::vector<double>;

/// Anything with dim() and a real value at a point of R^dim.
template <class F>
concept Field = requires(const F& f, std::span<const double> x) {
  { f.dim() } -> std::convertible_to<int>;
  { f(x) } -> std::convertible_to<double>;
};

struct PlaneWave {
  Vec wavevector;
  double amplitude = 1.0;
  double phase = 0.0;
};

/// sum_j amplitude_j cos(<k_j, x> + phase_j) with every |k_j|^2 = lambda, so
/// -Delta phi = lambda phi on all of R^n.
class PlaneWaveEigen {
 public:
  PlaneWaveEigen(int dim, double lambda, std::vector<PlaneWave> waves)
      : dim_(dim), lambda_(lambda), waves_(std::move(waves)) {
    if (dim < 2) throw DomainError("PlaneWaveEigen: dimension must be >= 2");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("PlaneWaveEigen: lambda must be positive");
    if (waves_.empty()) throw DomainError("PlaneWaveEigen: at least one wave is required");
    for (const auto& w : waves_) {
      if (static_cast<int>(w.wavevector.size()) != dim) throw DomainError("PlaneWaveEigen: wavevector dimension");
      double q = 0.0;
      for (double c : w.wavevector) q += c * c;
      if (std::abs(q - lambda) > 1e-10 * lambda) {
        throw DomainError("PlaneWaveEigen: |wavevector|^2 differs from lambda");
      }
    }
  }

  /// One wave of frequency sqrt(lambda) along `direction` (normalized here).
  static PlaneWaveEigen single(double lambda, Vec direction, double amplitude = 1.0, double phase = 0.0) {
    double n = 0.0;
    for (double c : direction) n += c * c;
    n = std::sqrt(n);
    if (!(n > 0.0)) throw DomainError("PlaneWaveEigen: zero direction");
    for (double& c : direction) c *= std::sqrt(lambda) / n;
    const int dim = static_cast<int>(direction.size());
    return PlaneWaveEigen(dim, lambda, {PlaneWave{std::move(direction), amplitude, phase}});
  }

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  const std::vector<PlaneWave>& waves() const { return waves_; }

  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& w : waves_) {
      double ph = w.phase;
      for (int i = 0; i < dim_; ++i) ph += w.wavevector[i] * x[i];
      s += w.amplitude * std::cos(ph);
    }
    return s;
  }

  PlaneWaveEigen scaled(double c) const {
    auto w = waves_;
    for (auto& p : w) p.amplitude *= c;
    return PlaneWaveEigen(dim_, lambda_, std::move(w));
  }

 private:
  int dim_;
  double lambda_;
  std::vector<PlaneWave> waves_;
};

inline double eval_eigen(const PlaneWaveEigen& phi, std::span<const double> x) {
  if (static_cast<int>(x.size()) != phi.dim()) throw DomainError("eval_eigen: point has wrong dimension");
  return phi(x);
}

/// sum_k coef_k phi_k with strictly increasing eigenvalues. Parts that share
/// an eigenvalue (relative 1e-12) are merged into one eigenfunction with
/// coefficient 1.
class EigenMix {
 public:
  struct Part {
    double coef;
    PlaneWaveEigen eigen;
  };

  EigenMix(int dim, std::vector<Part> parts) : dim_(dim) {
    if (parts.empty()) throw DomainError("EigenMix: at least one part is required");
    for (const auto& p : parts) {
      if (p.eigen.dim() != dim) throw DomainError("EigenMix: part has wrong dimension");
      if (p.coef == 0.0 || !std::isfinite(p.coef)) throw DomainError("EigenMix: coefficients must be nonzero");
    }
    std::stable_sort(parts.begin(), parts.end(),
                     [](const Part& a, const Part& b) { return a.eigen.lambda() < b.eigen.lambda(); });
    for (std::size_t i = 0; i < parts.size();) {
      std::size_t j = i + 1;
      const double lam = parts[i].eigen.lambda();
      while (j < parts.size() && std::abs(parts[j].eigen.lambda() - lam) <= 1e-12 * lam) ++j;
      if (j == i + 1) {
        parts_.push_back(parts[i]);
      } else {
        std::vector<PlaneWave> waves;
        for (std::size_t q = i; q < j; ++q) {
          for (auto w : parts[q].eigen.waves()) {
            w.amplitude *= parts[q].coef;
            waves.push_back(std::move(w));
          }
        }
        parts_.push_back({1.0, PlaneWaveEigen(dim, lam, std::move(waves))});
      }
      i = j;
    }
  }

  static EigenMix of(const PlaneWaveEigen& phi, double coef = 1.0) { return EigenMix(phi.dim(), {{coef, phi}}); }

  int dim() const { return dim_; }
  const std::vector<Part>& parts() const { return parts_; }

  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& p : parts_) s += p.coef * p.eigen(x);
    return s;
  }

 private:
  int dim_;
  std::vector<Part> parts_;
};

namespace detail {

// s^{(4-n)/2} J_{(n-2)/2}(s), continuous extension 0 at s = 0.
inline double qn_integrand(int n, double s) {
  if (s <= 0.0) return 0.0;
  return std::pow(s, 0.5 * (4 - n)) * specfun::bessel_j(0.5 * (n - 2), s);
}

inline double qn_prefactor(int n) {
  return std::pow(2.0, 0.5 * (n - 2)) * specfun::gamma_fn(0.5 * n) * n * specfun::ball_volume(n);
}

}  // namespace detail

/// Q_n(x) = 2^{(n-2)/2} Gamma(n/2) n omega_n int_0^x s^{(4-n)/2} J_{(n-2)/2}(s) ds,
/// by adaptive quadrature (no closed form is used, also not for n = 3).
inline double qn(int n, double x, double tol = 1e-12) {
  if (n < 3) throw DomainError("qn: require n >= 3");
  if (!(x >= 0.0)) throw DomainError("qn: require x >= 0");
  if (x == 0.0) return 0.0;
  const double pre = detail::qn_prefactor(n);
  const double integral = specfun::quad_adaptive([n](double s) { return detail::qn_integrand(n, s); }, 0.0, x,
                                                 tol / pre);
  return pre * integral;
}

/// S_n(s) = 2^{(n-2)/2} Gamma(n/2) n omega_n s^{(4-n)/2} J_{(n-2)/2}(s), the
/// integrand of Q_n including its prefactor.
inline double sn_profile(int n, double s) { return detail::qn_prefactor(n) * detail::qn_integrand(n, s); }

/// Mean of f over the sphere |y - x| = s using a fixed product rule.
template <Field F>
double radial_average(const F& f, std::span<const double> x, double s, const specfun::SphereRule& rule) {
  const int n = f.dim();
  if (static_cast<int>(x.size()) != n || rule.dim() != n) throw DomainError("radial_average: dimension mismatch");
  if (s == 0.0) return f(x);
  const double total = rule.integrate([&](std::span<const double> p) {
    double buf[16];
    for (int i = 0; i < n; ++i) buf[i] = x[i] + s * p[i];
    return f(std::span<const double>(buf, static_cast<std::size_t>(n)));
  });
  return total / specfun::sphere_area(n);
}

/// Orders tried when a rule has to be refined until two successive
/// estimates agree.
inline constexpr int kSphereOrders[] = {4, 6, 8, 10, 12, 14, 16, 20, 24, 28, 32, 40, 48, 56, 64};

/// Walks kSphereOrders until two successive radial averages at radius s
/// agree to within `target`, and returns the lower of the two orders (the
/// difference estimates its error). With `strict`, failure to
/// converge throws AccuracyError; otherwise the largest order is returned.
template <Field F>
int select_sphere_order(const F& f, std::span<const double> x, double s, double target, bool strict = true,
                        int max_order = 64) {
  double prev = 0.0;
  bool have_prev = false;
  int last = kSphereOrders[0];
  for (int q : kSphereOrders) {
    if (q > max_order) break;
    // keep the high-dimensional rules affordable
    const double points = 2.0 * q * std::pow(static_cast<double>(q), f.dim() - 2);
    if (have_prev && points > 4e7) break;
    const double av = radial_average(f, x, s, specfun::SphereRule(f.dim(), q));
    if (have_prev && std::abs(av - prev) < target) return last;
    prev = av;
    have_prev = true;
    last = q;
  }
  if (strict) {
    throw AccuracyError("select_sphere_order: spherical rule did not converge", prev, target);
  }
  return last;
}

/// Radial average with the order chosen adaptively to accuracy ~tol.
template <Field F>
double radial_average(const F& f, std::span<const double> x, double s, double tol = 1e-10) {
  if (!(s >= 0.0)) throw DomainError("radial_average: require s >= 0");
  if (s == 0.0) return f(x);
  const int q = select_sphere_order(f, x, s, 0.25 * tol);
  return radial_average(f, x, s, specfun::SphereRule(f.dim(), q));
}

/// int_{|y-x|<=r} f(y) |y-x|^{2-n} dy evaluated as
///   int_0^r n omega_n s Av(s) ds
/// with Av on a product spherical rule whose order is fixed at the outer
/// radius, and adaptive Gauss-Kronrod in s.
template <Field F>
double coulomb_ball_integral(const F& f, std::span<const double> x, double r, double tol = 1e-9) {
  const int n = f.dim();
  if (static_cast<int>(x.size()) != n) throw DomainError("coulomb_ball_integral: point has wrong dimension");
  if (!(r > 0.0)) throw DomainError("coulomb_ball_integral: require r > 0");
  if (!(tol > 0.0)) throw DomainError("coulomb_ball_integral: require tol > 0");
  const double area = specfun::sphere_area(n);
  const double kernel_mass = 0.5 * area * r * r;
  const int q = select_sphere_order(f, x, r, 0.25 * tol / kernel_mass);
  const specfun::SphereRule rule(n, q);
  auto integrand = [&](double s) { return area * s * radial_average(f, x, s, rule); };
  specfun::QuadOptions opt;
  opt.tol = 0.5 * tol;
  try {
    return specfun::integrate(integrand, 0.0, r, opt).value;
  } catch (const AccuracyError& e) {
    throw AccuracyError(std::string("coulomb_ball_integral: ") + e.what(), e.estimate(), e.error_estimate());
  }
}

struct IdentityCheck {
  double integral = 0.0;    // numerical Coulomb ball integral
  double predicted = 0.0;   // Q_n(sqrt(lambda) r) phi(x) / lambda
  double residual = 0.0;    // normalized difference
};

/// Compares the Coulomb ball integral with Q_n(sqrt(lambda) r) phi(x) / lambda.
/// residual = |difference| / (1 + |phi(x)| * n omega_n r^2 / 2), where
/// n omega_n r^2 / 2 is the kernel mass of the ball (an upper bound for
/// |Q_n(sqrt(lambda) r)| / lambda).
inline IdentityCheck verify_identity(const PlaneWaveEigen& phi, std::span<const double> x, double r,
                                     double tol = 1e-9) {
  const int n = phi.dim();
  if (n < 3) throw DomainError("verify_identity: require n >= 3");
  IdentityCheck out;
  out.integral = coulomb_ball_integral(phi, x, r, tol);
  const double lam = phi.lambda();
  const double phix = phi(x);
  out.predicted = qn(n, std::sqrt(lam) * r) / lam * phix;
  const double scale = 0.5 * specfun::sphere_area(n) * r * r;
  out.residual = std::abs(out.integral - out.predicted) / (1.0 + std::abs(phix) * scale);
  return out;
}

struct OdeCheck {
  double residual = 0.0;  // r^2 R'' + (n-3) r R' - (n-3) R + lambda r^2 R
  double scale = 0.0;     // sum of the magnitudes of the four terms
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

/// R(r) = n omega_n r Av(r) (the derivative of the Coulomb ball integral in
/// r), differentiated by central differences with step 1e-4 max(1, r), and
/// inserted into r^2 R'' + (n-3) r R' - (n-3) R + lambda r^2 R.
inline OdeCheck ode_residual_R(int n, const PlaneWaveEigen& phi, std::span<const double> x, double r) {
  if (n < 4 || phi.dim() != n) throw DomainError("ode_residual_R: require n >= 4 matching phi");
  if (!(r > 0.0)) throw DomainError("ode_residual_R: require r > 0");
  const double h = 1e-4 * std::max(1.0, r);
  const double area = specfun::sphere_area(n);
  const int q = select_sphere_order(phi, x, r + h, 1e-15, false, 48);
  const specfun::SphereRule rule(n, q);
  auto R = [&](double s) { return area * s * radial_average(phi, x, s, rule); };
  const double rm = R(r - h);
  const double r0 = R(r);
  const double rp = R(r + h);
  const double d1 = (rp - rm) / (2.0 * h);
  const double d2 = (rp - 2.0 * r0 + rm) / (h * h);
  const double lam = phi.lambda();
  const double t1 = r * r * d2;
  const double t2 = (n - 3.0) * r * d1;
  const double t3 = -(n - 3.0) * r0;
  const double t4 = lam * r * r * r0;
  return {t1 + t2 + t3 + t4, std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)};
}

/// R(s) = n omega_n s Av(s) at a single radius (used for R(0) = 0).
inline double radial_derivative_R(const PlaneWaveEigen& phi, std::span<const double> x, double s) {
  return specfun::sphere_area(phi.dim()) * s * radial_average(phi, x, s, 1e-12);
}

/// Time factor of the solution u(t, x) = wave_factor(lambda, t) phi(x) of
/// u_tt - Delta u = phi, u(0) = u_t(0) = 0:  (1 - cos(sqrt(lambda) t)) / lambda.
/// It vanishes at t* = 2 pi / sqrt(lambda).
inline double wave_factor(double lambda, double t) {
  if (!(lambda > 0.0)) throw DomainError("wave_factor: require lambda > 0");
  if (!(t >= 0.0)) throw DomainError("wave_factor: require t >= 0");
  return (1.0 - std::cos(std::sqrt(lambda) * t)) / lambda;
}

/// Closed-form solution for a mixed source: sum_k a_k wave_factor(lambda_k, t) phi_k(x).
inline double wave_closed_form(const EigenMix& mix, std::span<const double> x, double t) {
  double s = 0.0;
  for (const auto& p : mix.parts()) s += p.coef * wave_factor(p.eigen.lambda(), t) * p.eigen(x);
  return s;
}

inline double wave_closed_form(const PlaneWaveEigen& phi, std::span<const double> x, double t) {
  return wave_factor(phi.lambda(), t) * phi(x);
}

/// Kirchhoff formula in R^3: u(t, x) = (1/4 pi) int_{B(x,t)} f(y) / |y - x| dy.
template <Field F>
double kirchhoff_3d(const F& source, std::span<const double> x, double t, double tol = 1e-8) {
  if (source.dim() != 3) throw DomainError("kirchhoff_3d: source must live in R^3");
  if (!(t > 0.0)) throw DomainError("kirchhoff_3d: require t > 0");
  const double four_pi = 4.0 * std::numbers::pi;
  return coulomb_ball_integral(source, x, t, four_pi * tol) / four_pi;
}

/// Poisson (Duhamel) formula in R^2:
///   u(t, x) = (1/2 pi) int_0^t int_{B(x,tau)} f(y) / sqrt(tau^2 - |y-x|^2) dy dtau
/// with tau = t - s. Writing y = x + tau sin(beta) omega turns the inner
/// integral into tau int_0^{pi/2} sin(beta) int_0^{2 pi} f domega dbeta, whose
/// integrand is smooth (the arcsine form of Chebyshev-Gauss); adaptive
/// quadrature is used in tau.
template <Field F>
double poisson_2d(const F& source, std::span<const double> x, double t, double tol = 1e-8) {
  if (source.dim() != 2) throw DomainError("poisson_2d: source must live in R^2");
  if (!(t > 0.0)) throw DomainError("poisson_2d: require t > 0");
  auto inner = [&](double tau, int q) {
    const specfun::QuadRule beta = specfun::gauss_legendre(q, 0.0, 0.5 * std::numbers::pi);
    const int naz = 2 * q;
    CompensatedSum acc;
    for (int i = 0; i < q; ++i) {
      const double rho = tau * std::sin(beta.nodes[i]);
      CompensatedSum ring;
      for (int j = 0; j < naz; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / naz;
        const double y[2] = {x[0] + rho * std::cos(ph), x[1] + rho * std::sin(ph)};
        ring.add(source(std::span<const double>(y, 2)));
      }
      acc.add(beta.weights[i] * std::sin(beta.nodes[i]) * ring.value() * (2.0 * std::numbers::pi / naz));
    }
    return acc.value();
  };
  // An error e in the inner integral moves u by at most e t^2 / (4 pi); the
  // order is fixed at tau = t, where the ring integrand is most oscillatory.
  const double target = 0.25 * tol * 4.0 * std::numbers::pi / (t * t);
  int q = 0;
  double prev = 0.0;
  for (int cand : kSphereOrders) {
    const double v = inner(t, cand);
    if (q != 0 && std::abs(v - prev) < target) {
      q = cand;
      break;
    }
    if (cand == kSphereOrders[std::size(kSphereOrders) - 1]) {
      throw AccuracyError("poisson_2d: angular rule did not converge", v, std::abs(v - prev));
    }
    prev = v;
    q = cand;
  }
  specfun::QuadOptions opt;
  opt.tol = 0.5 * tol * 2.0 * std::numbers::pi;
  const double integral = specfun::integrate([&](double tau) { return tau * inner(tau, q); }, 0.0, t, opt).value;
  return integral / (2.0 * std::numbers::pi);
}

/// u_tt - Delta u - phi at (t, x) for u = wave_factor(lambda, t) phi(x),
/// with central differences of step 1e-3 in t and in each coordinate.
inline double wave_pde_residual(double lambda, const PlaneWaveEigen& phi, std::span<const double> x, double t) {
  if (!(t > 0.0)) throw DomainError("wave_pde_residual: require t > 0");
  const double h = 1e-3;
  const int n = phi.dim();
  Vec y(x.begin(), x.end());
  const double p0 = phi(x);
  const double w0 = wave_factor(lambda, t);
  const double utt = (wave_factor(lambda, t + h) - 2.0 * w0 + wave_factor(lambda, std::max(0.0, t - h))) /
                     (h * h) * p0;
  double lap = 0.0;
  for (int i = 0; i < n; ++i) {
    y[i] = x[i] + h;
    const double fp = phi(y);
    y[i] = x[i] - h;
    const double fm = phi(y);
    y[i] = x[i];
    lap += (fp - 2.0 * p0 + fm) / (h * h);
  }
  return utt - w0 * lap - p0;
}

/// Residual of u = sum_k a_k wave_factor(lambda_k, t) phi_k for a mixed source.
inline double wave_pde_residual(const EigenMix& mix, std::span<const double> x, double t) {
  double s = 0.0;
  for (const auto& p : mix.parts()) s += p.coef * wave_pde_residual(p.eigen.lambda(), p.eigen, x, t);
  return s;
}

/// 2 pi sum_k lambda_k^{-1/2}.
inline double bound_theorem3(const EigenMix& mix) {
  double s = 0.0;
  for (const auto& p : mix.parts()) s += 1.0 / std::sqrt(p.eigen.lambda());
  return 2.0 * std::numbers::pi * s;
}

}  // namespace nodal::eigenid
