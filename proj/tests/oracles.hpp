#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's special functions or quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Integer-order Bessel J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt; the
/// trapezoid rule converges geometrically for this periodic integrand.
inline double bessel_j_int(int n, double x, int points = 400) {
  double s = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double t = pi * i / points;
    const double w = (i == 0 || i == points) ? 0.5 : 1.0;
    s += w * std::cos(n * t - x * std::sin(t));
  }
  return s / points;
}

/// Half-integer orders from the spherical Bessel closed forms.
inline double bessel_j_half(int twice_nu, double x) {
  const double c = std::sqrt(2.0 / (pi * x));
  switch (twice_nu) {
    case 1: return c * std::sin(x);
    case 3: return c * (std::sin(x) / x - std::cos(x));
    case 5: return c * ((3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 * std::cos(x) / x);
    default: return std::nan("");
  }
}

/// Power series in long double, for moderate x.
inline double bessel_j_series(double nu, double x) {
  long double term = std::pow(0.5L * x, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  const long double q = -0.25L * x * x;
  for (int k = 1; k < 300; ++k) {
    term *= q / (k * (k + static_cast<long double>(nu)));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

/// Smallest positive root of g in (lo, hi) by plain bisection.
inline double bisect(const std::function<double(double)>& g, double lo, double hi, int steps = 200) {
  double glo = g(lo);
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// C_m^lam(t) from the explicit sum
///   sum_k (-1)^k Gamma(m-k+lam) / (Gamma(lam) k! (m-2k)!) (2t)^(m-2k).
inline double gegenbauer_sum(int m, double lam, double t) {
  long double s = 0.0L;
  for (int k = 0; 2 * k <= m; ++k) {
    const long double c = std::exp(std::lgamma(static_cast<long double>(m - k) + lam) - std::lgamma(static_cast<long double>(lam)) -
                                   std::lgamma(k + 1.0L) - std::lgamma(m - 2.0L * k + 1.0L));
    s += (k % 2 ? -1.0L : 1.0L) * c * std::pow(2.0L * t, static_cast<long double>(m - 2 * k));
  }
  return static_cast<double>(s);
}

/// Fourier coefficient int_{T^d} f(x) e^{-2 pi i <k, x>} dx by the tensor
/// trapezoid rule with n points per axis (exact for frequencies < n/2).
inline std::complex<double> fourier_coefficient(const std::function<double(const std::vector<double>&)>& f, int d,
                                                const std::vector<int>& k, int n) {
  std::complex<double> s = 0.0;
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  long long total = 1;
  for (int a = 0; a < d; ++a) total *= n;
  for (long long p = 0; p < total; ++p) {
    long long rem = p;
    double ph = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % n);
      rem /= n;
      x[a] = static_cast<double>(idx[a]) / n;
      ph += k[a] * x[a];
    }
    s += f(x) * std::polar(1.0, -2.0 * pi * ph);
  }
  return s / static_cast<double>(total);
}

/// Fourier transform of the indicator of the d-ball of radius delta at
/// |k| = kn, from the slice formula
///   int_{-delta}^{delta} V_{d-1}((delta^2 - s^2)^{1/2}) cos(2 pi kn s) ds,
/// V_m(rho) the m-volume of the m-ball; substitution s = delta sin(theta).
inline double ball_indicator_transform(int d, double delta, double kn) {
  const double vm = std::pow(pi, (d - 1) / 2.0) / std::tgamma((d - 1) / 2.0 + 1.0);
  auto f = [&](double th) {
    const double c = std::cos(th);
    return vm * std::pow(delta * c, d - 1) * std::cos(2.0 * pi * kn * delta * std::sin(th)) * delta * c;
  };
  return simpson(f, -pi / 2, pi / 2, 20000);
}

/// Classical RK4 for T'' + lam T = 1, T(0) = T'(0) = 0, integrated to t.
inline double wave_time_factor_rk4(double lam, double t, int steps = 20000) {
  double y = 0.0;
  double v = 0.0;
  const double h = t / steps;
  auto acc = [&](double yy) { return 1.0 - lam * yy; };
  for (int i = 0; i < steps; ++i) {
    const double k1y = v, k1v = acc(y);
    const double k2y = v + 0.5 * h * k1v, k2v = acc(y + 0.5 * h * k1y);
    const double k3y = v + 0.5 * h * k2v, k3v = acc(y + 0.5 * h * k2y);
    const double k4y = v + h * k3v, k4v = acc(y + h * k3y);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return y;
}

/// int_{|y| <= r} cos(<k, y>) |y|^{2-n} dy for |k| = kn, as the double
/// integral |S^{n-2}| int_0^r s int_0^pi cos(kn s cos th) sin^{n-2} th dth ds.
inline double coulomb_plane_wave(int n, double kn, double r) {
  const double area_nm2 = 2.0 * std::pow(pi, (n - 1) / 2.0) / std::tgamma((n - 1) / 2.0);
  auto inner = [&](double s) {
    return simpson([&](double th) { return std::cos(kn * s * std::cos(th)) * std::pow(std::sin(th), n - 2); }, 0.0,
                   pi, 400);
  };
  return area_nm2 * simpson([&](double s) { return s * inner(s); }, 0.0, r, 400);
}

/// Surface area of the unit sphere in R^n.
inline double sphere_area(int n) { return 2.0 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0); }

}  // namespace oracle
