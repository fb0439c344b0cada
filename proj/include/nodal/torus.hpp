#pragma once

// Real trigonometric polynomials on the torus T^d = R^d / Z^d with
// f(x) = sum_k a_k exp(2 pi i <x, k>), their frequency shells, the two
// sign-change radius bounds, and the ball-indicator smoothing that removes
// the top frequency shell.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"
#include "nodal/specfun.hpp"

namespace nodal::torus {

using Complex = std::complex<double>;

/// Integer frequency k in Z^d.
using FreqVector = std::vector<int>;

inline long long norm_sq(const FreqVector& k) {
  long long s = 0;
  for (int c : k) s += static_cast<long long>(c) * c;
  return s;
}

inline FreqVector negate(const FreqVector& k) {
  FreqVector m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) m[i] = -k[i];
  return m;
}

// True for the member of each {k, -k} pair used as representative
// (first nonzero component positive).
inline bool is_representative(const FreqVector& k) {
  for (int c : k) {
    if (c != 0) return c > 0;
  }
  return false;
}

/// Real-valued, mean-zero trigonometric polynomial. Immutable; the
/// coefficient table always holds both k and -k with a_{-k} = conj(a_k).
class TrigPoly {
 public:
  using CoeffMap = std::map<FreqVector, Complex>;

  /// Full table; Hermitian symmetry is checked, not imposed.
  static TrigPoly from_coefficients(int dim, CoeffMap coeffs) {
    validate_keys(dim, coeffs);
    for (const auto& [k, a] : coeffs) {
      const auto it = coeffs.find(negate(k));
      if (it == coeffs.end()) {
        throw DomainError("TrigPoly: missing conjugate partner of a stored frequency");
      }
      const double tol = 1e-12 * std::max(1.0, std::abs(a));
      if (std::abs(it->second - std::conj(a)) > tol) {
        throw DomainError("TrigPoly: coefficients violate a_{-k} = conj(a_k)");
      }
    }
    return TrigPoly(dim, std::move(coeffs));
  }

  /// One entry per +/- pair; the conjugate partner is synthesized. Listing
  /// both k and -k is rejected as ambiguous.
  static TrigPoly from_half(int dim, const std::vector<std::pair<FreqVector, Complex>>& terms) {
    CoeffMap full;
    for (const auto& [k, a] : terms) {
      const FreqVector mk = negate(k);
      if (full.count(k) || full.count(mk)) {
        throw DomainError("TrigPoly: frequency listed twice (a pair needs one representative)");
      }
      full[k] = a;
      full[mk] = std::conj(a);
    }
    validate_keys(dim, full);
    return TrigPoly(dim, std::move(full));
  }

  /// Convenience: sum of c * cos(2 pi <k, x> + phase) terms.
  static TrigPoly from_cosines(int dim, const std::vector<std::pair<FreqVector, double>>& terms) {
    std::vector<std::pair<FreqVector, Complex>> half;
    half.reserve(terms.size());
    for (const auto& [k, c] : terms) half.emplace_back(k, Complex(0.5 * c, 0.0));
    return from_half(dim, half);
  }

  int dim() const { return dim_; }
  const CoeffMap& coeffs() const { return coeffs_; }

  Complex coefficient(const FreqVector& k) const {
    const auto it = coeffs_.find(k);
    return it == coeffs_.end() ? Complex{} : it->second;
  }

  double amplitude_sum() const {
    double s = 0.0;
    for (const auto& [k, a] : coeffs_) s += std::abs(a);
    return s;
  }

 private:
  TrigPoly(int dim, CoeffMap coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {}

  static void validate_keys(int dim, const CoeffMap& coeffs) {
    if (dim < 1) throw DomainError("TrigPoly: dimension must be >= 1");
    if (coeffs.empty()) throw DomainError("TrigPoly: at least one frequency is required");
    for (const auto& [k, a] : coeffs) {
      if (static_cast<int>(k.size()) != dim) throw DomainError("TrigPoly: frequency has wrong dimension");
      if (norm_sq(k) == 0) throw DomainError("TrigPoly: zero frequency (mean value must be 0)");
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw DomainError("TrigPoly: non-finite coefficient");
      }
    }
  }

  int dim_;
  CoeffMap coeffs_;
};

/// Distinct frequency norms, stored as exact integer squares.
struct ShellSet {
  std::vector<long long> norm_squares;  // strictly increasing

  std::size_t size() const { return norm_squares.size(); }
  std::vector<double> norms() const {
    std::vector<double> out;
    out.reserve(norm_squares.size());
    for (long long q : norm_squares) out.push_back(std::sqrt(static_cast<double>(q)));
    return out;
  }
  double top() const { return std::sqrt(static_cast<double>(norm_squares.back())); }
};

/// Full complex sum; its imaginary part is roundoff for valid input.
inline Complex eval_complex(const TrigPoly& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw DomainError("torus::eval: point has wrong dimension");
  Complex s{};
  for (const auto& [k, a] : f.coeffs()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += x[i] * k[i];
    phase *= 2.0 * std::numbers::pi;
    s += a * Complex(std::cos(phase), std::sin(phase));
  }
  return s;
}

inline double eval(const TrigPoly& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw DomainError("torus::eval: point has wrong dimension");
  // 2 Re(a_k e^{i theta}) over representatives
  double s = 0.0;
  for (const auto& [k, a] : f.coeffs()) {
    if (!is_representative(k)) continue;
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      // reduce k_i x_i mod 1 first to keep the phase small
      const double t = k[i] * x[i];
      phase += t - std::floor(t);
    }
    phase *= 2.0 * std::numbers::pi;
    s += 2.0 * (a.real() * std::cos(phase) - a.imag() * std::sin(phase));
  }
  return s;
}

/// Values on the uniform grid x = n / N, n in {0..N-1}^d, row-major with
/// the last axis fastest.
inline std::vector<double> eval_grid(const TrigPoly& f, int per_axis) {
  const int d = f.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<Complex> roots(per_axis);
  for (int m = 0; m < per_axis; ++m) {
    const double ph = 2.0 * std::numbers::pi * m / per_axis;
    roots[m] = Complex(std::cos(ph), std::sin(ph));
  }
  std::vector<std::pair<FreqVector, Complex>> reps;
  for (const auto& [k, a] : f.coeffs()) {
    if (is_representative(k)) reps.emplace_back(k, a);
  }
  std::vector<double> out(total);
  parallel_chunks(total, 8192, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<int> idx(d);
    for (std::size_t p = b; p < e; ++p) {
      std::size_t rem = p;
      for (int i = d - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(rem % per_axis);
        rem /= per_axis;
      }
      double s = 0.0;
      for (const auto& [k, a] : reps) {
        long long m = 0;
        for (int i = 0; i < d; ++i) m += static_cast<long long>(k[i]) * idx[i];
        m %= per_axis;
        if (m < 0) m += per_axis;
        s += 2.0 * (a * roots[static_cast<std::size_t>(m)]).real();
      }
      out[p] = s;
    }
  });
  return out;
}

inline ShellSet shells(const TrigPoly& f) {
  ShellSet s;
  for (const auto& [k, a] : f.coeffs()) s.norm_squares.push_back(norm_sq(k));
  std::sort(s.norm_squares.begin(), s.norm_squares.end());
  s.norm_squares.erase(std::unique(s.norm_squares.begin(), s.norm_squares.end()), s.norm_squares.end());
  return s;
}

/// d^{3/2} * sum over shells of 1/lambda.
inline double bound_theorem1(const TrigPoly& f) {
  double s = 0.0;
  for (double lam : shells(f).norms()) s += 1.0 / lam;
  return std::pow(static_cast<double>(f.dim()), 1.5) * s;
}

/// (1/4) * sum over every stored frequency (k and -k both counted) of 1/|k|.
inline double bound_kozma(const TrigPoly& f) {
  double s = 0.0;
  for (const auto& [k, a] : f.coeffs()) s += 1.0 / std::sqrt(static_cast<double>(norm_sq(k)));
  return 0.25 * s;
}

/// Fourier coefficient at integer frequency k of the indicator of the ball
/// B(0, delta) in R^d:  delta^{d/2} |k|^{-d/2} J_{d/2}(2 pi |k| delta),
/// and omega_d delta^d at k = 0.
inline double ball_multiplier(double delta, const FreqVector& k, int d) {
  if (!(delta > 0.0)) throw DomainError("ball_multiplier: delta must be positive");
  if (d < 1 || static_cast<int>(k.size()) != d) throw DomainError("ball_multiplier: dimension mismatch");
  const long long q = norm_sq(k);
  if (q == 0) return specfun::ball_volume(d) * std::pow(delta, d);
  const double kn = std::sqrt(static_cast<double>(q));
  const double half = 0.5 * d;
  return std::pow(delta / kn, half) * specfun::bessel_j(half, 2.0 * std::numbers::pi * kn * delta);
}

/// Smoothing radius j_{d/2,1} / (2 pi lambda_n) that puts the first zero of
/// the ball multiplier on the top shell.
inline double delta_star(const TrigPoly& f) {
  const ShellSet s = shells(f);
  return specfun::bessel_first_zero(0.5 * f.dim()) / (2.0 * std::numbers::pi * s.top());
}

/// Convolution with the indicator of B(0, delta*) (periodized): every
/// coefficient is multiplied by the ball multiplier, and the top shell is
/// removed exactly.
inline TrigPoly smooth_top_shell(const TrigPoly& f) {
  const ShellSet s = shells(f);
  if (s.size() < 2) {
    throw DomainError("smooth_top_shell: needs at least two frequency shells");
  }
  const double delta = delta_star(f);
  if (delta > 0.5) {
    throw RangeError("smooth_top_shell: delta* = " + std::to_string(delta) +
                     " exceeds 1/2 (top shell norm too small for this dimension)");
  }
  const long long top = s.norm_squares.back();
  TrigPoly::CoeffMap out;
  for (const auto& [k, a] : f.coeffs()) {
    if (norm_sq(k) == top) continue;
    out[k] = a * ball_multiplier(delta, k, f.dim());
  }
  return TrigPoly::from_coefficients(f.dim(), std::move(out));
}

}  // namespace nodal::torus
