#pragma once

// Seeded random instances for the stress suites.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nodal/eigenid.hpp"
#include "nodal/random.hpp"
#include "nodal/sphere.hpp"
#include "nodal/torus.hpp"

namespace nodal::gen {

inline std::vector<double> unit_vector(Pcg32& rng, int d) {
  std::vector<double> v(d);
  double n = 0.0;
  while (n < 1e-6) {
    n = 0.0;
    for (double& c : v) {
      c = rng.normal();
      n += c * c;
    }
  }
  n = std::sqrt(n);
  for (double& c : v) c /= n;
  return v;
}

inline std::vector<double> point_in_cube(Pcg32& rng, int d, double half_side = 1.0) {
  std::vector<double> v(d);
  for (double& c : v) c = rng.uniform(-half_side, half_side);
  return v;
}

/// Representative lattice points (first nonzero component positive) of
/// every shell |k|^2 = q <= max_norm^2, grouped by q in increasing order.
inline std::vector<std::pair<long long, std::vector<torus::FreqVector>>> lattice_shells(int d, int max_norm) {
  std::vector<std::pair<long long, std::vector<torus::FreqVector>>> out;
  const long long cap = static_cast<long long>(max_norm) * max_norm;
  std::vector<std::vector<torus::FreqVector>> by_q(static_cast<std::size_t>(cap) + 1);
  torus::FreqVector k(d, -max_norm);
  while (true) {
    const long long q = torus::norm_sq(k);
    if (q > 0 && q <= cap && torus::is_representative(k)) by_q[static_cast<std::size_t>(q)].push_back(k);
    int a = d - 1;
    while (a >= 0 && k[a] == max_norm) {
      k[a] = -max_norm;
      --a;
    }
    if (a < 0) break;
    ++k[a];
  }
  for (long long q = 1; q <= cap; ++q) {
    if (!by_q[static_cast<std::size_t>(q)].empty()) out.emplace_back(q, std::move(by_q[static_cast<std::size_t>(q)]));
  }
  return out;
}

/// 1..max_shells distinct shells with norm <= max_norm; on each shell 1..3
/// distinct lattice directions with coefficients uniform in [-1, 1] + i[-1, 1].
inline torus::TrigPoly random_trigpoly(Pcg32& rng, int d, int max_shells = 5, int max_norm = 12) {
  auto shells = lattice_shells(d, max_norm);
  const int count = rng.uniform_int(1, std::min<int>(max_shells, static_cast<int>(shells.size())));
  std::vector<std::pair<torus::FreqVector, torus::Complex>> half;
  for (int s = 0; s < count; ++s) {
    const int pick = rng.uniform_int(s, static_cast<int>(shells.size()) - 1);
    std::swap(shells[s], shells[pick]);
    auto& pts = shells[s].second;
    const int terms = rng.uniform_int(1, std::min<int>(3, static_cast<int>(pts.size())));
    for (int t = 0; t < terms; ++t) {
      const int pp = rng.uniform_int(t, static_cast<int>(pts.size()) - 1);
      std::swap(pts[t], pts[pp]);
      half.emplace_back(pts[t], torus::Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
    }
  }
  return torus::TrigPoly::from_half(d, half);
}

/// 1..4 zonal terms on S^{d-1} with degrees in [1, max_degree], random
/// poles and weights uniform in +-[0.2, 1].
inline sphere::SphereFn random_spherefn(Pcg32& rng, int d = 3, int max_degree = 12) {
  const int count = rng.uniform_int(1, 4);
  std::vector<sphere::ZonalTerm> terms;
  for (int i = 0; i < count; ++i) {
    sphere::ZonalTerm t;
    t.degree = rng.uniform_int(1, max_degree);
    t.pole = unit_vector(rng, d);
    t.weight = rng.uniform(0.2, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    terms.push_back(std::move(t));
  }
  return sphere::SphereFn::checked(d, std::move(terms));
}

/// 1..max_waves plane waves of frequency sqrt(lambda), unit-scale
/// amplitudes and uniform phases.
inline eigenid::PlaneWaveEigen random_eigen(Pcg32& rng, int n, double lambda, int max_waves = 3) {
  const int count = rng.uniform_int(1, max_waves);
  std::vector<eigenid::PlaneWave> waves;
  for (int i = 0; i < count; ++i) {
    auto k = unit_vector(rng, n);
    for (double& c : k) c *= std::sqrt(lambda);
    waves.push_back({std::move(k), rng.uniform(0.5, 1.5), rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  return eigenid::PlaneWaveEigen(n, lambda, std::move(waves));
}

/// 1..max_levels eigenvalues drawn uniformly from [lam_lo, lam_hi] with
/// coefficients in +-[0.5, 1.5].
inline eigenid::EigenMix random_mix(Pcg32& rng, int n, int max_levels = 3, double lam_lo = 1.0,
                                    double lam_hi = 100.0) {
  const int levels = rng.uniform_int(1, max_levels);
  std::vector<eigenid::EigenMix::Part> parts;
  for (int i = 0; i < levels; ++i) {
    const double lam = rng.uniform(lam_lo, lam_hi);
    const double coef = rng.uniform(0.5, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    parts.push_back({coef, random_eigen(rng, n, lam)});
  }
  return eigenid::EigenMix(n, std::move(parts));
}

}  // namespace nodal::gen
