#pragma once

// Empirical largest sign-free ball of a function on a torus, a sphere or a
// Euclidean box, compared against a theoretical radius; plus the 1D
// sharpness probe for spectra in +-[A, A+B].

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"
#include "nodal/random.hpp"
#include "nodal/torus.hpp"

namespace nodal::signsearch {

using Vec = std::vector<double>;

enum class DomainKind { kTorus, kSphere, kBox };

struct SearchDomain {
  DomainKind kind = DomainKind::kTorus;
  int dim = 1;
  int resolution = 16;  // samples per axis (sphere: sqrt of the point count)
  Vec lo, hi;           // box corners

  static SearchDomain torus(int d, int resolution) {
    SearchDomain s{DomainKind::kTorus, d, resolution, {}, {}};
    s.validate();
    return s;
  }
  /// Unit sphere S^{d-1} in R^d; sampled with resolution^2 spiral points.
  static SearchDomain sphere(int d, int resolution) {
    SearchDomain s{DomainKind::kSphere, d, resolution, {}, {}};
    s.validate();
    return s;
  }
  static SearchDomain box(Vec lo, Vec hi, int resolution) {
    SearchDomain s{DomainKind::kBox, static_cast<int>(lo.size()), resolution, std::move(lo), std::move(hi)};
    s.validate();
    return s;
  }

  void validate() const {
    if (resolution < 16) throw DomainError("SearchDomain: resolution must be >= 16");
    if (dim < 1) throw DomainError("SearchDomain: dimension must be >= 1");
    if (kind == DomainKind::kSphere && dim != 3) {
      throw DomainError("SearchDomain: sphere search is implemented for S^2 (d = 3)");
    }
    if (kind == DomainKind::kBox) {
      if (lo.size() != hi.size() || lo.empty()) throw DomainError("SearchDomain: box corners mismatch");
      for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(hi[i] > lo[i])) throw DomainError("SearchDomain: box sides must be positive");
      }
    }
  }

  std::string name() const {
    switch (kind) {
      case DomainKind::kTorus: return "torus";
      case DomainKind::kSphere: return "sphere";
      case DomainKind::kBox: return "box";
    }
    return "?";
  }

  double diameter() const {
    switch (kind) {
      case DomainKind::kTorus: return 0.5 * std::sqrt(static_cast<double>(dim));
      case DomainKind::kSphere: return std::numbers::pi;
      case DomainKind::kBox: {
        double s = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
        return std::sqrt(s);
      }
    }
    return 0.0;
  }
};

struct SignBallReport {
  Vec center;
  double r_lower = 0.0;  // radius without sign change found at this resolution
  double r_upper = 0.0;  // r_lower + grid diagonal
  double bound = 0.0;
  double ratio = 0.0;    // r_lower / bound
  std::size_t samples_used = 0;
  bool constant_sign = false;
  std::uint64_t seed = 0;
  int resolution = 0;
  std::string domain;
  int dim = 0;
  bool pass = false;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Squared-distance transform on a rectilinear grid with nearest-site
// displacements (in index units per axis). Felzenszwalb-Huttenlocher lower
// envelope per axis; periodic axes use three images of every site.
class DistanceTransform {
 public:
  DistanceTransform(int dim, int n, Vec spacing, bool periodic)
      : dim_(dim), n_(n), spacing_(std::move(spacing)), periodic_(periodic) {}

  // sites[p] true marks an obstacle point. Returns squared distances and
  // fills disp (dim entries per point).
  std::vector<double> run(const std::vector<char>& sites, std::vector<int>& disp) const {
    const std::size_t total = sites.size();
    std::vector<double> dist(total, kInf);
    disp.assign(total * dim_, 0);
    for (std::size_t p = 0; p < total; ++p) {
      if (sites[p]) dist[p] = 0.0;
    }
    std::vector<std::size_t> stride(dim_);
    stride[dim_ - 1] = 1;
    for (int a = dim_ - 2; a >= 0; --a) stride[a] = stride[a + 1] * static_cast<std::size_t>(n_);
    for (int axis = 0; axis < dim_; ++axis) pass(axis, stride, dist, disp);
    return dist;
  }

 private:
  void pass(int axis, const std::vector<std::size_t>& stride, std::vector<double>& dist,
            std::vector<int>& disp) const {
    const std::size_t total = dist.size();
    const std::size_t lines = total / static_cast<std::size_t>(n_);
    const std::size_t st = stride[axis];
    const double h2 = spacing_[axis] * spacing_[axis];
    std::vector<double> new_dist(total);
    std::vector<int> new_disp(disp.size());
    parallel_chunks(lines, 256, [&](std::size_t, std::size_t b, std::size_t e) {
      std::vector<int> cand;          // unwrapped site positions on the line
      std::vector<double> cval;
      std::vector<int> v;
      std::vector<double> z;
      for (std::size_t line = b; line < e; ++line) {
        // base offset of this line: decompose line index over the other axes
        std::size_t rem = line;
        std::size_t base = 0;
        for (int a = dim_ - 1; a >= 0; --a) {
          if (a == axis) continue;
          base += (rem % static_cast<std::size_t>(n_)) * stride[a];
          rem /= static_cast<std::size_t>(n_);
        }
        cand.clear();
        cval.clear();
        const int copies = periodic_ ? 3 : 1;
        for (int c = 0; c < copies; ++c) {
          const int shift = periodic_ ? (c - 1) * n_ : 0;
          for (int i = 0; i < n_; ++i) {
            const double f = dist[base + i * st];
            if (f < kInf) {
              cand.push_back(i + shift);
              cval.push_back(f);
            }
          }
        }
        if (cand.empty()) {
          for (int i = 0; i < n_; ++i) {
            const std::size_t p = base + i * st;
            new_dist[p] = kInf;
            for (int a = 0; a < dim_; ++a) new_disp[p * dim_ + a] = disp[p * dim_ + a];
          }
          continue;
        }
        // lower envelope of parabolas h2 (x - q)^2 + f(q)
        const std::size_t m = cand.size();
        v.assign(m, 0);
        z.assign(m + 1, 0.0);
        std::size_t k = 0;
        v[0] = 0;
        z[0] = -kInf;
        z[1] = kInf;
        auto meet = [&](std::size_t i, std::size_t j) {
          const double qi = cand[i];
          const double qj = cand[j];
          return ((cval[i] + h2 * qi * qi) - (cval[j] + h2 * qj * qj)) / (2.0 * h2 * (qi - qj));
        };
        for (std::size_t q = 1; q < m; ++q) {
          double s = meet(q, v[k]);
          while (k > 0 && s <= z[k]) {
            --k;
            s = meet(q, v[k]);
          }
          ++k;
          v[k] = static_cast<int>(q);
          z[k] = s;
          z[k + 1] = kInf;
        }
        k = 0;
        for (int i = 0; i < n_; ++i) {
          while (z[k + 1] < i) ++k;
          const std::size_t best = static_cast<std::size_t>(v[k]);
          const double dq = i - cand[best];
          const std::size_t p = base + i * st;
          new_dist[p] = h2 * dq * dq + cval[best];
          int src = cand[best] % n_;
          if (src < 0) src += n_;
          const std::size_t ps = base + static_cast<std::size_t>(src) * st;
          for (int a = 0; a < dim_; ++a) new_disp[p * dim_ + a] = disp[ps * dim_ + a];
          new_disp[p * dim_ + axis] = cand[best] - i;
        }
      }
    });
    dist.swap(new_dist);
    disp.swap(new_disp);
  }

  int dim_;
  int n_;
  Vec spacing_;
  bool periodic_;
};

inline int sign_class(double v, double threshold) {
  if (std::abs(v) <= threshold) return 0;
  return v > 0.0 ? 1 : -1;
}

// First sign change of f along p(t), t in [0, 1], starting from sign s0.
// Samples the path, then bisects the first offending cell.
template <class F, class Path>
double first_crossing(F& f, Path& path, int s0, double threshold, int samples = 64, int steps = 40) {
  double good = 0.0;
  double bad = 1.0;
  bool found = false;
  for (int i = 1; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    if (sign_class(f(path(t)), threshold) != s0) {
      bad = t;
      found = true;
      break;
    }
    good = t;
  }
  if (!found) return 1.0;
  for (int it = 0; it < steps; ++it) {
    const double mid = 0.5 * (good + bad);
    if (sign_class(f(path(mid)), threshold) == s0) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return 0.5 * (good + bad);
}

// True when every sample has the same nonzero sign.
template <class C>
bool one_sign(const C& cls) {
  if (cls.empty() || cls.front() == 0) return false;
  return std::all_of(cls.begin(), cls.end(), [&](auto c) { return c == cls.front(); });
}

struct GridBest {
  std::size_t index = 0;
  double dist = -1.0;
  bool any_obstacle = false;
};

}  // namespace detail

/// Grid analysis shared by the torus and box domains. `values` holds f on
/// the grid (row-major, last axis fastest); f itself is used for the
/// refinement along the segment to the nearest sign change.
template <class F>
SignBallReport analyze_rect_grid(F&& f, const std::vector<double>& values, const SearchDomain& dom) {
  const int d = dom.dim;
  const int n = dom.resolution;
  const bool periodic = dom.kind == DomainKind::kTorus;
  Vec spacing(d), origin(d, 0.0);
  for (int a = 0; a < d; ++a) {
    if (periodic) {
      spacing[a] = 1.0 / n;
    } else {
      spacing[a] = (dom.hi[a] - dom.lo[a]) / (n - 1);
      origin[a] = dom.lo[a];
    }
  }
  double diag = 0.0;
  for (double h : spacing) diag += h * h;
  diag = std::sqrt(diag);

  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  const double threshold = 1e-12 * vmax;

  const std::size_t total = values.size();
  std::vector<signed char> cls(total);
  for (std::size_t p = 0; p < total; ++p) cls[p] = static_cast<signed char>(detail::sign_class(values[p], threshold));

  detail::DistanceTransform edt(d, n, spacing, periodic);
  detail::GridBest best;
  best.any_obstacle = !detail::one_sign(cls);
  std::vector<int> best_disp(d, 0);
  for (int s : {1, -1}) {
    if (!best.any_obstacle) break;
    std::vector<char> sites(total);
    bool present = false;
    for (std::size_t p = 0; p < total; ++p) {
      sites[p] = static_cast<char>(cls[p] * s <= 0);
      present = present || cls[p] == s;
    }
    if (!present) continue;
    std::vector<int> disp;
    const std::vector<double> d2 = edt.run(sites, disp);
    for (std::size_t p = 0; p < total; ++p) {
      if (cls[p] != s) continue;
      const double dist = std::sqrt(d2[p]);
      if (dist > best.dist || (dist == best.dist && p < best.index)) {
        best.dist = dist;
        best.index = p;
        for (int a = 0; a < d; ++a) best_disp[a] = disp[p * d + a];
      }
    }
  }

  SignBallReport rep;
  rep.domain = dom.name();
  rep.dim = d;
  rep.resolution = n;
  rep.samples_used = total;
  rep.center.assign(d, 0.0);
  if (!best.any_obstacle) {
    rep.constant_sign = true;
    rep.r_lower = rep.r_upper = dom.diameter();
    return rep;
  }
  if (best.dist < 0.0) {
    // every sample is an obstacle (f vanishes on the grid)
    rep.r_lower = 0.0;
    rep.r_upper = diag;
    return rep;
  }
  {
    std::size_t rem = best.index;
    for (int a = d - 1; a >= 0; --a) {
      rep.center[a] = origin[a] + static_cast<double>(rem % static_cast<std::size_t>(n)) * spacing[a];
      rem /= static_cast<std::size_t>(n);
    }
  }
  Vec offset(d);
  for (int a = 0; a < d; ++a) offset[a] = best_disp[a] * spacing[a];
  const int s0 = cls[best.index];
  Vec buf(d);
  auto path = [&](double t) -> std::span<const double> {
    for (int a = 0; a < d; ++a) buf[a] = rep.center[a] + t * offset[a];
    return std::span<const double>(buf);
  };
  auto fv = [&](std::span<const double> x) { return static_cast<double>(f(x)); };
  const double t = detail::first_crossing(fv, path, s0, threshold);
  rep.r_lower = std::max(0.0, std::min(best.dist, t * best.dist));
  rep.r_upper = rep.r_lower + diag;
  return rep;
}

/// Torus overload using the table-driven grid evaluation.
inline SignBallReport largest_signfree_ball(const torus::TrigPoly& f, const SearchDomain& dom) {
  dom.validate();
  if (dom.kind != DomainKind::kTorus || dom.dim != f.dim()) {
    throw DomainError("largest_signfree_ball: trigonometric polynomial needs a torus of its dimension");
  }
  const auto values = torus::eval_grid(f, dom.resolution);
  return analyze_rect_grid([&](std::span<const double> x) { return torus::eval(f, x); }, values, dom);
}

/// Spiral points on S^2 with symmetric k-nearest-neighbour adjacency.
struct SphereGraph {
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<std::uint32_t>> adjacency;
  double spacing = 0.0;  // largest nearest-neighbour geodesic distance
};

inline double geodesic(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::acos(std::clamp(a[0] * b[0] + a[1] * b[1] + a[2] * b[2], -1.0, 1.0));
}

/// Equal-area (Fibonacci) spiral with `count` points; neighbours found by
/// scanning outward in the z-ordered index until the z gap exceeds the
/// current k-th chord distance.
inline SphereGraph build_sphere_graph(std::size_t count, int k = 8) {
  SphereGraph g;
  g.points.resize(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double ph = golden * static_cast<double>(i);
    g.points[i] = {r * std::cos(ph), r * std::sin(ph), z};
  }
  std::vector<std::vector<std::uint32_t>> knn(count);
  parallel_chunks(count, 1024, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<std::pair<double, std::uint32_t>> heap;  // max-heap on chord^2
    for (std::size_t i = b; i < e; ++i) {
      heap.clear();
      const auto& pi = g.points[i];
      auto consider = [&](std::size_t j) {
        const auto& pj = g.points[j];
        const double dx = pi[0] - pj[0], dy = pi[1] - pj[1], dz = pi[2] - pj[2];
        const double c2 = dx * dx + dy * dy + dz * dz;
        if (static_cast<int>(heap.size()) < k) {
          heap.emplace_back(c2, static_cast<std::uint32_t>(j));
          std::push_heap(heap.begin(), heap.end());
        } else if (c2 < heap.front().first) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = {c2, static_cast<std::uint32_t>(j)};
          std::push_heap(heap.begin(), heap.end());
        }
      };
      auto limit = [&] { return static_cast<int>(heap.size()) < k ? detail::kInf : heap.front().first; };
      for (std::size_t j = i + 1; j < count; ++j) {
        const double dz = g.points[j][2] - pi[2];
        if (dz * dz > limit()) break;
        consider(j);
      }
      for (std::size_t j = i; j-- > 0;) {
        const double dz = g.points[j][2] - pi[2];
        if (dz * dz > limit()) break;
        consider(j);
      }
      for (const auto& [c2, j] : heap) knn[i].push_back(j);
    }
  });
  g.adjacency.assign(count, {});
  for (std::size_t i = 0; i < count; ++i) {
    for (std::uint32_t j : knn[i]) {
      g.adjacency[i].push_back(j);
      g.adjacency[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  for (std::size_t i = 0; i < count; ++i) {
    double nearest = detail::kInf;
    for (std::uint32_t j : g.adjacency[i]) nearest = std::min(nearest, geodesic(g.points[i], g.points[j]));
    g.spacing = std::max(g.spacing, nearest);
  }
  return g;
}

/// Sphere search on S^2: multi-source Dijkstra over the neighbour graph in
/// which every node carries its nearest obstacle, distances measured exactly
/// (arccos) from that obstacle.
template <class F>
SignBallReport largest_signfree_ball_sphere(F&& f, const SearchDomain& dom, const SphereGraph* graph = nullptr) {
  dom.validate();
  SphereGraph local;
  if (graph == nullptr) {
    local = build_sphere_graph(static_cast<std::size_t>(dom.resolution) * dom.resolution);
    graph = &local;
  }
  const auto& pts = graph->points;
  const std::size_t count = pts.size();
  std::vector<double> values(count);
  parallel_chunks(count, 2048, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) values[i] = f(std::span<const double>(pts[i].data(), 3));
  });
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  const double threshold = 1e-12 * vmax;
  std::vector<int> cls(count);
  for (std::size_t i = 0; i < count; ++i) cls[i] = detail::sign_class(values[i], threshold);

  SignBallReport rep;
  rep.domain = dom.name();
  rep.dim = dom.dim;
  rep.resolution = dom.resolution;
  rep.samples_used = count;
  rep.center.assign(3, 0.0);

  double best = -1.0;
  std::size_t best_i = 0;
  std::uint32_t best_site = 0;
  const bool any_obstacle = !detail::one_sign(cls);
  for (int s : {1, -1}) {
    if (!any_obstacle) break;
    if (std::find(cls.begin(), cls.end(), s) == cls.end()) continue;
    std::vector<double> dist(count, detail::kInf);
    std::vector<std::uint32_t> site(count, 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (std::size_t i = 0; i < count; ++i) {
      if (cls[i] * s <= 0) {
        dist[i] = 0.0;
        site[i] = static_cast<std::uint32_t>(i);
        open.emplace(0.0, static_cast<std::uint32_t>(i));
      }
    }
    while (!open.empty()) {
      const auto [du, u] = open.top();
      open.pop();
      if (du > dist[u]) continue;
      for (std::uint32_t v : graph->adjacency[u]) {
        const double cand = geodesic(pts[site[u]], pts[v]);
        if (cand < dist[v]) {
          dist[v] = cand;
          site[v] = site[u];
          open.emplace(cand, v);
        }
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (cls[i] != s) continue;
      if (dist[i] > best || (dist[i] == best && i < best_i)) {
        best = dist[i];
        best_i = i;
        best_site = site[i];
      }
    }
  }
  if (!any_obstacle) {
    rep.constant_sign = true;
    rep.r_lower = rep.r_upper = dom.diameter();
    return rep;
  }
  if (best < 0.0) {
    rep.r_lower = 0.0;
    rep.r_upper = graph->spacing;
    return rep;
  }
  const auto& c = pts[best_i];
  const auto& q = pts[best_site];
  rep.center = {c[0], c[1], c[2]};
  const double omega = geodesic(c, q);
  Vec buf(3);
  auto path = [&](double t) -> std::span<const double> {
    const double sw = std::sin(omega);
    const double a = std::sin((1.0 - t) * omega) / sw;
    const double b = std::sin(t * omega) / sw;
    for (int i = 0; i < 3; ++i) buf[i] = a * c[i] + b * q[i];
    return std::span<const double>(buf);
  };
  auto fv = [&](std::span<const double> x) { return static_cast<double>(f(x)); };
  double t = 1.0;
  if (omega > 1e-12 && omega < std::numbers::pi - 1e-9) t = detail::first_crossing(fv, path, cls[best_i], threshold);
  rep.r_lower = std::max(0.0, std::min(best, t * omega));
  rep.r_upper = rep.r_lower + graph->spacing;
  return rep;
}

/// Largest sign-free ball on the torus [0,1)^d or a box, for any callable
/// f(span<const double>) -> double.
template <class F>
  requires std::invocable<F&, std::span<const double>>
SignBallReport largest_signfree_ball(F&& f, const SearchDomain& dom) {
  dom.validate();
  if (dom.kind == DomainKind::kSphere) {
    return largest_signfree_ball_sphere(std::forward<F>(f), dom);
  }
  const int d = dom.dim;
  const int n = dom.resolution;
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
  std::vector<double> values(total);
  parallel_chunks(total, 4096, [&](std::size_t, std::size_t b, std::size_t e) {
    Vec x(d);
    for (std::size_t p = b; p < e; ++p) {
      std::size_t rem = p;
      for (int a = d - 1; a >= 0; --a) {
        const double i = static_cast<double>(rem % static_cast<std::size_t>(n));
        x[a] = dom.kind == DomainKind::kTorus ? i / n : dom.lo[a] + i * (dom.hi[a] - dom.lo[a]) / (n - 1);
        rem /= static_cast<std::size_t>(n);
      }
      values[p] = f(std::span<const double>(x));
    }
  });
  return analyze_rect_grid(f, values, dom);
}

struct VerifyResult {
  bool pass = false;
  SignBallReport report;
};

/// pass iff the measured sign-free radius does not exceed `bound`.
inline VerifyResult finish_verify(SignBallReport rep, double bound) {
  if (!(bound > 0.0)) throw DomainError("verify_bound: bound must be positive");
  rep.bound = bound;
  rep.ratio = rep.r_lower / bound;
  rep.pass = rep.r_lower <= bound;
  return {rep.pass, rep};
}

template <class F>
  requires std::invocable<F&, std::span<const double>>
VerifyResult verify_bound(F&& f, const SearchDomain& dom, double bound) {
  return finish_verify(largest_signfree_ball(std::forward<F>(f), dom), bound);
}

inline VerifyResult verify_bound(const torus::TrigPoly& f, const SearchDomain& dom, double bound) {
  return finish_verify(largest_signfree_ball(f, dom), bound);
}

// ---------------------------------------------------------------------------
// Sharpness probe on T^1

/// Real trigonometric polynomial sum_j (c_j cos 2 pi (A+j) x + s_j sin 2 pi (A+j) x).
struct BandPoly {
  int first = 1;       // A
  Vec cos_coef;        // index j -> frequency A + j
  Vec sin_coef;

  double operator()(double x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cos_coef.size(); ++j) {
      const double ph = 2.0 * std::numbers::pi * (first + static_cast<double>(j)) * x;
      s += cos_coef[j] * std::cos(ph) + sin_coef[j] * std::sin(ph);
    }
    return s;
  }
};

/// Longest interval of T^1 on which p has no zero, measured on a grid of
/// `samples` points with crossings refined by bisection. Runs of equal sign
/// are also checked for hidden double-root dips by minimizing |p| around
/// local minima.
inline double longest_signfree_interval(const BandPoly& p, int samples = 1 << 14) {
  std::vector<double> v(samples);
  double vmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    v[i] = p(static_cast<double>(i) / samples);
    vmax = std::max(vmax, std::abs(v[i]));
  }
  if (vmax == 0.0) return 0.0;
  const double threshold = 1e-12 * vmax;
  const double h = 1.0 / samples;
  std::vector<double> zeros;
  auto cls = [&](double val) { return detail::sign_class(val, threshold); };
  for (int i = 0; i < samples; ++i) {
    const int j = (i + 1) % samples;
    const int si = cls(v[i]);
    const int sj = cls(v[j]);
    const double xi = static_cast<double>(i) * h;
    if (si == 0) {
      zeros.push_back(xi);
      continue;
    }
    if (sj != si && sj != 0) {
      double a = xi;
      double b = xi + h;
      for (int it = 0; it < 50; ++it) {
        const double m = 0.5 * (a + b);
        if (cls(p(m)) == si) a = m; else b = m;
      }
      zeros.push_back(0.5 * (a + b));
      continue;
    }
    // local minimum of |p| inside a constant-sign run: look for a dip
    const int k = (i + samples - 1) % samples;
    if (sj == si && cls(v[k]) == si && std::abs(v[i]) <= std::abs(v[k]) && std::abs(v[i]) <= std::abs(v[j])) {
      double a = xi - h;
      double b = xi + h;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = b - gr * (b - a);
      double d = a + gr * (b - a);
      for (int it = 0; it < 80; ++it) {
        if (si * p(c) < si * p(d)) b = d; else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
      }
      const double xm = 0.5 * (a + b);
      if (si * p(xm) <= threshold) zeros.push_back(xm);
    }
  }
  if (zeros.empty()) return 1.0;
  for (double& z : zeros) z -= std::floor(z);
  std::sort(zeros.begin(), zeros.end());
  double best = zeros.front() + 1.0 - zeros.back();
  for (std::size_t i = 1; i < zeros.size(); ++i) best = std::max(best, zeros[i] - zeros[i - 1]);
  return best;
}

namespace detail {

// Fast grid score for the search: longest circular run of one strict sign,
// in samples, on precomputed cos/sin tables.
class BandScorer {
 public:
  BandScorer(int first, int bands, int samples) : first_(first), bands_(bands), samples_(samples) {
    cos_.resize(static_cast<std::size_t>(bands) * samples);
    sin_.resize(cos_.size());
    for (int j = 0; j < bands; ++j) {
      for (int i = 0; i < samples; ++i) {
        // exact reduction of the integer phase (A+j) i mod samples
        const long long m = (static_cast<long long>(first + j) * i) % samples;
        const double ph = 2.0 * std::numbers::pi * static_cast<double>(m) / samples;
        cos_[static_cast<std::size_t>(j) * samples + i] = std::cos(ph);
        sin_[static_cast<std::size_t>(j) * samples + i] = std::sin(ph);
      }
    }
    vals_.resize(samples);
  }

  double score(const Vec& cc, const Vec& sc) {
    double vmax = 0.0;
    for (int i = 0; i < samples_; ++i) {
      double s = 0.0;
      for (int j = 0; j < bands_; ++j) {
        const std::size_t o = static_cast<std::size_t>(j) * samples_ + i;
        s += cc[j] * cos_[o] + sc[j] * sin_[o];
      }
      vals_[i] = s;
      vmax = std::max(vmax, std::abs(s));
    }
    if (vmax == 0.0) return 0.0;
    const double thr = 1e-12 * vmax;
    int start = -1;
    for (int i = 0; i < samples_; ++i) {
      if (sign_class(vals_[i], thr) != sign_class(vals_[(i + 1) % samples_], thr)) {
        start = (i + 1) % samples_;
        break;
      }
    }
    if (start < 0) return 1.0;
    int best = 0;
    int run = 0;
    int prev = 2;
    for (int c = 0; c < samples_; ++c) {
      const int s = sign_class(vals_[(start + c) % samples_], thr);
      if (s != 0 && s == prev) {
        ++run;
      } else {
        run = s == 0 ? 0 : 1;
      }
      prev = s;
      best = std::max(best, run);
    }
    return static_cast<double>(best + 1) / samples_;
  }

 private:
  int first_, bands_, samples_;
  std::vector<double> cos_, sin_, vals_;
};

}  // namespace detail

struct ProbeResult {
  double best = 0.0;             // longest sign-free interval found
  double ceiling = 0.0;          // (B+1)/(2A+B)
  double structured_best = 0.0;  // best over the structured family alone
  BandPoly best_poly;
};

/// Structured family for spectrum +-[A, A+B]: for every B' <= B and
/// p in {0,1,2,3}, cosine sums sum_{j<=B'} w_j cos 2 pi (A+j) x with Fejer-type
/// weights w_j = (B'+1-j)^p and their reversal (j+1)^p. The family for B
/// contains the family for B-1.
inline std::vector<BandPoly> structured_family(int a, int b) {
  std::vector<BandPoly> out;
  for (int bp = 0; bp <= b; ++bp) {
    for (int p = 0; p <= 3; ++p) {
      for (int rev = 0; rev < 2; ++rev) {
        BandPoly poly{a, Vec(b + 1, 0.0), Vec(b + 1, 0.0)};
        for (int j = 0; j <= bp; ++j) poly.cos_coef[j] = std::pow(rev ? j + 1.0 : bp + 1.0 - j, p);
        out.push_back(std::move(poly));
      }
    }
  }
  return out;
}

/// Searches polynomials with spectrum in +-[A, A+B] for a long sign-free
/// interval: the structured family, then `trials` random starts (the first
/// one seeded with the best structured member) improved by a shrinking
/// random-perturbation hill climb. Deterministic for a given seed.
inline ProbeResult sharpness_probe(int a, int b, int trials, std::uint64_t seed, int samples = 1 << 14,
                                   int iterations = 300) {
  if (a < 1) throw DomainError("sharpness_probe: require A >= 1");
  if (b < 0) throw DomainError("sharpness_probe: require B >= 0");
  if (samples < (1 << 14)) throw DomainError("sharpness_probe: resolution must be at least 2^14");
  ProbeResult res;
  res.ceiling = (b + 1.0) / (2.0 * a + b);
  const auto family = structured_family(a, b);
  BandPoly best_struct = family.front();
  for (const auto& p : family) {
    const double len = longest_signfree_interval(p, samples);
    if (len > res.structured_best) {
      res.structured_best = len;
      best_struct = p;
    }
  }
  res.best = res.structured_best;
  res.best_poly = best_struct;

  detail::BandScorer scorer(a, b + 1, samples);
  Pcg32 rng(seed);
  const int nb = b + 1;
  BandPoly best_search = best_struct;
  double best_search_score = -1.0;
  for (int trial = 0; trial < trials; ++trial) {
    Vec cc(nb), sc(nb);
    if (trial == 0) {
      cc = best_struct.cos_coef;
      sc = best_struct.sin_coef;
    } else {
      for (int j = 0; j < nb; ++j) {
        cc[j] = rng.normal();
        sc[j] = rng.normal();
      }
    }
    double score = scorer.score(cc, sc);
    double step = 0.5;
    for (int it = 0; it < iterations; ++it) {
      Vec c2 = cc, s2 = sc;
      for (int j = 0; j < nb; ++j) {
        c2[j] += step * rng.normal();
        s2[j] += step * rng.normal();
      }
      const double v = scorer.score(c2, s2);
      if (v >= score) {
        cc.swap(c2);
        sc.swap(s2);
        score = v;
      }
      if ((it + 1) % 100 == 0) step *= 0.5;
    }
    if (score > best_search_score) {
      best_search_score = score;
      best_search = BandPoly{a, cc, sc};
    }
  }
  const double refined = longest_signfree_interval(best_search, samples);
  if (refined > res.best) {
    res.best = refined;
    res.best_poly = best_search;
  }
  return res;
}

}  // namespace nodal::signsearch
