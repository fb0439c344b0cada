#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace nodal {

// Worker count: hardware concurrency, capped by NODAL_RADIUS_THREADS.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("NODAL_RADIUS_THREADS")) {
    try {
      const long v = std::stol(cap);
      if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    } catch (...) {
      // unparsable cap is ignored
    }
  }
  return n;
}

/// Runs body(begin, end) over fixed-size chunks of [0, count). Chunk
/// boundaries do not depend on the worker count, so any per-chunk result
/// stored by index is reproducible.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t chunk, Body&& body) {
  if (count == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (count + chunk - 1) / chunk;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), chunks));
  auto run = [&](std::size_t c) {
    const std::size_t b = c * chunk;
    body(c, b, std::min(count, b + chunk));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) run(c);
    });
  }
  for (auto& t : pool) t.join();
}

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

/// Deterministic parallel reduction: per-chunk compensated sums, combined in
/// chunk order.
template <class Term>
double parallel_sum(std::size_t count, Term&& term, std::size_t chunk = 4096) {
  const std::size_t chunks = (count + chunk - 1) / std::max<std::size_t>(chunk, 1);
  std::vector<double> partial(chunks, 0.0);
  parallel_chunks(count, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    CompensatedSum s;
    for (std::size_t i = b; i < e; ++i) s.add(term(i));
    partial[c] = s.value();
  });
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

}  // namespace nodal
