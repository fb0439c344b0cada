#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "nodal/generators.hpp"
#include "nodal/torus.hpp"
#include "oracles.hpp"

using namespace nodal;
using namespace nodal::torus;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double kPi = std::numbers::pi;

namespace {

double at(const TrigPoly& f, std::vector<double> x) { return eval(f, x); }

}  // namespace

TEST_CASE("TrigPoly construction and validation", "[torus]") {
  const auto f = TrigPoly::from_cosines(2, {{{3, 0}, 1.0}});
  CHECK(f.coeffs().size() == 2);
  CHECK(f.coefficient({3, 0}) == Complex(0.5, 0.0));
  CHECK(f.coefficient({-3, 0}) == Complex(0.5, 0.0));
  CHECK(f.coefficient({1, 1}) == Complex(0.0, 0.0));

  CHECK_THROWS_AS(TrigPoly::from_half(2, {{{0, 0}, {1.0, 0.0}}}), DomainError);
  CHECK_THROWS_AS(TrigPoly::from_half(2, {}), DomainError);
  CHECK_THROWS_AS(TrigPoly::from_half(2, {{{1, 0, 0}, {1.0, 0.0}}}), DomainError);
  CHECK_THROWS_AS(TrigPoly::from_half(1, {{{2}, {1.0, 0.0}}, {{-2}, {1.0, 0.0}}}), DomainError);
  TrigPoly::CoeffMap bad{{{1}, {1.0, 1.0}}, {{-1}, {1.0, 1.0}}};
  CHECK_THROWS_AS(TrigPoly::from_coefficients(1, bad), DomainError);
  TrigPoly::CoeffMap lonely{{{1}, {1.0, 0.0}}};
  CHECK_THROWS_AS(TrigPoly::from_coefficients(1, lonely), DomainError);
  TrigPoly::CoeffMap good{{{1}, {1.0, 2.0}}, {{-1}, {1.0, -2.0}}};
  CHECK_NOTHROW(TrigPoly::from_coefficients(1, good));
}

TEST_CASE("eval examples", "[torus]") {
  const auto f = TrigPoly::from_cosines(2, {{{3, 0}, 1.0}});
  CHECK_THAT(at(f, {0.0, 0.0}), WithinAbs(1.0, 1e-15));
  CHECK_THAT(at(f, {1.0 / 12.0, 0.77}), WithinAbs(0.0, 1e-15));
  const auto g = TrigPoly::from_cosines(2, {{{1, 1}, 1.0}, {{3, 0}, 1.0}});
  CHECK_THAT(at(g, {0.2, 0.1}), WithinAbs(std::cos(0.6 * kPi) + std::cos(1.2 * kPi), 1e-14));
  CHECK_THROWS_AS(at(g, {0.1}), DomainError);
}

TEST_CASE("eval agrees with the complex sum and is real", "[torus][property]") {
  Pcg32 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 3;
    const auto f = gen::random_trigpoly(rng, d);
    const auto x = gen::point_in_cube(rng, d, 3.0);
    const Complex z = eval_complex(f, x);
    CHECK(std::abs(z.imag()) <= 1e-10 * f.amplitude_sum());
    CHECK_THAT(eval(f, x), WithinAbs(z.real(), 1e-10 * f.amplitude_sum()));
  }
}

TEST_CASE("eval_grid matches pointwise evaluation", "[torus]") {
  Pcg32 rng(5);
  for (int d = 1; d <= 3; ++d) {
    const auto f = gen::random_trigpoly(rng, d);
    const int n = 12;
    const auto grid = eval_grid(f, n);
    std::vector<double> x(d);
    for (std::size_t p = 0; p < grid.size(); p += 7) {
      std::size_t rem = p;
      for (int a = d - 1; a >= 0; --a) {
        x[a] = static_cast<double>(rem % n) / n;
        rem /= n;
      }
      CHECK_THAT(grid[p], WithinAbs(eval(f, x), 1e-12));
    }
  }
}

TEST_CASE("shells merge equal integer norms", "[torus]") {
  auto f = TrigPoly::from_cosines(2, {{{3, 4}, 1.0}, {{5, 0}, 1.0}});
  CHECK(shells(f).norm_squares == std::vector<long long>{25});
  f = TrigPoly::from_cosines(2, {{{1, 0}, 1.0}});
  CHECK(shells(f).norm_squares == std::vector<long long>{1});
  f = TrigPoly::from_cosines(2, {{{1, 1}, 1.0}, {{2, 0}, 1.0}});
  const auto s = shells(f);
  CHECK(s.norm_squares == std::vector<long long>{2, 4});
  CHECK_THAT(s.norms()[0], WithinRel(std::sqrt(2.0), 1e-15));
  CHECK(s.top() == 2.0);
}

TEST_CASE("shell-sum and Kozma bounds", "[torus]") {
  auto f = TrigPoly::from_cosines(2, {{{3, 4}, 1.0}, {{5, 0}, 1.0}});
  CHECK_THAT(bound_theorem1(f), WithinRel(std::pow(2.0, 1.5) / 5.0, 1e-15));
  CHECK_THAT(bound_theorem1(f), WithinAbs(0.5657, 1e-4));
  CHECK_THAT(bound_kozma(f), WithinRel(0.2, 1e-15));
  CHECK_THAT(bound_theorem1(TrigPoly::from_cosines(1, {{{1}, 1.0}})), WithinRel(1.0, 1e-15));
  auto g = TrigPoly::from_cosines(3, {{{1, 1, 0}, 1.0}, {{0, 0, 2}, 1.0}});
  CHECK_THAT(bound_theorem1(g), WithinRel(std::pow(3.0, 1.5) * (1 / std::sqrt(2.0) + 0.5), 1e-15));
  CHECK_THAT(bound_kozma(TrigPoly::from_cosines(2, {{{3, 0}, 1.0}})), WithinRel(1.0 / 6.0, 1e-15));
  CHECK_THAT(bound_kozma(TrigPoly::from_cosines(2, {{{1, 0}, 1.0}})), WithinRel(0.5, 1e-15));
}

TEST_CASE("both bounds are finite and positive", "[torus][property]") {
  Pcg32 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto f = gen::random_trigpoly(rng, 1 + i % 3);
    const double r = bound_theorem1(f) / bound_kozma(f);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
  }
}

TEST_CASE("ball_multiplier equals the indicator transform", "[torus]") {
  CHECK_THAT(ball_multiplier(0.2, {1}, 1), WithinAbs(std::sin(2 * kPi * 0.2) / kPi, 1e-14));
  CHECK_THAT(ball_multiplier(0.2, {1}, 1), WithinAbs(0.30273, 1e-5));
  for (int d = 1; d <= 3; ++d) {
    for (double delta : {0.1, 0.3, 0.45}) {
      for (int kx = 0; kx <= 3; ++kx) {
        torus::FreqVector k(d, 0);
        k[0] = kx;
        if (d > 1) k[1] = 1;
        const double kn = std::sqrt(static_cast<double>(norm_sq(k)));
        INFO("d=" << d << " delta=" << delta << " k0=" << kx);
        CHECK_THAT(ball_multiplier(delta, k, d), WithinAbs(oracle::ball_indicator_transform(d, delta, kn), 1e-8));
      }
    }
  }
  // zero frequency gives the ball volume
  CHECK_THAT(ball_multiplier(0.3, {0, 0}, 2), WithinRel(kPi * 0.09, 1e-14));
  CHECK_THROWS_AS(ball_multiplier(0.0, {1}, 1), DomainError);
  CHECK_THROWS_AS(ball_multiplier(-1.0, {1}, 1), DomainError);
}

TEST_CASE("ball_multiplier vanishes at the first Bessel zero", "[torus]") {
  for (int d = 1; d <= 6; ++d) {
    torus::FreqVector k(d, 0);
    k[0] = 2;
    const double delta = specfun::bessel_first_zero(d / 2.0) / (2 * kPi * 2.0);
    CHECK(std::abs(ball_multiplier(delta, k, d)) < 1e-14);
  }
}

TEST_CASE("delta_star values", "[torus]") {
  CHECK_THAT(delta_star(TrigPoly::from_cosines(1, {{{3}, 1.0}})), WithinRel(1.0 / 6.0, 1e-12));
  const double j11 = oracle::bisect([](double x) { return oracle::bessel_j_int(1, x); }, 3.0, 4.5);
  CHECK_THAT(delta_star(TrigPoly::from_cosines(2, {{{3, 4}, 1.0}})), WithinRel(j11 / (10 * kPi), 1e-10));
  const double j32 = oracle::bisect([](double x) { return std::tan(x) - x; }, 4.0, 4.7);
  CHECK_THAT(delta_star(TrigPoly::from_cosines(3, {{{1, 0, 0}, 1.0}})), WithinRel(j32 / (2 * kPi), 1e-10));
  CHECK_THAT(delta_star(TrigPoly::from_cosines(3, {{{1, 0, 0}, 1.0}})), WithinAbs(0.71513, 5e-5));
}

TEST_CASE("smooth_top_shell removes the top shell", "[torus]") {
  const auto f = TrigPoly::from_cosines(2, {{{1, 0}, 1.0}, {{0, 2}, 0.7}, {{1, 1}, -0.3}});
  const auto g = smooth_top_shell(f);
  CHECK(shells(g).norm_squares == std::vector<long long>{1, 2});
  const double ds = delta_star(f);
  const double j11 = oracle::bisect([](double x) { return oracle::bessel_j_int(1, x); }, 3.0, 4.5);
  CHECK_THAT(ds, WithinRel(j11 / (4 * kPi), 1e-10));
  CHECK_THAT(g.coefficient({1, 0}).real(), WithinRel(0.5 * oracle::ball_indicator_transform(2, ds, 1.0), 1e-7));
  CHECK(g.coefficient({0, 2}) == Complex(0.0, 0.0));
  CHECK(g.coefficient({0, 0}) == Complex(0.0, 0.0));
  const auto h = smooth_top_shell(g);
  CHECK(shells(h).size() == 1);
}

TEST_CASE("smoothing annihilates top-shell Fourier coefficients", "[torus][property]") {
  Pcg32 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    auto f = gen::random_trigpoly(rng, d, 4, d == 3 ? 4 : 6);
    if (shells(f).size() < 2 || delta_star(f) > 0.5) continue;
    const auto before = shells(f);
    const auto g = smooth_top_shell(f);
    CHECK(shells(g).size() + 1 == before.size());
    const int n = 4 * static_cast<int>(std::ceil(before.top())) + 2;
    auto fn = [&](const std::vector<double>& x) { return eval(g, x); };
    for (const auto& [k, a] : f.coeffs()) {
      if (norm_sq(k) != before.norm_squares.back()) continue;
      CHECK(std::abs(oracle::fourier_coefficient(fn, d, k, n)) <= 1e-10);
    }
  }
}

TEST_CASE("smoothing preserves positivity on shrunken balls", "[torus][property]") {
  // f = cos(2 pi x) + 0.3 cos(2 pi 5 x) is positive near 0; after smoothing
  // the result is positive on the ball shrunk by delta*.
  const auto f = TrigPoly::from_cosines(1, {{{1}, 1.0}, {{5}, 0.3}});
  double r = 0.0;
  while (eval(f, std::vector<double>{r + 1e-4}) > 0.0) r += 1e-4;
  const auto g = smooth_top_shell(f);
  const double ds = delta_star(f);
  REQUIRE(r > ds);
  for (double x = -(r - ds); x <= r - ds; x += 1e-3) CHECK(eval(g, std::vector<double>{x}) > 0.0);
}

TEST_CASE("smooth_top_shell error paths", "[torus][errors]") {
  CHECK_THROWS_AS(smooth_top_shell(TrigPoly::from_cosines(2, {{{1, 0}, 1.0}})), DomainError);
  // d = 3 with top norm sqrt 2: delta* = j_{3/2,1} / (2 pi sqrt 2) > 1/2
  CHECK_THROWS_AS(smooth_top_shell(TrigPoly::from_cosines(3, {{{1, 0, 0}, 1.0}, {{1, 1, 0}, 1.0}})), RangeError);
}
