#include <doctest.h>

#include <cmath>
#include <random>

#include "cforge/contours.hpp"
#include "cforge/corner_gap.hpp"
#include "cforge/error.hpp"
#include "cforge/fourier_curve.hpp"
#include "support.hpp"

using namespace cforge;

namespace {

FourierCurve random_curve(std::mt19937_64& rng, int m, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<int, cplx> c;
  for (int k = -m; k <= n; ++k) {
    const double decay = 1.0 / (1.0 + k * k);
    c[k] = decay * cplx{u(rng), u(rng)};
  }
  c[1] += 1.0;
  return FourierCurve(c);
}

}  // namespace

TEST_CASE("eval_curve on simple curves") {
  CHECK(std::abs(eval_curve(FourierCurve({{1, 1.0}}), kPi / 2) - cplx{0, 1}) < 1e-15);
  CHECK(std::abs(eval_curve(FourierCurve({{1, 1.0}, {-1, 0.5}}), 0.0) - 1.5) < 1e-15);

  const FourierCurve ellipse({{1, 0.625}, {-1, 0.375}});
  const double t = kPi / 4;
  const cplx direct{std::cos(t), 0.25 * std::sin(t)};
  CHECK(std::abs(ellipse(t) - direct) < 1e-15);
  CHECK(std::abs(direct - cplx{0.70711, 0.17678}) < 1e-5);
}

TEST_CASE("eval_curve is 2 pi periodic") {
  std::mt19937_64 rng(7);
  const auto c = random_curve(rng, 3, 5);
  for (double t : {0.0, 0.3, 2.0, 5.9}) CHECK(std::abs(c(t + kTwoPi) - c(t)) < 1e-13);
}

TEST_CASE("curve construction rejects a point and tracks degrees") {
  CHECK_THROWS_AS(FourierCurve({{0, 1.0}}), InputError);
  CHECK_THROWS_AS(FourierCurve({{1, cplx{NAN, 0.0}}}), InputError);
  const FourierCurve c({{-3, 0.1}, {0, 2.0}, {5, 0.0}, {1, 1.0}});
  CHECK(c.m() == 3);
  CHECK(c.n() == 5);
  CHECK(c.support_size() == 9);
}

TEST_CASE("derivative_curve coefficients") {
  CHECK(derivative_curve(FourierCurve({{1, 1.0}}), 1).coeff(1) == cplx{0, 1});
  CHECK(derivative_curve(FourierCurve({{2, 1.0}}), 2).coeff(2) == cplx{-4, 0});
  CHECK(derivative_curve(FourierCurve({{-1, 1.0}}), 1).coeff(-1) == cplx{0, -1});
  CHECK(derivative_curve(FourierCurve({{0, 3.0}, {1, 1.0}}), 1).coeff(0) == cplx{});
  CHECK_THROWS_AS(derivative_curve(FourierCurve({{1, 1.0}}), 0), InputError);
}

TEST_CASE("derivative_curve agrees with five-point differences") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const auto c = random_curve(rng, 32, 32);
    const auto d = derivative_curve(c, 1);
    const double h = 2e-4;
    double worst = 0.0;
    for (int j = 0; j < 1024; ++j) {
      const double t = kTwoPi * j / 1024;
      const cplx fd = (-c(t + 2 * h) + 8.0 * c(t + h) - 8.0 * c(t - h) + c(t - 2 * h)) / (12 * h);
      worst = std::max(worst, std::abs(fd - d(t)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("fit_from_samples recovers band-limited curves") {
  SUBCASE("unit circle, 16 samples") {
    const auto pts = FourierCurve({{1, 1.0}}).sample(16);
    const auto fit = fit_from_samples(pts, 0, 1);
    CHECK(std::abs(fit.coeff(1) - 1.0) < 1e-15);
    CHECK(std::abs(fit.coeff(0)) < 1e-15);
  }
  SUBCASE("two-term curve, 32 samples") {
    const auto pts = FourierCurve({{1, 1.5}, {-1, 0.25}}).sample(32);
    const auto fit = fit_from_samples(pts, 1, 1);
    CHECK(std::abs(fit.coeff(1) - 1.5) < 1e-14);
    CHECK(std::abs(fit.coeff(-1) - 0.25) < 1e-14);
  }
  SUBCASE("random support, exact and oversampled counts") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      const int m = trial % 4;
      const int n = 2 + trial;
      const auto c = random_curve(rng, m, n);
      for (int count : {m + n + 1, 4 * (m + n + 1)}) {
        const auto fit = fit_from_samples(c.sample(count), m, n);
        for (int k = -m; k <= n; ++k) CHECK(std::abs(fit.coeff(k) - c.coeff(k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("fit_from_samples on the three-semicircle contour") {
  const auto pts = cusp_contour(256);
  const auto fit = fit_from_samples(pts, 10, 10);
  const double dev = fit_deviation(fit, pts);
  MESSAGE("degree-10 fit deviation of the cusp contour: " << dev);
  CHECK(std::isfinite(dev));
  CHECK(dev > 0.0);
  CHECK(dev < 0.2);
}

TEST_CASE("fit_from_samples rejects underdetermined fits") {
  const auto pts = FourierCurve({{1, 1.0}}).sample(3);
  CHECK_THROWS_AS(fit_from_samples(pts, 4, 4), FitError);
}

TEST_CASE("Parseval on the sampling grid") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_curve(rng, trial, 6);
    double energy = 0.0;
    for (const auto& [k, v] : c.coeffs()) energy += std::norm(v);
    const int grid = 2 * (c.m() + c.n()) + 1;
    CHECK(std::abs(mean_square_modulus(c, grid) - energy) < 1e-12);
  }
}

TEST_CASE("unwrap_arg") {
  SUBCASE("unit circle") {
    const auto a = unwrap_arg(FourierCurve({{1, 1.0}}), 8);
    REQUIRE(a.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(a[j] == doctest::Approx(kPi * j / 4).epsilon(1e-14));
  }
  SUBCASE("continuous branch with total increase 2 pi") {
    const FourierCurve c({{1, 2.0}, {2, 0.3}});
    const auto a = unwrap_arg(c, 64);
    double total = 0.0;
    for (int j = 0; j < 64; ++j) {
      const cplx z0 = c(kTwoPi * j / 64);
      const cplx z1 = c(kTwoPi * (j + 1) / 64);
      const double step = std::arg(z1 / z0);  // brute-force winding
      total += step;
      if (j < 63) CHECK(a[j + 1] - a[j] == doctest::Approx(step).epsilon(1e-12));
    }
    CHECK(total == doctest::Approx(kTwoPi));
    CHECK(a.front() + kTwoPi - a.back() == doctest::Approx(total - (a.back() - a.front())));
  }
  SUBCASE("curve not enclosing the origin") {
    CHECK_THROWS_AS(unwrap_arg(FourierCurve({{0, 3.0}, {1, 0.5}}), 64), Error);
  }
}

TEST_CASE("curvature") {
  for (double t : {0.0, 1.0, 4.0}) {
    CHECK(curvature(FourierCurve({{1, 1.0}}), t) == doctest::Approx(1.0));
    CHECK(curvature(FourierCurve({{1, 2.5}}), t) == doctest::Approx(0.4));
  }
  CHECK(curvature(ellipse_curve(1.0, 0.25), 0.0) == doctest::Approx(16.0));
  // z(t) = e^{it} + e^{2it}/2 has z'(pi) = 0.
  CHECK_THROWS_AS(curvature(FourierCurve({{1, 1.0}, {2, 0.5}}), kPi), InputError);
}

TEST_CASE("multiply and affine_image") {
  const FourierCurve a({{1, 1.0}, {-1, 0.5}});
  const FourierCurve b({{0, 2.0}, {2, cplx{0, 1}}});
  const auto p = multiply(a, b);
  const auto s = affine_image(a, cplx{0, 2}, 1.0);
  for (double t : {0.1, 1.7, 3.3}) {
    CHECK(std::abs(p(t) - a(t) * b(t)) < 1e-14);
    CHECK(std::abs(s(t) - (cplx{0, 2} * a(t) + 1.0)) < 1e-14);
  }
}

TEST_CASE("corner gap: alpha = 1 against the sine-integral closed form") {
  // With alpha = 1 the integrand is 2 (1 - cos t) sin(nt) / t.
  for (long long n : {1LL, 3LL, 10LL}) {
    for (double eps : {0.2, 1.0, kPi / (2.0 * n)}) {
      using testsupport::sine_integral;
      const double exact = 2.0 * (sine_integral(n * eps) -
                                  0.5 * (sine_integral((n + 1) * eps) +
                                         sine_integral((n - 1) * eps)));
      const double got = corner_gap_F({n, eps, 1.0});
      CHECK(got == doctest::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("corner gap: Simpson cross-check") {
  for (double alpha : {1.1, 1.5, 1.9}) {
    for (long long n : {2LL, 8LL, 32LL}) {
      const double eps = kPi / (2.0 * n);
      auto f = [&](double t) {
        if (t == 0.0) return 0.0;
        return std::pow(2.0, alpha + 1) * std::pow(std::sin(0.5 * t), alpha) *
               std::cos(0.5 * alpha * (t - kPi)) * std::sin(n * t) / t;
      };
      const double reference = testsupport::simpson(f, 0.0, eps, 200000);
      CHECK(corner_gap_F({n, eps, alpha}) == doctest::Approx(reference).epsilon(1e-6));
    }
  }
}

TEST_CASE("corner gap bound and limits") {
  CHECK(std::abs(corner_gap_F({5, 1e-8, 1.5})) < 1e-12);

  for (long long n : {4LL, 16LL, 64LL}) {
    const double F = corner_gap_F({n, kPi / (2.0 * n), 1.5});
    CHECK(F <= corner_gap_upper_bound(n));
    CHECK(std::abs(F) <= corner_gap_upper_bound(n));
  }
  CHECK(corner_gap_upper_bound(4) == doctest::Approx(kPi * kPi / 16));

  for (double alpha : {1.1, 1.5, 1.9}) {
    const double f4 = std::abs(corner_gap_F({4, kPi / 8, alpha}));
    const double f1024 = std::abs(corner_gap_F({1024, kPi / 2048, alpha}));
    CHECK(f1024 < f4);
  }

  for (long long n : {1000LL, 1000000LL}) {
    const double F = corner_gap_F({n, kPi / (2.0 * n), 1.0 / std::log(static_cast<double>(n))});
    CHECK(F >= 0.5);
  }
}

TEST_CASE("corner gap query validation") {
  CHECK_THROWS_AS(corner_gap_F({0, 0.1, 1.5}), InputError);
  CHECK_THROWS_AS(corner_gap_F({4, 0.0, 1.5}), InputError);
  CHECK_THROWS_AS(corner_gap_F({4, 4.0, 1.5}), InputError);
  CHECK_THROWS_AS(corner_gap_F({4, 0.1, 2.0}), InputError);
  CHECK_THROWS_AS(corner_gap_F({4, 0.1, 0.0}), InputError);
}
