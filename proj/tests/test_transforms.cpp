#include <doctest.h>

#include <cmath>
#include <random>

#include "cforge/error.hpp"
#include "cforge/fourier_curve.hpp"
#include "cforge/root_cf.hpp"
#include "cforge/transforms.hpp"

using namespace cforge;

TEST_CASE("stage evaluation") {
  const auto aff = PlaneTransform::affine(cplx{0, 2}, 1.0);
  CHECK(std::abs(aff.apply(cplx{1, 1}) - cplx{-1, 2}) < 1e-15);

  const auto mob = PlaneTransform::moebius(1.0, cplx{0, 1}, 2.0, 1.0);
  const cplx z{0.3, -0.2};
  CHECK(std::abs(mob.apply(z) - (z + cplx{0, 1}) / (2.0 * z + 1.0)) < 1e-15);
  CHECK_THROWS_AS(PlaneTransform::moebius(1.0, 2.0, 0.5, 1.0), InputError);

  const auto pw = PlaneTransform::power(3, 2);
  CHECK(pw.power_N() == 3);
  CHECK(pw.power_k() == 2);
  CHECK(std::abs(pw.apply(4.0) - 8.0) < 1e-14);

  const auto root = PlaneTransform::cf_root({1, 2, 3});
  CHECK(std::abs(root.apply(4.0) - 80.0 / 41.0) < 1e-15);
  CHECK_THROWS_AS(root.apply(cplx{-1.0, 0.0}), DomainError);
}

TEST_CASE("exact inverses") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto aff = PlaneTransform::affine(cplx{0.5, -1.5}, cplx{2.0, 0.1});
  const auto mob = PlaneTransform::moebius(cplx{1, 1}, 0.5, cplx{0.2, 0}, 1.0);
  for (int i = 0; i < 100; ++i) {
    const cplx z{u(rng), u(rng)};
    CHECK(std::abs(aff.inverse().apply(aff.apply(z)) - z) < 1e-12);
    if (std::abs(0.2 * z + 1.0) > 1e-3) {
      CHECK(std::abs(mob.inverse().apply(mob.apply(z)) - z) < 1e-10 * std::max(1.0, std::abs(z)));
    }
  }
  CHECK(PlaneTransform::cf_root({2, 5, 4}).inverse().kind() == TransformKind::power);
  CHECK(PlaneTransform::cf_root({2, 5, 4}).inverse().power_N() == 5);
  CHECK(PlaneTransform::power(5, 2).inverse(7).approximant().n_iter == 7);
}

TEST_CASE("power then cf_root returns the input within the truncation bound") {
  // Right-half-plane images w = z^{N/k} with 0.2 <= |w| <= 5 and |arg w| <= 0.45 pi.
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ang(-0.45 * kPi, 0.45 * kPi);
  std::uniform_real_distribution<double> lr(std::log(0.2), std::log(5.0));
  for (const auto [k, N] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}, std::pair{3, 5}}) {
    const auto power = PlaneTransform::power(N, k);
    for (int n_iter : {4, 8, 16}) {
      const auto root = power.inverse(n_iter);
      for (int i = 0; i < 100; ++i) {
        const cplx z = principal_root(std::polar(std::exp(lr(rng)), ang(rng)), k, N);
        const cplx w = power.apply(z);
        REQUIRE(w.real() > 0.0);
        const double rho = rate_estimate(w, root.approximant());
        // For N >= 3 rho is the asymptotic rate only; early iterates carry a larger constant.
        const double factor = N == 2 ? 10.0 : 100.0;
        const double bound = factor * std::pow(rho, n_iter) * std::max(1.0, std::abs(z));
        CHECK(std::abs(root.apply(w) - z) <= bound + 1e-13);
      }
    }
  }
}

TEST_CASE("stage json round trip") {
  for (const auto& s : {PlaneTransform::affine(cplx{1, 2}, cplx{3, 4}),
                        PlaneTransform::moebius(1.0, 2.0, 3.0, 7.0), PlaneTransform::power(3, 1),
                        PlaneTransform::cf_root({2, 3, 6})}) {
    const auto back = PlaneTransform::from_json(s.to_json());
    CHECK(back.kind() == s.kind());
    CHECK(back.to_json() == s.to_json());
    CHECK(std::abs(back.apply(cplx{0.7, 0.2}) - s.apply(cplx{0.7, 0.2})) == 0.0);
  }
  // The power exponent is an integer pair.
  const auto j = PlaneTransform::power(3, 2).to_json();
  CHECK(j.at("N").is_number_integer());
  CHECK(j.at("k").is_number_integer());
  CHECK_THROWS_AS(PlaneTransform::from_json({{"kind", "shear"}}), InputError);
}
