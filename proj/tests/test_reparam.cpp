#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "cforge/error.hpp"
#include "cforge/reparam.hpp"
#include "cforge/verify.hpp"

using namespace cforge;

namespace {

const FourierCurve kCircle({{1, 1.0}});
const FourierCurve kCircle2({{1, 2.0}});
const FourierCurve kBumped({{1, 1.0}, {2, 0.2}});
const FourierCurve kPoly3({{1, 1.0}, {2, 0.3}});

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// theta(t) - t with its mean removed, sup over a grid.
double identity_defect(const ReparamSolution& sol, int grid = 512) {
  std::vector<double> d(grid);
  double mean = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double t = kTwoPi * j / grid;
    d[j] = sol.theta(t) - t;
    mean += d[j] / grid;
  }
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

}  // namespace

TEST_CASE("kernels vanish for circles") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 20; ++i) {
    const double tau = u(rng);
    const double t = i % 5 == 0 ? tau : u(rng);
    CHECK(std::abs(kernel_K(kCircle, tau, t)) < 1e-13);
    CHECK(std::abs(kernel_L(kCircle, tau, t)) < 1e-13);
    CHECK(std::abs(kernel_L(kCircle2, tau, t)) < 1e-13);
  }
}

TEST_CASE("kernels match direct off-diagonal evaluation") {
  // d/dtau ln(e^{i tau} - e^{it}) = 1/2 cot((tau - t)/2) + i/2.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const auto dz = [](double s) {
    return cplx{0, 1} * std::polar(1.0, s) + cplx{0, 0.4} * std::polar(1.0, 2 * s);
  };
  for (int i = 0; i < 50; ++i) {
    const double tau = u(rng);
    const double t = u(rng);
    if (std::abs(std::sin(0.5 * (tau - t))) < 1e-3) continue;
    const cplx w = dz(tau) / (kBumped(tau) - kBumped(t));
    const double half_cot = 0.5 / std::tan(0.5 * (tau - t));
    CHECK(kernel_K(kBumped, tau, t) == doctest::Approx(w.imag() - 0.5).epsilon(1e-10));
    CHECK(kernel_L(kBumped, tau, t) == doctest::Approx(w.real() - half_cot).epsilon(1e-10));
  }
}

TEST_CASE("kernels match finite differences of the log quotient") {
  const auto quotient = [](double tau, double t) {
    return (kBumped(tau) - kBumped(t)) / (std::polar(1.0, tau) - std::polar(1.0, t));
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  const double h = 1e-6;
  for (int i = 0; i < 30; ++i) {
    const double t = u(rng);
    const double tau = t + 0.1 + u(rng) * 0.9;
    const cplx fd = std::log(quotient(tau + h, t) / quotient(tau - h, t)) / (2 * h);
    CHECK(kernel_L(kBumped, tau, t) == doctest::Approx(fd.real()).epsilon(1e-6));
    CHECK(kernel_K(kBumped, tau, t) == doctest::Approx(fd.imag()).epsilon(1e-6));
  }
  // On the diagonal the factored form is regular; compare with tau = t + 1e-5.
  for (double t : {0.0, 1.0, 2.5}) {
    const double near = t + 1e-5;
    const cplx fd = std::log(quotient(near + h, t) / quotient(near - h, t)) / (2 * h);
    CHECK(std::isfinite(kernel_K(kBumped, t, t)));
    CHECK(kernel_K(kBumped, t, t) == doctest::Approx(fd.imag()).epsilon(1e-3));
    CHECK(kernel_L(kBumped, t, t) == doctest::Approx(fd.real()).epsilon(1e-3));
  }
}

TEST_CASE("kernel rejects a self-intersecting curve") {
  // Figure eight: z(t) = sin t + i sin 2t / 2 meets itself at t = 0 and t = pi.
  const FourierCurve eight({{1, cplx{0, -0.5}}, {-1, cplx{0, 0.5}}, {2, cplx{0.25, 0}},
                            {-2, cplx{-0.25, 0}}});
  CHECK_THROWS_AS(kernel_K(eight, kPi, 0.0), SolverError);
}

TEST_CASE("conjugate_periodic") {
  TrigCoeffs f;
  f.a = {1.0, 1.0, 0.0, 0.0};
  f.b = {0.0, 0.0, 0.0, 1.0};
  const auto g = conjugate_periodic(f);
  CHECK(g.a[0] == 0.0);   // constant -> 0
  CHECK(g.b[1] == 1.0);   // cos t -> sin t
  CHECK(g.a[3] == -1.0);  // sin 3t -> -cos 3t
  CHECK(g.a[1] == 0.0);
  CHECK(g.b[3] == 0.0);
}

TEST_CASE("assembled system for circles is the identity") {
  for (const auto* c : {&kCircle, &kCircle2}) {
    const auto sys = assemble_system(*c, 8, 64);
    CHECK(max_abs(sys.AA - Eigen::MatrixXd::Identity(8, 8)) < 1e-12);
    CHECK(max_abs(sys.BB - Eigen::MatrixXd::Identity(8, 8)) < 1e-12);
    CHECK(max_abs(sys.AB) < 1e-12);
    CHECK(max_abs(sys.BA) < 1e-12);
    CHECK(sys.F.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sys.G.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("assembled system for a perturbed circle") {
  const auto sys = assemble_system(kBumped, 16, 128);
  const Eigen::MatrixXd A = sys.matrix();
  REQUIRE(A.rows() == 32);
  CHECK(A.allFinite());
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const double cond = svd.singularValues()(0) / svd.singularValues()(31);
  MESSAGE("condition number " << cond);
  CHECK(std::isfinite(cond));
  const Eigen::VectorXd x = A.fullPivLu().solve(sys.rhs());
  CHECK((A * x - sys.rhs()).norm() <= 1e-10 * std::max(1.0, sys.rhs().norm()));
  CHECK_THROWS_AS(assemble_system(kBumped, 16, 60), InputError);
}

TEST_CASE("solve_reparam: identity cases") {
  const auto circle = solve_reparam(kCircle, 8, 64);
  CHECK(circle.accepted);
  for (double t : {0.0, 1.0, 4.0}) CHECK(std::abs(circle.q(t)) < 1e-12);
  CHECK(identity_defect(circle) < 1e-12);

  const auto poly = solve_reparam(kPoly3, 32, 256);
  CHECK(poly.accepted);
  CHECK(identity_defect(poly) < 1e-6);
  CHECK(poly.residual < 1e-10);
}

TEST_CASE("solve_reparam: solution invariants") {
  const auto sol = solve_reparam(planted_oracle_curve(), 32, 256);
  REQUIRE(sol.accepted);
  // q has zero mean and theta(t) - t is periodic.
  double mean = 0.0;
  for (int j = 0; j < 1024; ++j) mean += sol.q(kTwoPi * j / 1024) / 1024;
  CHECK(std::abs(mean) < 1e-14);
  CHECK(sol.theta(kTwoPi) - sol.theta(0.0) == doctest::Approx(kTwoPi).epsilon(1e-13));
  for (std::size_t j = 1; j < sol.theta_grid.size(); ++j) {
    CHECK(sol.theta_grid[j] > sol.theta_grid[j - 1]);
  }
}

TEST_CASE("solve_reparam: identity property on random polynomial boundaries") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 6, 12}) {
    for (int trial = 0; trial < 3; ++trial) {
      std::map<int, cplx> c{{1, 1.0}};
      double weight = 0.0;
      std::map<int, cplx> tail;
      for (int k = 2; k <= n; ++k) {
        tail[k] = cplx{u(rng), u(rng)};
        weight += k * std::abs(tail[k]);
      }
      for (auto& [k, v] : tail) c[k] = v * (0.4 / weight);  // keeps z' away from 0
      const auto sol = solve_reparam(FourierCurve(c), 4 * n, 32 * n);
      REQUIRE(sol.accepted);
      CHECK(identity_defect(sol) < 1e-5);
    }
  }
}

TEST_CASE("solve_reparam: planted oracle") {
  const auto sol = solve_reparam(planted_oracle_curve(), 64, 512);
  REQUIRE(sol.accepted);
  // The zero-mean gauge fixes theta only up to a constant.
  std::vector<double> d(1024);
  double mean = 0.0;
  for (int j = 0; j < 1024; ++j) {
    const double t = kTwoPi * j / 1024;
    d[j] = sol.theta(t) - (t + 0.3 * std::sin(t));
    mean += d[j] / 1024;
  }
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, std::abs(v - mean));
  CHECK(worst < 2e-3);
}

TEST_CASE("invert_theta") {
  SUBCASE("hand-built theta(t) = t + 0.3 sin t on the unit circle") {
    ReparamSolution sol(kCircle);
    sol.M = 1;
    sol.alpha = {0.0};
    sol.beta = {0.3};
    sol.grid_size = 64;
    for (int j = 0; j < 64; ++j) {
      const double t = kTwoPi * j / 64;
      sol.arg_grid.push_back(t);
      sol.theta_grid.push_back(t + 0.3 * std::sin(t));
    }
    sol.accepted = true;
    const auto inv = invert_theta(sol);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
      const double theta = u(rng);
      const double t = inv(theta);
      CHECK(std::abs(t + 0.3 * std::sin(t) - theta) < 1e-10);
      CHECK(inv(theta + kTwoPi) == doctest::Approx(t + kTwoPi).epsilon(1e-12));
    }
  }
  SUBCASE("identity") {
    const auto inv = invert_theta(solve_reparam(kCircle, 4, 32));
    for (double th : {0.0, 1.0, 3.0, 6.0}) CHECK(inv(th) == doctest::Approx(th).epsilon(1e-12));
  }
  SUBCASE("round trip on grid nodes") {
    const auto sol = solve_reparam(planted_oracle_curve(), 32, 256);
    const auto inv = invert_theta(sol);
    for (int j = 0; j < sol.grid_size; j += 7) {
      const double t = kTwoPi * j / sol.grid_size;
      CHECK(std::abs(inv(sol.theta_grid[j]) - t) < 1e-10);
    }
  }
  SUBCASE("rejected solutions cannot be inverted") {
    ReparamSolution sol(kCircle);
    sol.accepted = false;
    CHECK_THROWS_AS(invert_theta(sol), SolverError);
  }
}

TEST_CASE("taylor_coeffs") {
  SUBCASE("unit circle") {
    const auto map = taylor_coeffs(solve_reparam(kCircle, 8, 64), 4);
    REQUIRE(map.coeffs.size() == 5);
    CHECK(std::abs(map.coeffs[1] - 1.0) < 1e-12);
    for (int k : {0, 2, 3, 4}) CHECK(std::abs(map.coeffs[k]) < 1e-12);
    CHECK(map.neg_residual < 1e-12);
  }
  SUBCASE("polynomial boundary") {
    const auto map = taylor_coeffs(solve_reparam(kPoly3, 32, 256), 8);
    CHECK(std::abs(map.coeffs[1] - 1.0) < 1e-6);
    CHECK(std::abs(map.coeffs[2] - 0.3) < 1e-6);
    for (int k = 3; k <= 8; ++k) CHECK(std::abs(map.coeffs[k]) < 1e-6);
    CHECK(map.neg_residual < 1e-8);
  }
  SUBCASE("rotated polynomial boundary is brought to the gauge") {
    const cplx r = std::polar(1.0, 0.7);
    const FourierCurve rotated({{1, r}, {2, 0.3 * r * r}});
    const auto map = taylor_coeffs(solve_reparam(rotated, 32, 256), 8);
    CHECK(std::abs(map.coeffs[1].imag()) < 1e-12);
    CHECK(map.coeffs[1].real() > 0.0);
    // Z(zeta) = r zeta' + 0.3 r^2 zeta'^2 with zeta' = zeta / r -> zeta + 0.3 zeta^2.
    CHECK(std::abs(map.coeffs[2] - 0.3) < 1e-6);
  }
  SUBCASE("planted oracle") {
    const auto map = taylor_coeffs(solve_reparam(planted_oracle_curve(), 64, 512), 16);
    CHECK(std::abs(map.coeffs[1] - 1.0) < 5e-3);
    CHECK(std::abs(map.coeffs[2] - 0.1) < 5e-3);
    CHECK(std::abs(map.coeffs[0]) < 5e-3);
    for (int k = 3; k <= 16; ++k) CHECK(std::abs(map.coeffs[k]) < 5e-3);
  }
}

TEST_CASE("negative-frequency residual shrinks as M doubles") {
  const auto curve = planted_oracle_curve();
  double previous = -1.0;
  for (int M : {16, 32, 64, 128}) {
    const auto map = taylor_coeffs(solve_reparam(curve, M, 8 * M), 32);
    MESSAGE("M=" << M << " neg_residual=" << map.neg_residual);
    if (previous >= 0.0) CHECK(map.neg_residual <= 2.0 * previous + 1e-14);
    previous = map.neg_residual;
  }
}
