#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "cforge/fourier_curve.hpp"
#include "cforge/polynomial_map.hpp"

namespace cforge {

/// Evaluates the tau-derivative of ln[(z(tau) - z(t)) / (e^{i tau} - e^{it})]
/// from the finite geometric-sum factorisation of the quotient, so tau = t is
/// an ordinary point. Real part is the kernel L, imaginary part the kernel K.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const FourierCurve& curve);

  /// Throws SolverError when the factored quotient is (relatively) below
  /// 1e-13, i.e. the curve self-intersects or degenerates.
  cplx log_derivative(double tau, double t) const;

  /// Kernel samples on the uniform P x P grid; row i is tau_i, column j is t_j.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> sample_grid(int P) const;

 private:
  std::vector<cplx> pos_;  // c_1 .. c_n
  std::vector<cplx> neg_;  // c_{-1} .. c_{-m}
  double scale_ = 1.0;
};

double kernel_K(const FourierCurve& curve, double tau, double t);
double kernel_L(const FourierCurve& curve, double tau, double t);

/// Trigonometric coefficients indexed from p = 0: f = a_0 + sum a_p cos pt + b_p sin pt.
struct TrigCoeffs {
  std::vector<double> a;
  std::vector<double> b;
};

/// Conjugate function: cos pt -> sin pt, sin pt -> -cos pt, constants -> 0.
TrigCoeffs conjugate_periodic(const TrigCoeffs& f);

/// Finite system for the cosine/sine coefficients (alpha, beta) of q.
struct BlockSystem {
  Eigen::MatrixXd AA, AB, BA, BB;
  Eigen::VectorXd F, G;

  int M() const noexcept { return static_cast<int>(AA.rows()); }
  Eigen::MatrixXd matrix() const;
  Eigen::VectorXd rhs() const;
};

/// Projects the integral equation onto cos(lt), sin(lt), l = 1..M using
/// P x P kernel samples and periodic trapezoid quadrature. Requires P >= 4M
/// and a curve winding once about the origin.
BlockSystem assemble_system(const FourierCurve& curve, int M, int P);

/// Boundary correspondence theta(t) = arg z(t) + q(t), with
/// q(t) = sum_{p=1}^{M} alpha_p cos pt + beta_p sin pt (zero mean).
struct ReparamSolution {
  explicit ReparamSolution(FourierCurve c) : curve(std::move(c)) {}

  FourierCurve curve;
  int M = 0;
  int P = 0;
  std::vector<double> alpha;  // alpha_1 .. alpha_M
  std::vector<double> beta;   // beta_1 .. beta_M
  int grid_size = 0;
  std::vector<double> theta_grid;  // theta(t_j), t_j = 2 pi j / grid_size
  std::vector<double> arg_grid;    // unwrapped arg z(t_j)
  bool accepted = false;           // theta_grid strictly increasing
  double rcond = 0.0;              // reciprocal condition estimate of the 2M system
  double residual = 0.0;           // relative residual of the direct solve

  double q(double t) const;
  double dq(double t) const;
  /// theta at an arbitrary parameter, continuous and with theta(t + 2pi) = theta(t) + 2pi.
  double theta(double t) const;
  double dtheta(double t) const;
};

/// Assembles and solves the block system by dense LU. Throws SolverError
/// for a numerically singular system. A non-monotone theta is returned with
/// accepted = false.
ReparamSolution solve_reparam(const FourierCurve& curve, int M, int P);

/// Monotone inverse t(theta) of an accepted solution.
class ThetaInverse {
 public:
  /// Throws SolverError for a rejected solution.
  explicit ThetaInverse(const ReparamSolution& sol);

  double operator()(double theta) const;

 private:
  ReparamSolution sol_;
  std::vector<double> t_nodes_;
  std::vector<double> theta_nodes_;  // closed with theta_0 + 2pi
};

ThetaInverse invert_theta(const ReparamSolution& sol);

/// Taylor coefficients c_k = (1/2pi) int z(t(theta)) e^{-ik theta} dtheta,
/// k = 0..D, by uniform quadrature on `grid` nodes (default 8D, at least 4D).
/// The result is rotated so that arg c_1 = 0.
PolynomialMap taylor_coeffs(const ReparamSolution& sol, int D, int grid = 0);
PolynomialMap taylor_coeffs(const FourierCurve& curve, const ReparamSolution& sol, int D,
                            int grid = 0);

}  // namespace cforge
