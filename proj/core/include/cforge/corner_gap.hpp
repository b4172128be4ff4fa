#pragma once

namespace cforge {

/// Parameters of the corner-gap integral
///   F(n, eps, alpha) = 2^{alpha+1} int_0^eps sin^alpha(t/2) cos(alpha (t - pi) / 2) sin(nt)/t dt,
/// which measures the Fourier partial-sum defect S_n(0) - z(0) at a corner
/// modelled by z(t) = (1 - e^{it})^alpha K.
struct CornerGapQuery {
  long long n = 1;
  double eps = 0.0;
  double alpha = 1.0;

  /// Throws InputError unless n >= 1, eps in (0, pi] and alpha in (0, 2).
  void validate() const;
};

struct CornerGapResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive quadrature to relative tolerance 1e-10. After the substitution
/// u = n t the integrand is split at the zeros of sin(u); the first panel is
/// integrated with tanh-sinh (the u^alpha endpoint behaviour), the others with
/// Gauss-Kronrod. The integrand takes its limit value 0 at t = 0.
/// Throws QuadratureError if the tolerance is not met.
CornerGapResult corner_gap(const CornerGapQuery& query);

double corner_gap_F(const CornerGapQuery& query);

/// pi^2 / (4n): upper bound on F(n, pi/(2n), alpha) for alpha > 1.
double corner_gap_upper_bound(long long n);

}  // namespace cforge
