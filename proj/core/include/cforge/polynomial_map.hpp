#pragma once

#include <complex>
#include <vector>

namespace cforge {

using cplx = std::complex<double>;

/// Z(zeta) = sum_{k=0}^{D} c_k zeta^k mapping the unit disk onto a domain.
struct PolynomialMap {
  std::vector<cplx> coeffs;  // c_0 .. c_D
  /// l2 norm of the negative-frequency coefficients c_{-1} .. c_{-D} of the
  /// boundary correspondence; zero for an exact disk map.
  double neg_residual = 0.0;
  /// Rotation gamma applied to zeta so that arg c_1 = 0 (theta_gauged = theta + gamma).
  double rotation = 0.0;
  int M = 0;
  int P = 0;

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

  cplx operator()(cplx zeta) const;
  cplx derivative(cplx zeta) const;
};

}  // namespace cforge
