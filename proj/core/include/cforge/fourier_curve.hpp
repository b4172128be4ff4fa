#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace cforge {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Closed curve z(t) = sum_{k=-m}^{n} c_k e^{ikt}, t in [0, 2pi).
///
/// Coefficients are stored sparsely by index; zeros inside the support are
/// allowed. The degrees m and n are derived from the stored indices, so they
/// always match the support.
class FourierCurve {
 public:
  /// Throws InputError when every coefficient with |k| >= 1 is zero
  /// (the curve would be a single point) or when a coefficient is not finite.
  explicit FourierCurve(std::map<int, cplx> coeffs);

  const std::map<int, cplx>& coeffs() const noexcept { return coeffs_; }
  cplx coeff(int k) const;

  /// Max negative degree.
  int m() const noexcept { return m_; }
  /// Max positive degree.
  int n() const noexcept { return n_; }
  /// Number of indices in [-m, n].
  int support_size() const noexcept { return m_ + n_ + 1; }

  cplx operator()(double t) const;

  /// Values at t_j = 2 pi j / count.
  std::vector<cplx> sample(int count) const;

 private:
  std::map<int, cplx> coeffs_;
  int m_ = 0;
  int n_ = 0;
};

cplx eval_curve(const FourierCurve& curve, double t);

/// Coefficient k of the result is (ik)^order c_k; the constant term drops out.
/// Throws InputError for order < 1, or when the derivative of a degree-0
/// curve would be identically zero.
FourierCurve derivative_curve(const FourierCurve& curve, int order);

/// Discrete-Fourier least-squares fit of support [-m, n] to samples taken at
/// uniformly spaced parameters over [0, 2pi). Throws FitError when there are
/// fewer than m + n + 1 samples.
FourierCurve fit_from_samples(std::span<const cplx> points, int m, int n);

/// Max |curve(t_j) - points[j]| over the uniform sample parameters.
double fit_deviation(const FourierCurve& curve, std::span<const cplx> points);

/// Continuous branch of arg z(t) on the uniform grid of grid_size nodes.
/// Adjacent nodes are unwrapped with a jump threshold of pi; the total
/// winding about the origin must come out as exactly 1, so an under-resolved
/// grid is reported as an error rather than a silent branch slip.
std::vector<double> unwrap_arg(const FourierCurve& curve, int grid_size);

/// Signed curvature Im[conj(z') z''] / |z'|^3. Throws InputError at a cusp.
double curvature(const FourierCurve& curve, double t);

/// Mean of |z(t)|^2 over a uniform grid; equals sum |c_k|^2 when the grid
/// has at least 2(m+n)+1 nodes.
double mean_square_modulus(const FourierCurve& curve, int grid_size);

/// Product of two trigonometric polynomials (exact convolution of coefficients).
FourierCurve multiply(const FourierCurve& a, const FourierCurve& b);

/// a * curve + b, coefficient-wise.
FourierCurve affine_image(const FourierCurve& curve, cplx a, cplx b);

}  // namespace cforge
