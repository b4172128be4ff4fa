#include "cforge/fourier_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cforge/error.hpp"

namespace cforge {

FourierCurve::FourierCurve(std::map<int, cplx> coeffs) : coeffs_(std::move(coeffs)) {
  bool non_constant = false;
  for (const auto& [k, c] : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InputError("non-finite Fourier coefficient at k=" + std::to_string(k));
    }
    if (k != 0 && c != cplx{}) non_constant = true;
  }
  if (!non_constant) {
    throw InputError("curve has no nonzero coefficient with |k| >= 1");
  }
  m_ = std::max(0, -coeffs_.begin()->first);
  n_ = std::max(0, coeffs_.rbegin()->first);
}

cplx FourierCurve::coeff(int k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx{} : it->second;
}

cplx FourierCurve::operator()(double t) const {
  cplx sum{};
  for (const auto& [k, c] : coeffs_) {
    sum += c * std::polar(1.0, static_cast<double>(k) * t);
  }
  return sum;
}

std::vector<cplx> FourierCurve::sample(int count) const {
  std::vector<cplx> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    out[static_cast<std::size_t>(j)] = (*this)(kTwoPi * j / count);
  }
  return out;
}

cplx eval_curve(const FourierCurve& curve, double t) { return curve(t); }

FourierCurve derivative_curve(const FourierCurve& curve, int order) {
  if (order < 1) throw InputError("derivative order must be >= 1");
  std::map<int, cplx> out;
  for (const auto& [k, c] : curve.coeffs()) {
    if (k == 0) continue;
    out[k] = std::pow(cplx(0.0, static_cast<double>(k)), order) * c;
  }
  return FourierCurve(std::move(out));
}

FourierCurve fit_from_samples(std::span<const cplx> points, int m, int n) {
  if (m < 0 || n < 0) throw InputError("fit degrees must be non-negative");
  const auto count = static_cast<int>(points.size());
  if (count < m + n + 1) {
    throw FitError("underdetermined fit: " + std::to_string(count) + " samples for " +
                   std::to_string(m + n + 1) + " coefficients");
  }
  std::map<int, cplx> coeffs;
  for (int k = -m; k <= n; ++k) {
    cplx acc{};
    for (int j = 0; j < count; ++j) {
      // Reduce k*j mod count so the twiddle angle stays small and exact.
      const long long r = (static_cast<long long>(k) * j) % count;
      acc += points[static_cast<std::size_t>(j)] *
             std::polar(1.0, -kTwoPi * static_cast<double>(r) / count);
    }
    coeffs[k] = acc / static_cast<double>(count);
  }
  return FourierCurve(std::move(coeffs));
}

double fit_deviation(const FourierCurve& curve, std::span<const cplx> points) {
  const auto count = static_cast<int>(points.size());
  double worst = 0.0;
  for (int j = 0; j < count; ++j) {
    worst = std::max(worst, std::abs(curve(kTwoPi * j / count) - points[static_cast<std::size_t>(j)]));
  }
  return worst;
}

std::vector<double> unwrap_arg(const FourierCurve& curve, int grid_size) {
  if (grid_size < 3) throw InputError("unwrap_arg needs at least 3 grid nodes");
  constexpr double kOriginTol = 1e-12;
  const auto z = curve.sample(grid_size);
  double scale = 0.0;
  for (const auto& [k, c] : curve.coeffs()) scale += std::abs(c);

  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (std::abs(z[j]) < kOriginTol * std::max(1.0, scale)) {
      throw InputError("curve passes through the origin near t=" +
                       std::to_string(kTwoPi * static_cast<double>(j) / grid_size));
    }
  }
  out[0] = std::arg(z[0]);
  for (std::size_t j = 1; j < z.size(); ++j) {
    double step = std::arg(z[j]) - std::arg(z[j - 1]);
    if (step > kPi) step -= kTwoPi;
    if (step < -kPi) step += kTwoPi;
    out[j] = out[j - 1] + step;
  }
  double closing = std::arg(z.front()) - std::arg(z.back());
  if (closing > kPi) closing -= kTwoPi;
  if (closing < -kPi) closing += kTwoPi;
  const double total = out.back() + closing - out.front();
  const long winding = std::lround(total / kTwoPi);
  if (winding != 1) {
    throw InputError("winding number about the origin is " + std::to_string(winding) +
                     " (expected 1; origin outside, clockwise curve or under-resolved grid)");
  }
  return out;
}

double curvature(const FourierCurve& curve, double t) {
  const auto d1 = derivative_curve(curve, 1);
  const auto d2 = derivative_curve(curve, 2);
  const cplx zp = d1(t);
  const cplx zpp = d2(t);
  const double speed = std::abs(zp);
  if (speed < 1e-12) throw InputError("curvature undefined: |z'(t)| vanishes (cusp)");
  return (std::conj(zp) * zpp).imag() / (speed * speed * speed);
}

double mean_square_modulus(const FourierCurve& curve, int grid_size) {
  double acc = 0.0;
  for (const auto& z : curve.sample(grid_size)) acc += std::norm(z);
  return acc / grid_size;
}

FourierCurve multiply(const FourierCurve& a, const FourierCurve& b) {
  std::map<int, cplx> out;
  for (const auto& [ka, ca] : a.coeffs()) {
    for (const auto& [kb, cb] : b.coeffs()) out[ka + kb] += ca * cb;
  }
  return FourierCurve(std::move(out));
}

FourierCurve affine_image(const FourierCurve& curve, cplx a, cplx b) {
  std::map<int, cplx> out;
  for (const auto& [k, c] : curve.coeffs()) out[k] = a * c;
  out[0] += b;
  return FourierCurve(std::move(out));
}

}  // namespace cforge
