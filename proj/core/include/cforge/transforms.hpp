#pragma once

#include <complex>
#include <string>

#include <json.hpp>

#include "cforge/root_cf.hpp"

namespace cforge {

using cplx = std::complex<double>;

enum class TransformKind { affine, moebius, power, cf_root };

const char* to_string(TransformKind kind) noexcept;

/// One stage of a composed map.
///   affine:  z -> a z + b
///   moebius: z -> (a z + b) / (c z + d), |ad - bc| > 1e-12
///   power:   z -> z^{N/k} (principal branch), exponent kept as the pair (N, k)
///   cf_root: z -> fraction-polynomial approximant of z^{k/N}
class PlaneTransform {
 public:
  static PlaneTransform affine(cplx a, cplx b);
  static PlaneTransform moebius(cplx a, cplx b, cplx c, cplx d);
  static PlaneTransform power(int N, int k);
  static PlaneTransform cf_root(const CFApproximant& approx);

  TransformKind kind() const noexcept { return kind_; }
  cplx a() const noexcept { return a_; }
  cplx b() const noexcept { return b_; }
  cplx c() const noexcept { return c_; }
  cplx d() const noexcept { return d_; }
  /// Numerator N and denominator k of a power stage's exponent N/k.
  int power_N() const noexcept { return N_; }
  int power_k() const noexcept { return k_; }
  const CFApproximant& approximant() const noexcept { return approx_; }

  /// Throws DomainError from a cf_root stage whose input has Re z <= 0.
  cplx apply(cplx z) const;

  /// Exact inverse for affine and Moebius stages, power(N, k) for cf_root(k, N).
  /// A power stage is inverted by cf_root(k, N, n_iter).
  PlaneTransform inverse(int n_iter = 8) const;

  nlohmann::json to_json() const;
  static PlaneTransform from_json(const nlohmann::json& j);

 private:
  PlaneTransform() = default;

  TransformKind kind_ = TransformKind::affine;
  cplx a_{1.0, 0.0};
  cplx b_{0.0, 0.0};
  cplx c_{0.0, 0.0};
  cplx d_{1.0, 0.0};
  int N_ = 1;
  int k_ = 1;
  CFApproximant approx_{};
};

}  // namespace cforge
