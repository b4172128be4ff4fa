#pragma once

#include <complex>
#include <vector>

#include <json.hpp>

namespace cforge {

using cplx = std::complex<double>;

/// Recursion parameters for the fraction-polynomial approximant of z^{k/N}.
/// (k, N) are kept exactly as given: 2/4 and 1/2 are different approximants.
struct CFApproximant {
  int k = 1;
  int N = 2;
  int n_iter = 1;

  /// Throws InputError unless N >= 2, 1 <= k <= N-1 and n_iter >= 1.
  void validate() const;
};

/// f_1(z) = 1 + (z-1)/(1+z), f_n(z) = 1 + (z-1)/(1 + f_{n-1}(z)).
/// Throws DomainError when Re z <= 0.
cplx sqrt_cf(cplx z, int n);

/// n-th approximant r_n of z^{1/N}:
///   r_1 = 1 + (z-1)/(z+1),
///   r_n = 1 + (z-1) / sum_{j=0}^{N-1} s_j,
/// with s_j = r_{n-1}^j for j <= floor(N/2) and s_j = z / r_{n-1}^{N-j} above.
/// The z^{k/N} approximant is r_n^k for k <= floor(N/2), else z / r_n^{N-k}.
/// For (1,2) this is sqrt_cf; for (1,3) and (2,3) it is g_n and z/g_n.
cplx root_cf(cplx z, const CFApproximant& approx);

/// Principal-branch z^{k/N}.
cplx principal_root(cplx z, int k, int N);

/// Per-iteration contraction |(z - N(z^{1/N} - 1) z^{floor(N/2)/N} - 1) / (z - 1)|,
/// principal branch; 0 at z = 1. For N = 2 this is |(1 - sqrt z)/(1 + sqrt z)|.
double rate_estimate(cplx z, const CFApproximant& approx);

/// Polynomial quotient num(z)/den(z); coefficients in ascending powers.
struct RationalMap {
  std::vector<cplx> num;
  std::vector<cplx> den;

  cplx operator()(cplx z) const;
};

/// Normal form of the approximant obtained by clearing denominators through
/// the recursion. Requires n_iter <= 32 and N <= 12; throws InputError when
/// the polynomial degree would exceed kMaxRationalDegree.
RationalMap cf_rational_form(const CFApproximant& approx);

inline constexpr int kMaxRationalDegree = 1024;

/// {"num": [[re, im], ...], "den": [...], "k": int, "N": int, "n": int}
nlohmann::json rational_to_json(const RationalMap& map, const CFApproximant& approx);
/// Inverse of rational_to_json; fills `approx` when non-null.
RationalMap rational_from_json(const nlohmann::json& j, CFApproximant* approx = nullptr);

}  // namespace cforge
