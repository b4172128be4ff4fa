#pragma once

// Independent reference computations shared by the test files. Nothing here
// calls into the library under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace testsupport {

using cplx = std::complex<double>;

/// Sine integral by its power series, summed in long double.
/// Accurate to ~1e-15 for |x| <= 12.
inline double sine_integral(double x) {
  const long double xx = x;
  long double term = xx;  // x^{2k+1} / (2k+1)!
  long double sum = 0.0L;
  for (int k = 0; k < 80; ++k) {
    sum += term / static_cast<long double>(2 * k + 1);
    term *= -xx * xx / static_cast<long double>((2 * k + 2) * (2 * k + 3));
    if (std::fabs(term) < 1e-30L) break;
  }
  return static_cast<double>(sum);
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 != 0 ? 4.0 : 2.0) * f(a + h * i);
  return s * h / 3.0;
}

/// FNV-1a, for pinning rendered output.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace testsupport
