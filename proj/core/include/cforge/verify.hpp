#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include <json.hpp>

#include "cforge/fourier_curve.hpp"

namespace cforge {

/// Reproducible uniform doubles independent of the standard library's
/// distribution implementations.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed);
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// |z| log-uniform in [rmin, rmax], |arg z| <= max_arg.
  cplx right_half_plane(double rmin, double rmax, double max_arg);

 private:
  std::uint64_t state_;
};

/// One checked property: margin > 0 means the sample satisfied it.
struct PropertyTally {
  std::string name;
  long long samples = 0;
  long long violations = 0;
  double worst_margin = 0.0;
  bool touched = false;

  void record(double margin);
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::deque<PropertyTally> properties;  // stable references while suites add entries
  nlohmann::json observations = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();
std::uint64_t default_seed(const std::string& suite);

/// Throws InputError for an unknown suite.
SuiteReport run_suite(const std::string& suite, std::uint64_t seed);

/// z(t) = F(e^{i theta*(t)}) with F(zeta) = zeta + 0.1 zeta^2 and
/// theta*(t) = t + 0.3 sin t, truncated to degrees [-24, 24].
FourierCurve planted_oracle_curve();

/// Random univalent polynomial boundary sum_{k=1}^{n} c_k e^{ikt}, c_1 = 1,
/// with sum_{k>=2} k |c_k| = 0.5.
FourierCurve random_polynomial_curve(SampleStream& rng, int n);

}  // namespace cforge
