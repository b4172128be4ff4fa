#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "cforge/fourier_curve.hpp"
#include "cforge/polynomial_map.hpp"

namespace cforge {

struct ComposedMap;

// Closed polylines given by their vertices (the closing edge is implied).

/// Winding number of the closed polyline about p.
int winding_number(std::span<const cplx> polyline, cplx p);

/// Area centroid of the region bounded by the polyline (shoelace formula).
cplx area_centroid(std::span<const cplx> polyline);

/// Signed area; positive for counter-clockwise orientation.
double signed_area(std::span<const cplx> polyline);

/// Largest pairwise vertex distance.
double diameter(std::span<const cplx> polyline);

/// True when two non-adjacent edges cross. Heuristic global-injectivity probe.
bool has_self_intersection(std::span<const cplx> polyline);

/// Distance from p to the closed polyline.
double distance_to_polyline(std::span<const cplx> polyline, cplx p);

/// Nearest-point distance to a Fourier curve: grid search over `grid` samples
/// followed by Newton refinement of the stationarity condition
/// Re[conj(z(t) - p) z'(t)] = 0 to 1e-10.
class CurveDistance {
 public:
  CurveDistance(const FourierCurve& curve, int grid);
  double operator()(cplx p) const;

 private:
  FourierCurve curve_;
  FourierCurve d1_;
  FourierCurve d2_;
  std::vector<cplx> samples_;
};

struct DeviationReport {
  double sup_deviation = 0.0;
  double mean_deviation = 0.0;
  double neg_residual = 0.0;
  int univalence_winding = 0;
  bool monotone_theta = true;
  std::optional<double> corner_angle_measured;
  /// Boundary samples skipped because a cf_root stage left its domain.
  int domain_failures = 0;

  nlohmann::json to_json() const;
};

struct DeviationOptions {
  int grid = 1024;
  /// Skip (and count) samples that raise DomainError instead of propagating.
  bool skip_domain_failures = false;
};

/// Distance of the image of e^{i theta_j}, j < grid, to the target. grid >= 256.
DeviationReport boundary_deviation(const ComposedMap& map, const FourierCurve& target,
                                   const DeviationOptions& options = {});
DeviationReport boundary_deviation(const ComposedMap& map, std::span<const cplx> target,
                                   const DeviationOptions& options = {});

/// Winding number of Z'(e^{i theta}) about 0, i.e. the number of zeros of Z'
/// in the disk. Requires grid >= 8 D; throws SolverError if |Z'| < 1e-12 at a node.
int univalence_check(const PolynomialMap& core, int grid);

}  // namespace cforge
