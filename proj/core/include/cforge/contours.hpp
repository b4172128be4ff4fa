#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "cforge/fourier_curve.hpp"

namespace cforge {

// Regression contours. Polylines are counter-clockwise, sampled uniformly by
// arclength, with the distinguished corner (when there is one) at index 0.

/// Circular sector of interior angle k pi / N and radius 1, apex at `apex`,
/// bisector along direction `rotation`.
std::vector<cplx> sector_contour(int k, int N, int count, cplx apex = {}, double rotation = 0.0);

/// Quarter arc of radius 2 centred at the origin, closed by two outward
/// semicircles of radius 1 on the segments [0, 2] and [0, 2i]. The origin is
/// a reentrant corner with external angle pi / 2.
std::vector<cplx> reentrant_contour(int count);

/// Upper unit semicircle closed by two lower semicircles of radius 1/2 on
/// [-1, 0] and [0, 1]; the origin is an inward cusp (external angle 0).
std::vector<cplx> cusp_contour(int count);

/// Ellipse with semi-axes a (real) and b (imaginary): {1: (a+b)/2, -1: (a-b)/2}.
FourierCurve ellipse_curve(double a, double b);

/// Builtin selected by JSON, e.g. {"builtin": "sector", "k": 1, "N": 3}.
/// Polyline builtins fill `samples`; `ellipse` and `circle` fill `curve`.
struct BuiltinContour {
  std::vector<cplx> samples;
  std::optional<FourierCurve> curve;
};
BuiltinContour builtin_contour(const nlohmann::json& spec, int count);

}  // namespace cforge
