#pragma once

#include <span>
#include <string>

#include "cforge/fourier_curve.hpp"

namespace cforge {

struct ComposedMap;

struct PolarNetOptions {
  int spokes = 16;
  int circles = 8;
  /// Points per circle; spokes use samples / 4.
  int samples = 512;
};

/// SVG 1.1 polar net: images of `circles` circles |zeta| = i / circles and of
/// `spokes` radii, then the target boundary (closed) when it is non-empty.
/// Points that leave a stage domain break the path and are reported in a comment.
std::string render_polar_net(const ComposedMap& map, const PolarNetOptions& options,
                             std::span<const cplx> target = {});

}  // namespace cforge
