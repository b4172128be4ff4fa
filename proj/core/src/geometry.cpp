#include "cforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cforge/error.hpp"
#include "cforge/pipelines.hpp"

namespace cforge {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(cplx a, cplx b, cplx p) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

int winding_number(std::span<const cplx> polyline, cplx p) {
  double total = 0.0;
  const std::size_t n = polyline.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = polyline[i] - p;
    const cplx b = polyline[(i + 1) % n] - p;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

double signed_area(std::span<const cplx> polyline) {
  double a = 0.0;
  const std::size_t n = polyline.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(polyline[i], polyline[(i + 1) % n]);
  return 0.5 * a;
}

cplx area_centroid(std::span<const cplx> polyline) {
  const std::size_t n = polyline.size();
  // Shift to the first vertex for conditioning.
  const cplx o = polyline[0];
  double a = 0.0;
  cplx c{};
  for (std::size_t i = 0; i < n; ++i) {
    const cplx p = polyline[i] - o;
    const cplx q = polyline[(i + 1) % n] - o;
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  if (std::abs(a) < 1e-300) throw InputError("centroid of a degenerate polyline");
  return o + c / (3.0 * a);
}

double diameter(std::span<const cplx> polyline) {
  double best = 0.0;
  for (std::size_t i = 0; i < polyline.size(); ++i) {
    for (std::size_t j = i + 1; j < polyline.size(); ++j) {
      best = std::max(best, std::abs(polyline[i] - polyline[j]));
    }
  }
  return best;
}

bool has_self_intersection(std::span<const cplx> polyline) {
  const std::size_t n = polyline.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = polyline[i];
    const cplx b = polyline[(i + 1) % n];
    const double xmin = std::min(a.real(), b.real());
    const double xmax = std::max(a.real(), b.real());
    const double ymin = std::min(a.imag(), b.imag());
    const double ymax = std::max(a.imag(), b.imag());
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      const cplx c = polyline[j];
      const cplx d = polyline[(j + 1) % n];
      if (std::max(c.real(), d.real()) < xmin || std::min(c.real(), d.real()) > xmax ||
          std::max(c.imag(), d.imag()) < ymin || std::min(c.imag(), d.imag()) > ymax) {
        continue;
      }
      if (segments_cross(a, b, c, d)) return true;
    }
  }
  return false;
}

double distance_to_polyline(std::span<const cplx> polyline, cplx p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = polyline.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(polyline[i], polyline[(i + 1) % n], p));
  }
  return best;
}

CurveDistance::CurveDistance(const FourierCurve& curve, int grid)
    : curve_(curve),
      d1_(derivative_curve(curve, 1)),
      d2_(derivative_curve(curve, 2)),
      samples_(curve.sample(grid)) {}

double CurveDistance::operator()(cplx p) const {
  const auto count = samples_.size();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) {
    const double d = std::norm(samples_[j] - p);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  const double h = kTwoPi / static_cast<double>(count);
  double t = h * static_cast<double>(best);
  double result = std::sqrt(best_d);
  for (int iter = 0; iter < 8; ++iter) {
    const cplx diff = curve_(t) - p;
    const cplx zp = d1_(t);
    const double g = (std::conj(diff) * zp).real();
    if (std::abs(g) <= 1e-10 * std::max(1.0, std::abs(zp))) break;
    const double gp = std::norm(zp) + (std::conj(diff) * d2_(t)).real();
    if (gp <= 0.0) break;
    const double step = std::clamp(-g / gp, -h, h);
    t += step;
    result = std::min(result, std::abs(curve_(t) - p));
  }
  return std::min(result, std::abs(curve_(t) - p));
}

nlohmann::json DeviationReport::to_json() const {
  nlohmann::json j{{"sup_deviation", sup_deviation},
                   {"mean_deviation", mean_deviation},
                   {"neg_residual", neg_residual},
                   {"univalence_winding", univalence_winding},
                   {"monotone_theta", monotone_theta},
                   {"domain_failures", domain_failures}};
  j["corner_angle_measured"] =
      corner_angle_measured ? nlohmann::json(*corner_angle_measured) : nlohmann::json(nullptr);
  return j;
}

namespace {

template <typename Distance>
DeviationReport deviation_impl(const ComposedMap& map, const Distance& distance,
                               const DeviationOptions& options) {
  if (options.grid < 256) throw InputError("boundary_deviation needs grid >= 256");
  DeviationReport report;
  report.neg_residual = map.core.neg_residual;
  report.monotone_theta = true;
  report.univalence_winding =
      univalence_check(map.core, std::max(8 * map.core.degree(), 256));

  double sup = 0.0;
  double sum = 0.0;
  int used = 0;
  for (int j = 0; j < options.grid; ++j) {
    const cplx zeta = std::polar(1.0, kTwoPi * j / options.grid);
    cplx image;
    try {
      image = evaluate_composed(map, zeta);
    } catch (const PipelineError& e) {
      if (!options.skip_domain_failures) throw;
      ++report.domain_failures;
      continue;
    }
    const double d = distance(image);
    sup = std::max(sup, d);
    sum += d;
    ++used;
  }
  report.sup_deviation = sup;
  report.mean_deviation = used > 0 ? sum / used : 0.0;
  return report;
}

}  // namespace

DeviationReport boundary_deviation(const ComposedMap& map, const FourierCurve& target,
                                   const DeviationOptions& options) {
  const CurveDistance distance(target, 16 * std::max(options.grid, 256));
  return deviation_impl(map, distance, options);
}

DeviationReport boundary_deviation(const ComposedMap& map, std::span<const cplx> target,
                                   const DeviationOptions& options) {
  return deviation_impl(map, [&](cplx p) { return distance_to_polyline(target, p); }, options);
}

int univalence_check(const PolynomialMap& core, int grid) {
  if (grid < 8 * core.degree()) throw InputError("univalence_check needs grid >= 8 D");
  double total = 0.0;
  cplx prev = core.derivative(cplx{1.0, 0.0});
  const cplx first = prev;
  for (int j = 1; j <= grid; ++j) {
    const cplx cur = j == grid ? first : core.derivative(std::polar(1.0, kTwoPi * j / grid));
    if (std::abs(cur) < 1e-12) {
      throw SolverError("Z' vanishes on the unit circle; univalence check inconclusive");
    }
    total += std::arg(cur / prev);
    prev = cur;
  }
  if (std::abs(first) < 1e-12) {
    throw SolverError("Z' vanishes on the unit circle; univalence check inconclusive");
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace cforge
