#include "cforge/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "cforge/contours.hpp"
#include "cforge/curve_io.hpp"
#include "cforge/error.hpp"
#include "cforge/geometry.hpp"
#include "cforge/reparam.hpp"

namespace cforge {

namespace {

constexpr double kSectorMargin = 1e-9;
constexpr int kShiftProbes = 2048;

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

int int_field(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_number_integer()) throw InputError(std::string("config: '") + key + "' must be an integer");
  return j[key].get<int>();
}

double number_field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_number()) throw InputError(std::string("config: '") + key + "' must be a number");
  return j[key].get<double>();
}

// Closed polyline resampled at `count` points uniform in arclength, starting at vertex 0.
std::vector<cplx> resample_by_arclength(std::span<const cplx> poly, int count) {
  const std::size_t n = poly.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + std::abs(poly[(i + 1) % n] - poly[i]);
  const double total = cum[n];
  if (!(total > 0.0)) throw InputError("degenerate boundary polyline");
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t seg = 0;
  for (int j = 0; j < count; ++j) {
    const double s = total * j / count;
    while (seg + 1 < n && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double f = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    out.push_back(poly[seg] + f * (poly[(seg + 1) % n] - poly[seg]));
  }
  return out;
}

// Samples uniform in t re-interpolated to `count` points (periodic linear).
std::vector<cplx> resample_uniform(std::span<const cplx> pts, int count) {
  const auto n = pts.size();
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    const double x = static_cast<double>(n) * j / count;
    const auto i = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(i);
    out.push_back(pts[i % n] + f * (pts[(i + 1) % n] - pts[i % n]));
  }
  return out;
}

// Continuous arg of z_j - origin along the sequence, skipping points at the origin.
struct ArgRange {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double mid() const { return 0.5 * (lo + hi); }
  double half_width() const { return 0.5 * (hi - lo); }
};

ArgRange arg_range(std::span<const cplx> pts, cplx origin, double scale) {
  ArgRange r;
  bool have = false;
  double prev = 0.0;
  for (const auto& p : pts) {
    const cplx d = p - origin;
    if (std::abs(d) <= 1e-12 * scale) continue;
    double a = std::arg(d);
    if (have) {
      while (a - prev > kPi) a -= kTwoPi;
      while (a - prev < -kPi) a += kTwoPi;
    }
    have = true;
    prev = a;
    r.lo = std::min(r.lo, a);
    r.hi = std::max(r.hi, a);
  }
  if (!have) throw InputError("boundary collapses to a point");
  return r;
}

double max_distance(std::span<const cplx> pts, cplx origin) {
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, std::abs(p - origin));
  return r;
}

FourierCurve refit(std::span<const cplx> pts, int degree, double tolerance, int stage,
                   double* deviation_out) {
  const int d = std::min(degree, (static_cast<int>(pts.size()) - 1) / 2);
  FourierCurve fit = fit_from_samples(pts, d, d);
  const double dev = fit_deviation(fit, pts) / std::max(diameter(pts), 1e-300);
  if (deviation_out != nullptr) *deviation_out = dev;
  if (dev > tolerance) {
    throw PipelineError("boundary refit deviation " + format_number(dev) +
                            " (relative to diameter) exceeds tolerance " + format_number(tolerance),
                        stage);
  }
  return fit;
}

struct CoreResult {
  PolynomialMap core;
  cplx centre;
  nlohmann::json diagnostics;
};

// Translates the curve to `centre` (default: its area centroid) when
// `recentre`, solves for the boundary correspondence and extracts the Taylor map.
CoreResult solve_core(const FourierCurve& curve, const PipelineConfig& cfg, bool recentre,
                      std::optional<cplx> given = std::nullopt) {
  const auto pts = curve.sample(cfg.sample_count);
  cplx centre{};
  if (recentre) {
    centre = given ? *given : area_centroid(pts);
    if (winding_number(pts, centre) != 1) {
      throw PipelineError("boundary does not wind once around its normalization point");
    }
  }
  const FourierCurve shifted = recentre ? affine_image(curve, 1.0, -centre) : curve;
  const ReparamSolution sol = solve_reparam(shifted, cfg.M, cfg.resolved_P());
  if (!sol.accepted) {
    throw SolverError("boundary correspondence theta(t) is not monotone", sol.rcond);
  }
  CoreResult out{taylor_coeffs(sol, cfg.resolved_D()), centre, nlohmann::json::object()};
  out.core.M = cfg.M;
  out.core.P = cfg.resolved_P();
  out.diagnostics = {{"M", cfg.M},
                     {"P", cfg.resolved_P()},
                     {"D", cfg.resolved_D()},
                     {"neg_residual", out.core.neg_residual},
                     {"rcond", sol.rcond},
                     {"residual", sol.residual},
                     {"gauge_rotation", out.core.rotation}};
  return out;
}

// Boundary samples starting at the corner parameter t0.
std::vector<cplx> samples_from_corner(const PipelineConfig& cfg, double t0) {
  const int count = cfg.sample_count;
  if (cfg.curve) {
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) out.push_back((*cfg.curve)(t0 + kTwoPi * j / count));
    return out;
  }
  const auto base = cfg.boundary_samples();
  const double x = t0 / kTwoPi * count;
  long shift = std::lround(x) % count;
  if (shift < 0) shift += count;
  std::vector<cplx> out(base.begin() + shift, base.end());
  out.insert(out.end(), base.begin(), base.begin() + shift);
  return out;
}

// Straightens the boundary with `pre` then the power stage, resamples by
// arclength from vertex 0 and refits.
FourierCurve straighten_samples(std::span<const cplx> pts, const PlaneTransform& pre,
                                const PlaneTransform& power, const PipelineConfig& cfg,
                                double* deviation) {
  std::vector<cplx> u;
  u.reserve(pts.size());
  for (const auto& p : pts) u.push_back(power.apply(pre.apply(p)));
  const auto resampled = resample_by_arclength(u, cfg.sample_count);
  return refit(resampled, cfg.refit_degree, cfg.refit_tolerance, 1, deviation);
}

ComposedMap finish_straightened(std::string name, const FourierCurve& straight,
                                const PlaneTransform& pre, const PlaneTransform& power,
                                const CFApproximant& approx, const PipelineConfig& cfg,
                                nlohmann::json provenance,
                                std::optional<cplx> centre = std::nullopt) {
  if (has_self_intersection(straight.sample(cfg.sample_count))) {
    throw PipelineError("straightened boundary self-intersects", 1);
  }
  CoreResult solved = solve_core(straight, cfg, true, centre);
  ComposedMap map;
  map.pipeline = std::move(name);
  map.pre_stages = {pre, power, PlaneTransform::affine(1.0, -solved.centre)};
  map.core = std::move(solved.core);
  map.stages = {PlaneTransform::affine(1.0, solved.centre), PlaneTransform::cf_root(approx),
                pre.inverse()};
  provenance["solver"] = std::move(solved.diagnostics);
  provenance["centroid"] = complex_json(solved.centre);
  provenance["config"] = cfg.to_json();
  map.provenance = std::move(provenance);
  map.validate();
  return map;
}

void sector_check(const ArgRange& range, double limit, const char* what) {
  if (range.half_width() > limit + kSectorMargin) {
    throw PipelineError(std::string(what) + ": boundary spans a half-angle of " +
                            format_number(range.half_width()) + " rad about the bisector, limit " +
                            format_number(limit) + "; the straightened domain would leave the "
                            "right half-plane",
                        0);
  }
}

// Scale s on a log grid around 1/radius minimising the max round trip
// |root(power(s w)) / s - w| over a boundary subsample, w = rot (z - origin).
// Points whose straightened image has Re <= 0 are skipped when skip_edges,
// otherwise they disqualify the scale.
std::pair<double, double> round_trip_scale(std::span<const cplx> pts, cplx origin, cplx rot,
                                           double radius, const PlaneTransform& power,
                                           const CFApproximant& approx, bool skip_edges) {
  double best_s = 1.0 / radius;
  double best_err = std::numeric_limits<double>::infinity();
  for (int e = -16; e <= 16; ++e) {
    const double s = std::exp2(0.25 * e) / radius;
    double err = 0.0;
    for (std::size_t j = 0; j < pts.size() && std::isfinite(err); j += 8) {
      const cplx w = rot * (pts[j] - origin);
      const cplx u = power.apply(s * w);
      if (!(u.real() > 0.0)) {
        if (!skip_edges && std::abs(u) > 0.0) err = std::numeric_limits<double>::infinity();
        continue;
      }
      err = std::max(err, std::abs(root_cf(u, approx) / s - w));
    }
    if (err < best_err) {
      best_err = err;
      best_s = s;
    }
  }
  return {best_s, best_err};
}

std::string read_first_line(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

void PipelineConfig::validate() const {
  if (curve.has_value() == !samples.empty()) {
    throw InputError("config: exactly one boundary representation is required");
  }
  if (M < 1) throw InputError("config: M must be >= 1");
  if (resolved_P() < 4 * M) throw InputError("config: P must be >= 4 M");
  if (resolved_D() < 1) throw InputError("config: D must be >= 1");
  if (n_iter < 1) throw InputError("config: n_iter must be >= 1");
  if (refit_degree < 1) throw InputError("config: refit_degree must be >= 1");
  if (!(refit_tolerance > 0.0)) throw InputError("config: refit_tolerance must be positive");
  if (sample_count < 256) throw InputError("config: sample_count must be >= 256");
  if (corner && slender) throw InputError("config: corner and slender are mutually exclusive");
  if (corner) {
    if (!std::isfinite(corner->t0)) throw InputError("config: corner t0 must be finite");
    CFApproximant{corner->k, corner->N, n_iter}.validate();
  }
  if (slender && slender->a) {
    if (!std::isfinite(slender->a->real()) || !std::isfinite(slender->a->imag())) {
      throw InputError("config: slender a must be finite");
    }
  }
  if (slender && slender->centre_shift &&
      !(*slender->centre_shift > 0.0 && std::isfinite(*slender->centre_shift))) {
    throw InputError("config: slender centre_shift must be positive");
  }
  if (compare) {
    if (compare->M < 1 || compare->P < 4 * compare->M || compare->D < 1) {
      throw InputError("config: compare needs M >= 1, P >= 4 M, D >= 1");
    }
  }
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  PipelineConfig cfg;
  cfg.M = int_field(j, "M", cfg.M);
  cfg.P = int_field(j, "P", 0);
  cfg.D = int_field(j, "D", 0);
  cfg.n_iter = int_field(j, "n_iter", cfg.n_iter);
  cfg.refit_degree = int_field(j, "refit_degree", cfg.refit_degree);
  cfg.refit_tolerance = number_field(j, "refit_tolerance", cfg.refit_tolerance);
  cfg.sample_count = int_field(j, "sample_count", cfg.sample_count);
  if (cfg.sample_count < 256) throw InputError("config: sample_count must be >= 256");

  if (!j.contains("boundary") || !j["boundary"].is_object()) {
    throw InputError("config: 'boundary' object is required");
  }
  nlohmann::json b = j["boundary"];
  if (b.contains("file")) {
    if (!b["file"].is_string()) throw InputError("config: boundary file must be a string");
    std::filesystem::path path = b["file"].get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    path = std::filesystem::absolute(path).lexically_normal();
    b["file"] = path.string();
    std::string kind = b.value("kind", "");
    if (kind.empty()) {
      if (path.extension() == ".json") {
        kind = "curve";
      } else {
        const auto first = read_first_line(path);
        kind = first.rfind("k,", 0) == 0 ? "curve" : "samples";
      }
    }
    if (kind == "curve") {
      cfg.curve = read_curve(path);
    } else if (kind == "samples") {
      cfg.samples = read_samples_csv(path);
    } else {
      throw InputError("config: boundary kind must be 'curve' or 'samples'");
    }
  } else if (b.contains("coeffs")) {
    cfg.curve = curve_from_json(b);
  } else if (b.contains("builtin")) {
    auto built = builtin_contour(b, cfg.sample_count);
    if (built.curve) {
      cfg.curve = std::move(built.curve);
    } else {
      cfg.samples = std::move(built.samples);
    }
  } else if (b.contains("samples")) {
    if (!b["samples"].is_array()) throw InputError("config: boundary samples must be an array");
    for (const auto& p : b["samples"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw InputError("config: boundary samples must be [re, im] pairs");
      }
      cfg.samples.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  } else {
    throw InputError("config: boundary needs one of 'file', 'coeffs', 'builtin', 'samples'");
  }
  cfg.boundary_spec = std::move(b);

  if (j.contains("corner") && !j["corner"].is_null()) {
    const auto& c = j["corner"];
    if (!c.is_object()) throw InputError("config: corner must be an object or null");
    cfg.corner = CornerSpec{number_field(c, "t0", 0.0), int_field(c, "k", 1), int_field(c, "N", 2)};
  }
  if (j.contains("slender") && !j["slender"].is_null()) {
    const auto& s = j["slender"];
    if (!s.is_object()) throw InputError("config: slender must be an object or null");
    SlenderSpec spec;
    if (s.contains("a_re") || s.contains("a_im")) {
      spec.a = cplx{number_field(s, "a_re", 0.0), number_field(s, "a_im", 0.0)};
    }
    if (s.contains("centre_shift")) spec.centre_shift = number_field(s, "centre_shift", 1.0);
    cfg.slender = spec;
  }
  if (j.contains("compare") && !j["compare"].is_null()) {
    const auto& c = j["compare"];
    if (!c.is_object()) throw InputError("config: compare must be an object or null");
    CompareSpec spec;
    spec.M = int_field(c, "M", cfg.M);
    spec.P = int_field(c, "P", 8 * spec.M);
    spec.D = int_field(c, "D", 4 * spec.M);
    cfg.compare = spec;
  }
  cfg.validate();
  return cfg;
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  if (!boundary_spec.is_null() && !boundary_spec.empty()) {
    j["boundary"] = boundary_spec;
  } else if (curve) {
    j["boundary"] = curve_to_json(*curve);
  } else {
    auto arr = nlohmann::json::array();
    for (const auto& p : samples) arr.push_back(complex_json(p));
    j["boundary"] = {{"samples", arr}};
  }
  j["corner"] = corner ? nlohmann::json{{"t0", corner->t0}, {"k", corner->k}, {"N", corner->N}}
                       : nlohmann::json(nullptr);
  if (slender) {
    j["slender"] = nlohmann::json::object();
    if (slender->a) {
      j["slender"]["a_re"] = slender->a->real();
      j["slender"]["a_im"] = slender->a->imag();
    }
    if (slender->centre_shift) j["slender"]["centre_shift"] = *slender->centre_shift;
  } else {
    j["slender"] = nullptr;
  }
  if (compare) j["compare"] = {{"M", compare->M}, {"P", compare->P}, {"D", compare->D}};
  j["M"] = M;
  j["P"] = resolved_P();
  j["D"] = resolved_D();
  j["n_iter"] = n_iter;
  j["refit_degree"] = refit_degree;
  j["refit_tolerance"] = refit_tolerance;
  j["sample_count"] = sample_count;
  return j;
}

std::vector<cplx> PipelineConfig::boundary_samples() const {
  if (curve) return curve->sample(sample_count);
  if (samples.empty()) throw InputError("config: no boundary");
  if (static_cast<int>(samples.size()) == sample_count) return samples;
  return resample_uniform(samples, sample_count);
}

void ComposedMap::validate() const {
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& s = stages[i];
    if (s.kind() != TransformKind::cf_root) continue;
    const auto& a = s.approximant();
    const bool matched = std::any_of(pre_stages.begin(), pre_stages.end(), [&](const auto& p) {
      return p.kind() == TransformKind::power && p.power_N() == a.N && p.power_k() == a.k;
    });
    if (!matched) {
      throw PipelineError("cf_root stage (" + std::to_string(a.k) + "," + std::to_string(a.N) +
                              ") has no matching power stage",
                          static_cast<int>(i));
    }
  }
}

ComposedMap smooth_map(const PipelineConfig& cfg) {
  cfg.validate();
  nlohmann::json provenance = nlohmann::json::object();
  std::optional<FourierCurve> fitted;
  if (!cfg.curve) {
    double dev = 0.0;
    fitted = refit(cfg.boundary_samples(), cfg.refit_degree, cfg.refit_tolerance, 0, &dev);
    provenance["fit_deviation"] = dev;
  }
  const FourierCurve& curve = cfg.curve ? *cfg.curve : *fitted;
  const auto pts = curve.sample(cfg.sample_count);
  const bool recentre = winding_number(pts, 0.0) != 1;
  CoreResult solved = solve_core(curve, cfg, recentre);

  ComposedMap map;
  map.pipeline = "smooth";
  map.core = std::move(solved.core);
  if (recentre) {
    map.pre_stages.push_back(PlaneTransform::affine(1.0, -solved.centre));
    map.stages.push_back(PlaneTransform::affine(1.0, solved.centre));
  }
  provenance["solver"] = std::move(solved.diagnostics);
  provenance["centroid"] = complex_json(solved.centre);
  provenance["config"] = cfg.to_json();
  map.provenance = std::move(provenance);
  return map;
}

ComposedMap corner_map(const PipelineConfig& cfg) {
  cfg.validate();
  if (!cfg.corner) throw InputError("corner_map needs a corner specification");
  const CornerSpec spec = *cfg.corner;
  const auto pts = samples_from_corner(cfg, spec.t0);
  const cplx apex = pts.front();
  const double radius = max_distance(pts, apex);
  const ArgRange range = arg_range(std::span(pts).subspan(1), apex, radius);
  const double limit = 0.5 * kPi * spec.k / spec.N;
  sector_check(range, limit, "corner sector violation");

  const cplx rot = std::polar(1.0, -range.mid());
  const auto power = PlaneTransform::power(spec.N, spec.k);
  const CFApproximant approx{spec.k, spec.N, cfg.n_iter};
  const auto [scale, round_trip] = round_trip_scale(pts, apex, rot, radius, power, approx, true);
  const auto pre = PlaneTransform::affine(scale * rot, -scale * rot * apex);
  double dev = 0.0;
  const FourierCurve straight = straighten_samples(pts, pre, power, cfg, &dev);

  nlohmann::json provenance{{"corner", {{"t0", spec.t0}, {"k", spec.k}, {"N", spec.N}}},
                            {"apex", complex_json(apex)},
                            {"bisector", range.mid()},
                            {"half_angle_measured", range.half_width()},
                            {"scale", scale},
                            {"round_trip_error", round_trip},
                            {"fit_deviation", dev}};
  return finish_straightened("corner", straight, pre, power, approx, cfg, std::move(provenance));
}

cplx default_slender_point(const FourierCurve& curve, int grid) {
  int best = 0;
  double best_k = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid; ++j) {
    const double k = curvature(curve, kTwoPi * j / grid);
    if (k > best_k) {
      best_k = k;
      best = j;
    }
  }
  const double t = kTwoPi * best / grid;
  const auto pts = curve.sample(std::min(grid, 1024));
  const double orient = signed_area(pts) >= 0.0 ? 1.0 : -1.0;
  const cplx tangent = derivative_curve(curve, 1)(t);
  const cplx normal = cplx{0.0, -orient} * tangent / std::abs(tangent);
  return curve(t) + 0.02 * diameter(pts) * normal;
}

ComposedMap slender_map(const PipelineConfig& cfg) {
  cfg.validate();
  if (!cfg.slender) throw InputError("slender_map needs a slender specification");
  nlohmann::json provenance = nlohmann::json::object();
  std::optional<FourierCurve> fitted;
  if (!cfg.curve) {
    double dev = 0.0;
    fitted = refit(cfg.boundary_samples(), cfg.refit_degree, cfg.refit_tolerance, 0, &dev);
    provenance["fit_deviation"] = dev;
  }
  const FourierCurve& curve = cfg.curve ? *cfg.curve : *fitted;
  const cplx a = cfg.slender->a ? *cfg.slender->a : default_slender_point(curve);
  const auto pts = cfg.boundary_samples();
  if (winding_number(pts, a) != 0) {
    throw PipelineError("slender expansion point a lies inside the domain", 0);
  }
  const double radius = max_distance(pts, a);
  const ArgRange range = arg_range(pts, a, radius);
  sector_check(range, 0.25 * kPi, "slender sector violation");

  const cplx rot = std::polar(1.0, -range.mid());
  const CFApproximant approx{1, 2, cfg.n_iter};
  const auto power = PlaneTransform::power(2, 1);
  const auto [best_s, best_err] = round_trip_scale(pts, a, rot, radius, power, approx, false);
  const cplx scale = best_s * rot;
  const auto pre = PlaneTransform::affine(scale, -scale * a);
  FourierCurve squared = [&] {
    if (cfg.curve) {
      const FourierCurve w = affine_image(curve, scale, -scale * a);
      return multiply(w, w);
    }
    double dev = 0.0;
    auto fit = straighten_samples(pts, pre, power, cfg, &dev);
    provenance["squared_fit_deviation"] = dev;
    return fit;
  }();

  provenance["a"] = complex_json(a);
  provenance["bisector"] = range.mid();
  provenance["half_angle_measured"] = range.half_width();
  provenance["scale"] = best_s;
  provenance["round_trip_error"] = best_err;
  // The disk centre maps to z0 = a + shift (c - a), c the centroid of the
  // domain. The squared domain has a narrow end near 0 (the image of the
  // boundary next to a), so z0 trades accuracy there against the far end.
  const cplx c = area_centroid(pts);
  auto normalization = [&](double shift) { return power.apply(pre.apply(a + shift * (c - a))); };
  if (cfg.slender->centre_shift) {
    provenance["centre_shift"] = *cfg.slender->centre_shift;
    return finish_straightened("slender", squared, pre, power, approx, cfg, std::move(provenance),
                               normalization(*cfg.slender->centre_shift));
  }

  // Otherwise pick the shift by the sup distance of the composed boundary
  // image to the input boundary.
  auto search = nlohmann::json::array();
  std::optional<ComposedMap> best;
  double best_shift = 1.0;
  double best_score = std::numeric_limits<double>::infinity();
  auto attempt = [&](double shift) {
    double score = std::numeric_limits<double>::infinity();
    try {
      ComposedMap map = finish_straightened("slender", squared, pre, power, approx, cfg, provenance,
                                            normalization(shift));
      score = 0.0;
      for (int j = 0; j < kShiftProbes; ++j) {
        const cplx z = evaluate_composed(map, std::polar(1.0, kTwoPi * j / kShiftProbes));
        score = std::max(score, distance_to_polyline(pts, z));
      }
      if (score < best_score) {
        best_score = score;
        best_shift = shift;
        best = std::move(map);
      }
    } catch (const PipelineError&) {
      score = std::numeric_limits<double>::infinity();
    } catch (const SolverError&) {
      score = std::numeric_limits<double>::infinity();
    }
    search.push_back({shift, std::isfinite(score) ? nlohmann::json(score) : nlohmann::json()});
  };
  for (int i = 8; i <= 14; ++i) attempt(i / 10.0);
  const double coarse = best_shift;
  for (double d : {-0.05, 0.05}) attempt(coarse + d);
  if (!best) throw PipelineError("no normalization point gave an evaluable slender map", 1);
  best->provenance["centre_shift"] = best_shift;
  best->provenance["centre_search"] = std::move(search);
  best->provenance["self_check_sup"] = best_score;
  return std::move(*best);
}

ComposedMap build_map(const PipelineConfig& cfg) {
  if (cfg.corner) return corner_map(cfg);
  if (cfg.slender) return slender_map(cfg);
  return smooth_map(cfg);
}

cplx evaluate_composed(const ComposedMap& map, cplx zeta) {
  if (!(std::abs(zeta) <= 1.0 + 1e-12)) throw InputError("evaluate_composed needs |zeta| <= 1");
  cplx v = map.core(zeta);
  for (std::size_t i = 0; i < map.stages.size(); ++i) {
    try {
      v = map.stages[i].apply(v);
    } catch (const DomainError& e) {
      throw PipelineError("stage " + std::to_string(i) + " (" +
                              to_string(map.stages[i].kind()) + "): " + e.what(),
                          static_cast<int>(i));
    }
  }
  return v;
}

CornerMeasurement measure_corner_angle(const ComposedMap& map, int samples, double fraction) {
  const auto root = std::find_if(map.stages.begin(), map.stages.end(), [](const auto& s) {
    return s.kind() == TransformKind::cf_root;
  });
  if (root == map.stages.end()) throw PipelineError("map has no cf_root stage to measure");
  const auto r = static_cast<std::size_t>(root - map.stages.begin());

  auto zeta = [samples](long j) {
    return std::polar(1.0, kTwoPi * static_cast<double>(j) / samples);
  };
  long centre = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long j = 0; j < samples; ++j) {
    cplx v = map.core(zeta(j));
    for (std::size_t i = 0; i < r; ++i) v = map.stages[i].apply(v);
    if (std::abs(v) < best) {
      best = std::abs(v);
      centre = j;
    }
  }
  cplx corner{};
  for (std::size_t i = r + 1; i < map.stages.size(); ++i) corner = map.stages[i].apply(corner);

  const long count = std::max(3L, std::lround(fraction * samples));
  CornerMeasurement out;
  auto ray = [&](long direction) {
    std::vector<cplx> pts;
    for (long o = 1; o <= count; ++o) {
      try {
        pts.push_back(evaluate_composed(map, zeta(centre + direction * o)));
      } catch (const PipelineError&) {
        ++out.domain_failures;
      }
    }
    if (pts.size() < 2) throw PipelineError("too few image samples near the corner");
    // Principal axis of the second moment about the corner: a ray through it.
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
      const cplx d = p - corner;
      sxx += d.real() * d.real();
      syy += d.imag() * d.imag();
      sxy += d.real() * d.imag();
    }
    cplx dir = std::polar(1.0, 0.5 * std::atan2(2.0 * sxy, sxx - syy));
    cplx centroid{};
    for (const auto& p : pts) centroid += p;
    if ((std::conj(dir) * (centroid / static_cast<double>(pts.size()) - corner)).real() < 0.0) dir = -dir;
    return dir;
  };
  const cplx d1 = ray(1);
  const cplx d2 = ray(-1);
  out.angle = std::abs(std::arg(d2 / d1));
  return out;
}

void write_core_csv(const std::filesystem::path& path, const PolynomialMap& core) {
  std::ostringstream out;
  out << "k,re,im\n";
  for (std::size_t k = 0; k < core.coeffs.size(); ++k) {
    out << k << ',' << format_number(core.coeffs[k].real()) << ','
        << format_number(core.coeffs[k].imag()) << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<cplx> read_core_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("k,re,im", 0) != 0) {
    throw InputError(path.string() + ": expected header k,re,im");
  }
  std::vector<cplx> coeffs;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string ks, re, im;
    if (!std::getline(row, ks, ',') || !std::getline(row, re, ',') || !std::getline(row, im)) {
      throw InputError(path.string() + ": malformed row '" + line + "'");
    }
    try {
      if (std::stoul(ks) != coeffs.size()) {
        throw InputError(path.string() + ": core indices must run 0, 1, 2, ...");
      }
      coeffs.emplace_back(std::stod(re), std::stod(im));
    } catch (const std::logic_error&) {
      throw InputError(path.string() + ": malformed row '" + line + "'");
    }
  }
  if (coeffs.empty()) throw InputError(path.string() + ": no coefficients");
  return coeffs;
}

nlohmann::json save_composed(const ComposedMap& map, const std::filesystem::path& dir,
                             const std::string& stem) {
  const auto csv = stem + ".csv";
  const auto meta = stem + ".json";
  write_core_csv(dir / csv, map.core);
  const nlohmann::json sidecar{{"neg_residual", map.core.neg_residual},
                               {"M", map.core.M},
                               {"P", map.core.P},
                               {"rotation", map.core.rotation},
                               {"gauge", "argc1=0"}};
  write_text_file(dir / meta, sidecar.dump(2) + "\n");
  auto pre = nlohmann::json::array();
  for (const auto& s : map.pre_stages) pre.push_back(s.to_json());
  auto post = nlohmann::json::array();
  for (const auto& s : map.stages) post.push_back(s.to_json());
  return {{"pipeline", map.pipeline},
          {"core_file", csv},
          {"core_meta", meta},
          {"pre_stages", pre},
          {"stages", post}};
}

ComposedMap load_composed(const nlohmann::json& manifest, const std::filesystem::path& dir) {
  if (!manifest.is_object() || !manifest.contains("core_file")) {
    throw InputError("manifest: missing core_file");
  }
  ComposedMap map;
  map.pipeline = manifest.value("pipeline", "smooth");
  map.core.coeffs = read_core_csv(dir / manifest["core_file"].get<std::string>());
  if (manifest.contains("core_meta")) {
    const auto meta =
        nlohmann::json::parse(read_text_file(dir / manifest["core_meta"].get<std::string>()));
    map.core.neg_residual = meta.value("neg_residual", 0.0);
    map.core.M = meta.value("M", 0);
    map.core.P = meta.value("P", 0);
    map.core.rotation = meta.value("rotation", 0.0);
  }
  for (const auto& s : manifest.value("pre_stages", nlohmann::json::array())) {
    map.pre_stages.push_back(PlaneTransform::from_json(s));
  }
  for (const auto& s : manifest.value("stages", nlohmann::json::array())) {
    map.stages.push_back(PlaneTransform::from_json(s));
  }
  map.validate();
  return map;
}

}  // namespace cforge
