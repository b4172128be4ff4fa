#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cforge/fourier_curve.hpp"
#include "cforge/polynomial_map.hpp"
#include "cforge/transforms.hpp"

namespace cforge {

/// Declared corner at parameter t0 with interior angle k pi / N.
struct CornerSpec {
  double t0 = 0.0;
  int k = 1;
  int N = 2;
};

/// Expansion point for the squaring trick; chosen automatically when empty.
/// The disk centre maps to a + centre_shift (c - a), c the domain centroid;
/// when centre_shift is empty it is searched against the input boundary.
struct SlenderSpec {
  std::optional<cplx> a;
  std::optional<double> centre_shift;
};

/// Reference resolutions for a second, pure polynomial map of the same boundary.
struct CompareSpec {
  int M = 0;
  int P = 0;
  int D = 0;
};

struct PipelineConfig {
  /// Exactly one of curve / samples is set after loading.
  std::optional<FourierCurve> curve;
  std::vector<cplx> samples;
  /// The boundary object as given (file paths made absolute), for snapshots.
  nlohmann::json boundary_spec;

  std::optional<CornerSpec> corner;
  std::optional<SlenderSpec> slender;
  std::optional<CompareSpec> compare;

  int M = 64;
  int P = 0;  // 0 -> 8 M
  int D = 0;  // 0 -> 4 M
  int n_iter = 8;
  int refit_degree = 24;
  /// Max refit deviation relative to the diameter of the straightened boundary.
  double refit_tolerance = 2e-2;
  int sample_count = 4096;

  int resolved_P() const noexcept { return P > 0 ? P : 8 * M; }
  int resolved_D() const noexcept { return D > 0 ? D : 4 * M; }

  /// Throws InputError for inconsistent settings.
  void validate() const;

  /// File references in `boundary` resolve against base_dir.
  static PipelineConfig from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;

  /// The boundary as a point sequence of length sample_count (uniform in t).
  std::vector<cplx> boundary_samples() const;
};

/// unit disk -> core -> stages, in order. pre_stages record what was applied
/// to the boundary before solving; they are provenance, not evaluated.
struct ComposedMap {
  std::string pipeline = "smooth";
  std::vector<PlaneTransform> pre_stages;
  PolynomialMap core;
  std::vector<PlaneTransform> stages;
  nlohmann::json provenance = nlohmann::json::object();

  /// Checks that each cf_root stage (k, N) inverts a recorded power stage (N, k).
  void validate() const;
};

ComposedMap smooth_map(const PipelineConfig& cfg);
ComposedMap corner_map(const PipelineConfig& cfg);
ComposedMap slender_map(const PipelineConfig& cfg);
/// Dispatches on cfg.corner / cfg.slender.
ComposedMap build_map(const PipelineConfig& cfg);

/// Horner on the core, then each stage. A stage leaving its domain raises
/// PipelineError carrying the stage index.
cplx evaluate_composed(const ComposedMap& map, cplx zeta);

struct CornerMeasurement {
  double angle = 0.0;
  /// Boundary samples that could not be evaluated.
  int domain_failures = 0;
};

/// Image corner angle from least-squares rays through the corner image, fitted to `fraction` of
/// the image boundary samples on each side of the corner image. The corner
/// preimage is the sample where the input of the first cf_root stage is smallest.
CornerMeasurement measure_corner_angle(const ComposedMap& map, int samples = 4096,
                                       double fraction = 0.05);

/// Default expansion point: z(t*) + 0.02 diam * outward normal at the
/// max-curvature parameter t*.
cplx default_slender_point(const FourierCurve& curve, int grid = 4096);

// Persistence: the core goes to `<stem>.csv` (k,re,im) with a sidecar
// `<stem>.json`; the returned object lists the stages and references the CSV.
nlohmann::json save_composed(const ComposedMap& map, const std::filesystem::path& dir,
                             const std::string& stem = "core");
ComposedMap load_composed(const nlohmann::json& manifest, const std::filesystem::path& dir);

void write_core_csv(const std::filesystem::path& path, const PolynomialMap& core);
std::vector<cplx> read_core_csv(const std::filesystem::path& path);

}  // namespace cforge
