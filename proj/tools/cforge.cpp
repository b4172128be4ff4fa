// cforge command-line front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 fit failure,
// 4 solver failure, 5 pipeline precondition failure, 8 internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cforge/contours.hpp"
#include "cforge/curve_io.hpp"
#include "cforge/error.hpp"
#include "cforge/geometry.hpp"
#include "cforge/pipelines.hpp"
#include "cforge/render.hpp"
#include "cforge/verify.hpp"

#ifndef CFORGE_VERSION
#define CFORGE_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cforge;

namespace {

constexpr int kInternalExit = 8;

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::domain:
      return static_cast<int>(ErrorKind::pipeline);
    case ErrorKind::quadrature:
      return static_cast<int>(ErrorKind::solver);
    case ErrorKind::internal:
      return kInternalExit;
    default:
      return static_cast<int>(e.kind());
  }
}

json error_json(const Error& e) {
  json j{{"kind", to_string(e.kind())}, {"message", e.what()}, {"exit_code", exit_code(e)}};
  if (const auto* p = dynamic_cast<const PipelineError*>(&e); p != nullptr && p->stage() >= 0) {
    j["stage"] = p->stage();
  }
  if (const auto* s = dynamic_cast<const SolverError*>(&e); s != nullptr) {
    j["condition"] = s->condition();
  }
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

bool is_manifest(const json& j) {
  return j.is_object() && j.value("tool", "") == "cforge" && j.contains("config");
}

// A map manifest and its directory, for render/report.
struct LoadedRun {
  json manifest;
  fs::path dir;
  PipelineConfig cfg;
  ComposedMap map;
};

LoadedRun load_run(const fs::path& manifest_path) {
  LoadedRun run;
  run.manifest = read_json_file(manifest_path);
  if (!is_manifest(run.manifest) || !run.manifest.contains("map")) {
    throw InputError(manifest_path.string() + ": not a cforge map manifest");
  }
  run.dir = manifest_path.parent_path();
  run.cfg = PipelineConfig::from_json(run.manifest["config"], run.dir);
  run.map = load_composed(run.manifest["map"], run.dir);
  return run;
}

bool has_cf_root(const ComposedMap& map) {
  for (const auto& s : map.stages) {
    if (s.kind() == TransformKind::cf_root) return true;
  }
  return false;
}

DeviationReport deviation_for(const ComposedMap& map, const PipelineConfig& cfg, int grid) {
  DeviationOptions options;
  options.grid = grid;
  options.skip_domain_failures = has_cf_root(map);
  DeviationReport report = cfg.curve ? boundary_deviation(map, *cfg.curve, options)
                                     : boundary_deviation(map, cfg.boundary_samples(), options);
  if (map.pipeline == "corner") {
    const auto measured = measure_corner_angle(map);
    report.corner_angle_measured = measured.angle;
  }
  return report;
}

std::string render_for(const ComposedMap& map, const PipelineConfig& cfg,
                       const PolarNetOptions& options) {
  const auto target = cfg.boundary_samples();
  return render_polar_net(map, options, target);
}

// ---- fit -------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string out = ".";
  int m = 1;
  int n = 1;
};

int cmd_fit(const FitArgs& a) {
  const auto samples = read_samples_csv(fs::path(a.input));
  if (a.m < 0 || a.n < 0) throw InputError("fit: degrees must be non-negative");
  const FourierCurve curve = fit_from_samples(samples, a.m, a.n);
  const fs::path out = a.out;
  ensure_dir(out);
  write_curve_csv(out / "curve.csv", curve);
  const json report{{"tool", "cforge"},
                    {"version", CFORGE_VERSION},
                    {"input", fs::absolute(a.input).lexically_normal().string()},
                    {"m", a.m},
                    {"n", a.n},
                    {"samples", samples.size()},
                    {"fit_deviation", fit_deviation(curve, samples)},
                    {"outputs", {"curve.csv", "fit.json"}}};
  write_json_file(out / "fit.json", report);
  std::cout << report.dump(2) << "\n";
  return 0;
}

// ---- map -------------------------------------------------------------------

struct MapArgs {
  std::string config;
  std::string out = ".";
  bool render = false;
  int grid = 1024;
  PolarNetOptions net;
};

int cmd_map(const MapArgs& a) {
  const fs::path config_path = a.config;
  const json raw = read_json_file(config_path);
  const json& cfg_json = is_manifest(raw) ? raw["config"] : raw;
  const PipelineConfig cfg = PipelineConfig::from_json(cfg_json, config_path.parent_path());
  const fs::path out = a.out;
  ensure_dir(out);

  json manifest{{"tool", "cforge"}, {"version", CFORGE_VERSION}, {"config", cfg.to_json()}};
  json timings = json::object();
  std::vector<std::string> outputs;
  try {
    auto t0 = std::chrono::steady_clock::now();
    const ComposedMap map = build_map(cfg);
    timings["build"] = seconds_since(t0);
    manifest["map"] = save_composed(map, out, "core");
    outputs.push_back("core.csv");
    outputs.push_back("core.json");

    t0 = std::chrono::steady_clock::now();
    const DeviationReport dev = deviation_for(map, cfg, a.grid);
    timings["deviation"] = seconds_since(t0);
    json diagnostics{{"deviation", dev.to_json()}, {"provenance", map.provenance}};
    if (cfg.corner) diagnostics["corner_angle_target"] = kPi * cfg.corner->k / cfg.corner->N;

    if (cfg.compare) {
      PipelineConfig plain = cfg;
      plain.corner.reset();
      plain.slender.reset();
      plain.compare.reset();
      plain.M = cfg.compare->M;
      plain.P = cfg.compare->P;
      plain.D = cfg.compare->D;
      t0 = std::chrono::steady_clock::now();
      const ComposedMap reference = smooth_map(plain);
      const DeviationReport ref_dev = deviation_for(reference, plain, a.grid);
      timings["compare"] = seconds_since(t0);
      manifest["compare"] = {{"map", save_composed(reference, out, "compare")},
                             {"M", plain.M},
                             {"P", plain.P},
                             {"D", plain.D},
                             {"deviation", ref_dev.to_json()},
                             {"pipeline_sup_smaller", dev.sup_deviation < ref_dev.sup_deviation}};
      outputs.push_back("compare.csv");
      outputs.push_back("compare.json");
    }

    if (a.render) {
      t0 = std::chrono::steady_clock::now();
      write_text_file(out / "map.svg", render_for(map, cfg, a.net));
      timings["render"] = seconds_since(t0);
      outputs.push_back("map.svg");
    }
    diagnostics["timings"] = timings;
    manifest["diagnostics"] = std::move(diagnostics);
    outputs.push_back("manifest.json");
    manifest["outputs"] = outputs;
    manifest["status"] = "ok";
    write_json_file(out / "manifest.json", manifest);
    std::cout << (out / "manifest.json").string() << "\n";
  } catch (const Error& e) {
    manifest["status"] = "failed";
    manifest["error"] = error_json(e);
    manifest["outputs"] = json::array({"manifest.json"});
    write_json_file(out / "manifest.json", manifest);
    throw;
  }
  return 0;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<std::string> suites;
  if (a.suite == "all") {
    suites = suite_names();
  } else {
    suites.push_back(a.suite);
  }
  bool all_passed = true;
  json reports = json::array();
  for (const auto& name : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport report = run_suite(name, a.seed ? *a.seed : default_seed(name));
    json j = report.to_json();
    j["seconds"] = seconds_since(t0);
    all_passed = all_passed && report.passed();
    reports.push_back(std::move(j));
  }
  const json result = suites.size() == 1 ? reports[0] : json{{"suites", reports}};
  if (!a.out.empty()) {
    ensure_dir(a.out);
    write_json_file(fs::path(a.out) / ("verify_" + a.suite + ".json"), result);
  }
  std::cout << result.dump(2) << "\n";
  return all_passed ? 0 : static_cast<int>(ErrorKind::verification);
}

// ---- render / report -------------------------------------------------------

struct RenderArgs {
  std::string config;
  std::string out;
  PolarNetOptions net;
};

int cmd_render(const RenderArgs& a) {
  const LoadedRun run = load_run(a.config);
  const fs::path out = a.out.empty() ? run.dir : fs::path(a.out);
  ensure_dir(out);
  write_text_file(out / "map.svg", render_for(run.map, run.cfg, a.net));
  std::cout << (out / "map.svg").string() << "\n";
  return 0;
}

struct ReportArgs {
  std::string config;
  std::string out;
  int grid = 1024;
};

int cmd_report(const ReportArgs& a) {
  const LoadedRun run = load_run(a.config);
  const DeviationReport dev = deviation_for(run.map, run.cfg, a.grid);
  json report{{"pipeline", run.map.pipeline},
              {"grid", a.grid},
              {"degree", run.map.core.degree()},
              {"deviation", dev.to_json()}};
  if (run.cfg.corner) report["corner_angle_target"] = kPi * run.cfg.corner->k / run.cfg.corner->N;
  if (!a.out.empty()) {
    ensure_dir(a.out);
    write_json_file(fs::path(a.out) / "report.json", report);
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

void add_net_options(CLI::App* cmd, PolarNetOptions& net) {
  cmd->add_option("--spokes", net.spokes, "Radii drawn in the polar net")->check(CLI::PositiveNumber);
  cmd->add_option("--circles", net.circles, "Circles drawn in the polar net")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--samples", net.samples, "Points per circle")->check(CLI::Range(8, 1 << 20));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate conformal maps of the unit disk onto plane domains"};
  app.set_version_flag("--version", std::string(CFORGE_VERSION));
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a Fourier curve to boundary samples");
  fit_cmd->add_option("--input,input", fit.input, "Samples CSV (t,re,im or re,im)")->required();
  fit_cmd->add_option("-m,--m", fit.m, "Max negative degree");
  fit_cmd->add_option("-n,--n", fit.n, "Max positive degree");
  fit_cmd->add_option("--out", fit.out, "Output directory");

  MapArgs map;
  auto* map_cmd = app.add_subcommand("map", "Build a composed map from a config or manifest");
  map_cmd->add_option("--config", map.config, "Pipeline config JSON or a previous manifest")
      ->required();
  map_cmd->add_option("--out", map.out, "Output directory");
  map_cmd->add_flag("--render", map.render, "Also write the polar net SVG");
  map_cmd->add_option("--grid", map.grid, "Boundary samples for the deviation report")
      ->check(CLI::Range(256, 1 << 22));
  add_net_options(map_cmd, map.net);

  VerifyArgs verify;
  std::uint64_t seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run a property suite");
  verify_cmd->add_option("suite", verify.suite, "Suite name or 'all'")->required();
  auto* seed_opt = verify_cmd->add_option("--seed", seed, "Override the pinned seed");
  verify_cmd->add_option("--out", verify.out, "Directory for the JSON report");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render the polar net of a map manifest");
  render_cmd->add_option("--config", render.config, "Map manifest")->required();
  render_cmd->add_option("--out", render.out, "Output directory (default: manifest's)");
  add_net_options(render_cmd, render.net);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Recompute diagnostics of a map manifest");
  report_cmd->add_option("--config", report.config, "Map manifest")->required();
  report_cmd->add_option("--out", report.out, "Directory for report.json");
  report_cmd->add_option("--grid", report.grid, "Boundary samples")->check(CLI::Range(256, 1 << 22));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::input);
  }

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*map_cmd) return cmd_map(map);
    if (*verify_cmd) {
      if (*seed_opt) verify.seed = seed;
      return cmd_verify(verify);
    }
    if (*render_cmd) return cmd_render(render);
    if (*report_cmd) return cmd_report(report);
  } catch (const Error& e) {
    std::cerr << "cforge: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const json::exception& e) {
    std::cerr << "cforge: input: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::input);
  } catch (const std::exception& e) {
    std::cerr << "cforge: internal: " << e.what() << "\n";
    return kInternalExit;
  }
  return kInternalExit;
}
