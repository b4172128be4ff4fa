#include "cforge/render.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "cforge/error.hpp"
#include "cforge/pipelines.hpp"

namespace cforge {

namespace {

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

using Polyline = std::vector<std::optional<cplx>>;

std::string path_data(const Polyline& line, bool closed) {
  std::string d;
  bool pen_down = false;
  bool broken = false;
  for (const auto& p : line) {
    if (!p) {
      pen_down = false;
      broken = true;
      continue;
    }
    d += pen_down ? " L" : (d.empty() ? "M" : " M");
    d += fmt(p->real()) + ',' + fmt(-p->imag());
    pen_down = true;
  }
  if (closed && !broken && !d.empty()) d += " Z";
  return d;
}

}  // namespace

std::string render_polar_net(const ComposedMap& map, const PolarNetOptions& options,
                             std::span<const cplx> target) {
  if (options.spokes < 1 || options.circles < 1) {
    throw InputError("polar net needs at least one spoke and one circle");
  }
  if (options.samples < 8) throw InputError("polar net needs at least 8 samples per circle");

  int failures = 0;
  auto image = [&](cplx zeta) -> std::optional<cplx> {
    try {
      return evaluate_composed(map, zeta);
    } catch (const PipelineError&) {
      ++failures;
      return std::nullopt;
    }
  };

  std::vector<Polyline> circles;
  for (int c = 1; c <= options.circles; ++c) {
    const double r = static_cast<double>(c) / options.circles;
    Polyline line;
    for (int j = 0; j < options.samples; ++j) {
      line.push_back(image(std::polar(r, kTwoPi * j / options.samples)));
    }
    circles.push_back(std::move(line));
  }
  std::vector<Polyline> spokes;
  const int spoke_samples = std::max(2, options.samples / 4);
  for (int s = 0; s < options.spokes; ++s) {
    const double angle = kTwoPi * s / options.spokes;
    Polyline line;
    for (int j = 0; j <= spoke_samples; ++j) {
      line.push_back(image(std::polar(static_cast<double>(j) / spoke_samples, angle)));
    }
    spokes.push_back(std::move(line));
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto extend = [&](cplx p) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, -p.imag());
    ymax = std::max(ymax, -p.imag());
  };
  for (const auto* group : {&circles, &spokes}) {
    for (const auto& line : *group) {
      for (const auto& p : line) {
        if (p) extend(*p);
      }
    }
  }
  for (const auto& p : target) extend(p);
  if (!(xmax >= xmin)) {
    xmin = ymin = -1.0;
    xmax = ymax = 1.0;
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double margin = 0.05 * span;
  const double width = xmax - xmin + 2 * margin;
  const double height = ymax - ymin + 2 * margin;
  const double stroke = 0.002 * span;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << fmt(xmin - margin)
      << ' ' << fmt(ymin - margin) << ' ' << fmt(width) << ' ' << fmt(height) << "\">\n";
  if (failures > 0) {
    out << "<!-- warning: " << failures
        << " samples left a stage domain; affected paths are truncated -->\n";
  }
  out << "<g fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"" << fmt(stroke) << "\">\n";
  for (const auto& line : circles) out << "<path d=\"" << path_data(line, true) << "\"/>\n";
  for (const auto& line : spokes) out << "<path d=\"" << path_data(line, false) << "\"/>\n";
  out << "</g>\n";
  if (!target.empty()) {
    Polyline boundary(target.begin(), target.end());
    out << "<path class=\"boundary\" fill=\"none\" stroke=\"#b22222\" stroke-width=\""
        << fmt(2 * stroke) << "\" d=\"" << path_data(boundary, true) << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cforge
