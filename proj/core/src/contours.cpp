#include "cforge/contours.hpp"

#include <functional>
#include <string>

#include "cforge/error.hpp"

namespace cforge {

namespace {

struct Piece {
  double length;
  std::function<cplx(double)> at;  // argument in [0, 1]
};

Piece segment(cplx a, cplx b) {
  return {std::abs(b - a), [a, b](double s) { return a + s * (b - a); }};
}

Piece arc(cplx centre, double radius, double from, double to) {
  return {radius * std::abs(to - from),
          [=](double s) { return centre + std::polar(radius, from + s * (to - from)); }};
}

std::vector<cplx> sample_by_arclength(const std::vector<Piece>& pieces, int count) {
  if (count < 8) throw InputError("contour needs at least 8 samples");
  double total = 0.0;
  for (const auto& p : pieces) total += p.length;
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t piece = 0;
  double start = 0.0;
  for (int j = 0; j < count; ++j) {
    const double s = total * j / count;
    while (piece + 1 < pieces.size() && s >= start + pieces[piece].length) {
      start += pieces[piece].length;
      ++piece;
    }
    out.push_back(pieces[piece].at((s - start) / pieces[piece].length));
  }
  return out;
}

double number_or(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw InputError(std::string("contour: '") + key + "' must be a number");
  return j[key].get<double>();
}

int int_or(const nlohmann::json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw InputError(std::string("contour: '") + key + "' must be an integer");
  }
  return j[key].get<int>();
}

}  // namespace

std::vector<cplx> sector_contour(int k, int N, int count, cplx apex, double rotation) {
  if (N < 2 || k < 1 || k >= 2 * N) throw InputError("sector needs 0 < k pi / N < 2 pi");
  const double half = 0.5 * kPi * k / N;
  const cplx e0 = apex + std::polar(1.0, rotation - half);
  const cplx e1 = apex + std::polar(1.0, rotation + half);
  return sample_by_arclength(
      {segment(apex, e0), arc(apex, 1.0, rotation - half, rotation + half), segment(e1, apex)},
      count);
}

std::vector<cplx> reentrant_contour(int count) {
  const cplx i{0.0, 1.0};
  return sample_by_arclength({arc(1.0, 1.0, kPi, kTwoPi), arc(0.0, 2.0, 0.0, 0.5 * kPi),
                              arc(i, 1.0, 0.5 * kPi, 1.5 * kPi)},
                             count);
}

std::vector<cplx> cusp_contour(int count) {
  return sample_by_arclength(
      {arc(0.5, 0.5, kPi, kTwoPi), arc(0.0, 1.0, 0.0, kPi), arc(-0.5, 0.5, kPi, kTwoPi)}, count);
}

FourierCurve ellipse_curve(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw InputError("ellipse needs positive semi-axes");
  std::map<int, cplx> c{{1, 0.5 * (a + b)}};
  if (a != b) c[-1] = 0.5 * (a - b);
  return FourierCurve(std::move(c));
}

BuiltinContour builtin_contour(const nlohmann::json& spec, int count) {
  if (!spec.contains("builtin") || !spec["builtin"].is_string()) {
    throw InputError("contour: missing 'builtin' name");
  }
  const auto name = spec["builtin"].get<std::string>();
  BuiltinContour out;
  if (name == "sector") {
    const cplx apex{number_or(spec, "apex_re", 0.0), number_or(spec, "apex_im", 0.0)};
    out.samples = sector_contour(int_or(spec, "k", 1), int_or(spec, "N", 2), count, apex,
                                 number_or(spec, "rotation", 0.0));
  } else if (name == "reentrant") {
    out.samples = reentrant_contour(count);
  } else if (name == "cusp") {
    out.samples = cusp_contour(count);
  } else if (name == "ellipse") {
    out.curve = ellipse_curve(number_or(spec, "a", 1.0), number_or(spec, "b", 0.25));
  } else if (name == "circle") {
    out.curve = FourierCurve({{1, cplx{number_or(spec, "radius", 1.0), 0.0}}});
  } else {
    throw InputError("contour: unknown builtin '" + name + "'");
  }
  return out;
}

}  // namespace cforge
