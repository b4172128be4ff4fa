#include "cforge/transforms.hpp"

#include <cmath>

#include "cforge/error.hpp"

namespace cforge {

namespace {

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2 || !j[key][0].is_number() ||
      !j[key][1].is_number()) {
    throw InputError(std::string("transform: expected [re, im] for '") + key + "'");
  }
  return {j[key][0].get<double>(), j[key][1].get<double>()};
}

int int_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw InputError(std::string("transform: expected integer '") + key + "'");
  }
  return j[key].get<int>();
}

}  // namespace

const char* to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::affine: return "affine";
    case TransformKind::moebius: return "moebius";
    case TransformKind::power: return "power";
    case TransformKind::cf_root: return "cf_root";
  }
  return "unknown";
}

PlaneTransform PlaneTransform::affine(cplx a, cplx b) {
  if (std::abs(a) < 1e-300) throw InputError("affine transform with zero scale");
  PlaneTransform t;
  t.kind_ = TransformKind::affine;
  t.a_ = a;
  t.b_ = b;
  return t;
}

PlaneTransform PlaneTransform::moebius(cplx a, cplx b, cplx c, cplx d) {
  if (std::abs(a * d - b * c) <= 1e-12) throw InputError("Moebius transform with |ad - bc| <= 1e-12");
  PlaneTransform t;
  t.kind_ = TransformKind::moebius;
  t.a_ = a;
  t.b_ = b;
  t.c_ = c;
  t.d_ = d;
  return t;
}

PlaneTransform PlaneTransform::power(int N, int k) {
  if (N < 1 || k < 1) throw InputError("power transform needs positive N and k");
  PlaneTransform t;
  t.kind_ = TransformKind::power;
  t.N_ = N;
  t.k_ = k;
  return t;
}

PlaneTransform PlaneTransform::cf_root(const CFApproximant& approx) {
  approx.validate();
  PlaneTransform t;
  t.kind_ = TransformKind::cf_root;
  t.approx_ = approx;
  t.N_ = approx.N;
  t.k_ = approx.k;
  return t;
}

cplx PlaneTransform::apply(cplx z) const {
  switch (kind_) {
    case TransformKind::affine: return a_ * z + b_;
    case TransformKind::moebius: return (a_ * z + b_) / (c_ * z + d_);
    case TransformKind::power:
      if (z == cplx{}) return {};
      return std::polar(std::pow(std::abs(z), static_cast<double>(N_) / k_),
                        std::arg(z) * static_cast<double>(N_) / k_);
    case TransformKind::cf_root: return root_cf(z, approx_);
  }
  throw Error(ErrorKind::internal, "unknown transform kind");
}

PlaneTransform PlaneTransform::inverse(int n_iter) const {
  switch (kind_) {
    case TransformKind::affine: return affine(1.0 / a_, -b_ / a_);
    case TransformKind::moebius: return moebius(d_, -b_, -c_, a_);
    case TransformKind::power: return cf_root(CFApproximant{k_, N_, n_iter});
    case TransformKind::cf_root: return power(approx_.N, approx_.k);
  }
  throw Error(ErrorKind::internal, "unknown transform kind");
}

nlohmann::json PlaneTransform::to_json() const {
  nlohmann::json j{{"kind", to_string(kind_)}};
  switch (kind_) {
    case TransformKind::affine:
      j["a"] = complex_json(a_);
      j["b"] = complex_json(b_);
      break;
    case TransformKind::moebius:
      j["a"] = complex_json(a_);
      j["b"] = complex_json(b_);
      j["c"] = complex_json(c_);
      j["d"] = complex_json(d_);
      break;
    case TransformKind::power:
      j["N"] = N_;
      j["k"] = k_;
      break;
    case TransformKind::cf_root:
      j["k"] = approx_.k;
      j["N"] = approx_.N;
      j["n_iter"] = approx_.n_iter;
      break;
  }
  return j;
}

PlaneTransform PlaneTransform::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw InputError("transform: missing 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "affine") return affine(complex_from(j, "a"), complex_from(j, "b"));
  if (kind == "moebius") {
    return moebius(complex_from(j, "a"), complex_from(j, "b"), complex_from(j, "c"),
                   complex_from(j, "d"));
  }
  if (kind == "power") return power(int_from(j, "N"), int_from(j, "k"));
  if (kind == "cf_root") {
    return cf_root(CFApproximant{int_from(j, "k"), int_from(j, "N"), int_from(j, "n_iter")});
  }
  throw InputError("transform: unknown kind '" + kind + "'");
}

}  // namespace cforge
