#include "cforge/root_cf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cforge/error.hpp"

namespace cforge {

namespace {

void require_right_half_plane(cplx z) {
  if (!(z.real() > 0.0)) {
    throw DomainError("continued-fraction root needs Re z > 0, got " + std::to_string(z.real()) +
                      (z.imag() < 0 ? "" : "+") + std::to_string(z.imag()) + "i");
  }
}

cplx ipow(cplx x, int e) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

using Poly = std::vector<cplx>;

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), cplx{});
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly pow(const Poly& a, int e) {
  Poly r{cplx{1.0, 0.0}};
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

double max_abs(const Poly& p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

// Drops high-order coefficients below 1e-13 relative magnitude.
void trim(Poly& p) {
  const double m = max_abs(p);
  while (p.size() > 1 && std::abs(p.back()) <= 1e-13 * m) p.pop_back();
}

std::size_t degree_of(const Poly& p) { return p.size() - 1; }

}  // namespace

void CFApproximant::validate() const {
  if (N < 2) throw InputError("CF approximant needs N >= 2");
  if (k < 1 || k > N - 1) throw InputError("CF approximant needs 1 <= k <= N-1");
  if (n_iter < 1) throw InputError("CF approximant needs n_iter >= 1");
}

cplx sqrt_cf(cplx z, int n) {
  if (n < 1) throw InputError("sqrt_cf needs n >= 1");
  require_right_half_plane(z);
  cplx f = 1.0 + (z - 1.0) / (1.0 + z);
  for (int i = 2; i <= n; ++i) f = 1.0 + (z - 1.0) / (1.0 + f);
  return f;
}

cplx root_cf(cplx z, const CFApproximant& approx) {
  approx.validate();
  require_right_half_plane(z);
  const int N = approx.N;
  const int half = N / 2;
  cplx r = 1.0 + (z - 1.0) / (z + 1.0);
  for (int it = 2; it <= approx.n_iter; ++it) {
    if (std::abs(r) < 1e-13) {
      throw Error(ErrorKind::internal, "continued-fraction root: iterate collapsed to 0");
    }
    cplx sum{1.0, 0.0};
    cplx power{1.0, 0.0};
    for (int j = 1; j <= half; ++j) {
      power *= r;
      sum += power;
    }
    // r^{N-j} for j = N-1 down to half+1 is r^1 .. r^{N-half-1}
    power = {1.0, 0.0};
    for (int j = N - 1; j > half; --j) {
      power *= r;
      sum += z / power;
    }
    r = 1.0 + (z - 1.0) / sum;
  }
  if (approx.k <= half) return ipow(r, approx.k);
  return z / ipow(r, N - approx.k);
}

cplx principal_root(cplx z, int k, int N) {
  return std::polar(std::pow(std::abs(z), static_cast<double>(k) / N),
                    std::arg(z) * static_cast<double>(k) / N);
}

double rate_estimate(cplx z, const CFApproximant& approx) {
  approx.validate();
  require_right_half_plane(z);
  if (z == cplx{1.0, 0.0}) return 0.0;
  const int N = approx.N;
  const cplx w = principal_root(z, 1, N);
  const cplx wh = principal_root(z, N / 2, N);
  return std::abs((z - static_cast<double>(N) * (w - 1.0) * wh - 1.0) / (z - 1.0));
}

cplx RationalMap::operator()(cplx z) const {
  auto horner = [z](const std::vector<cplx>& p) {
    cplx acc{};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  return horner(num) / horner(den);
}

RationalMap cf_rational_form(const CFApproximant& approx) {
  approx.validate();
  if (approx.n_iter > 32) throw InputError("rational form limited to n_iter <= 32");
  if (approx.N > 12) throw InputError("rational form limited to N <= 12");
  const int N = approx.N;
  const int half = N / 2;
  const Poly z{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
  const Poly zm1{cplx{-1.0, 0.0}, cplx{1.0, 0.0}};

  // r_1 = 2z / (z + 1)
  Poly p{cplx{0.0, 0.0}, cplx{2.0, 0.0}};
  Poly q{cplx{1.0, 0.0}, cplx{1.0, 0.0}};

  auto guard = [](const Poly& a) {
    if (degree_of(a) > static_cast<std::size_t>(kMaxRationalDegree)) {
      throw InputError("rational form degree exceeds " + std::to_string(kMaxRationalDegree));
    }
  };

  for (int it = 2; it <= approx.n_iter; ++it) {
    // Predict the degree before multiplying out.
    const std::size_t dp = degree_of(p);
    const std::size_t dq = degree_of(q);
    const std::size_t predicted =
        1 + std::max(dp, dq) * static_cast<std::size_t>(N - 1);
    if (predicted > static_cast<std::size_t>(kMaxRationalDegree)) {
      throw InputError("rational form degree exceeds " + std::to_string(kMaxRationalDegree));
    }
    // sum s_j over the common denominator q^half p^{N-1-half}
    Poly numS{cplx{}};
    for (int j = 0; j <= half; ++j) {
      numS = add(numS, mul(mul(pow(p, j), pow(q, half - j)), pow(p, N - 1 - half)));
    }
    for (int j = half + 1; j <= N - 1; ++j) {
      numS = add(numS, mul(z, mul(pow(q, N - j + half), pow(p, j - 1 - half))));
    }
    const Poly denS = mul(pow(q, half), pow(p, N - 1 - half));
    // r_n = 1 + (z - 1) denS / numS
    Poly next_p = add(numS, mul(zm1, denS));
    Poly next_q = numS;
    const double s = max_abs(next_q);
    for (auto& c : next_p) c /= s;
    for (auto& c : next_q) c /= s;
    trim(next_p);
    trim(next_q);
    guard(next_p);
    guard(next_q);
    p = std::move(next_p);
    q = std::move(next_q);
  }

  RationalMap out;
  if (approx.k <= half) {
    out.num = pow(p, approx.k);
    out.den = pow(q, approx.k);
  } else {
    out.num = mul(z, pow(q, N - approx.k));
    out.den = pow(p, N - approx.k);
  }
  // Normalise by the lowest-order significant denominator coefficient.
  const double big = max_abs(out.den);
  cplx lead{1.0, 0.0};
  for (const auto& c : out.den) {
    if (std::abs(c) > 1e-13 * big) {
      lead = c;
      break;
    }
  }
  for (auto& c : out.num) c /= lead;
  for (auto& c : out.den) c /= lead;
  trim(out.num);
  trim(out.den);
  guard(out.num);
  guard(out.den);
  return out;
}

namespace {

nlohmann::json poly_json(const std::vector<cplx>& p) {
  auto arr = nlohmann::json::array();
  for (const auto& c : p) arr.push_back({c.real(), c.imag()});
  return arr;
}

std::vector<cplx> poly_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
    throw InputError(std::string("rational map: '") + key + "' must be a non-empty array");
  }
  std::vector<cplx> out;
  for (const auto& c : j[key]) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw InputError(std::string("rational map: '") + key + "' entries must be [re, im]");
    }
    out.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json rational_to_json(const RationalMap& map, const CFApproximant& approx) {
  return {{"num", poly_json(map.num)},
          {"den", poly_json(map.den)},
          {"k", approx.k},
          {"N", approx.N},
          {"n", approx.n_iter}};
}

RationalMap rational_from_json(const nlohmann::json& j, CFApproximant* approx) {
  if (!j.is_object()) throw InputError("rational map: expected an object");
  RationalMap out{poly_from_json(j, "num"), poly_from_json(j, "den")};
  if (std::all_of(out.den.begin(), out.den.end(), [](cplx c) { return c == cplx{}; })) {
    throw InputError("rational map: denominator is identically zero");
  }
  if (approx != nullptr) {
    try {
      *approx = CFApproximant{j.at("k").get<int>(), j.at("N").get<int>(), j.at("n").get<int>()};
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("rational map: ") + e.what());
    }
    approx->validate();
  }
  return out;
}

}  // namespace cforge
