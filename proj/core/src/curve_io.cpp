#include "cforge/curve_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cforge/error.hpp"

namespace cforge {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error(ErrorKind::internal, "number formatting failed");
  return std::string(buf, ptr);
}

FourierCurve read_curve_csv(std::istream& in) {
  std::string line;
  std::map<int, cplx> coeffs;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (cells.size() == 3 && cells[0] == "k" && cells[1] == "re" && cells[2] == "im") continue;
      throw InputError("curve CSV: expected header `k,re,im`");
    }
    int k = 0;
    double re = 0.0;
    double im = 0.0;
    if (cells.size() != 3 || !parse_int(cells[0], k) || !parse_double(cells[1], re) ||
        !parse_double(cells[2], im)) {
      throw InputError("curve CSV: malformed row at line " + std::to_string(line_no));
    }
    if (coeffs.count(k) != 0) {
      throw InputError("curve CSV: duplicate index k=" + std::to_string(k));
    }
    coeffs[k] = {re, im};
  }
  if (coeffs.empty()) throw InputError("curve CSV: no coefficients");
  return FourierCurve(std::move(coeffs));
}

FourierCurve read_curve_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_curve_csv(in);
}

void write_curve_csv(std::ostream& out, const FourierCurve& curve) {
  out << "k,re,im\n";
  for (const auto& [k, c] : curve.coeffs()) {
    out << k << ',' << format_number(c.real()) << ',' << format_number(c.imag()) << '\n';
  }
}

void write_curve_csv(const std::filesystem::path& path, const FourierCurve& curve) {
  std::ostringstream os;
  write_curve_csv(os, curve);
  write_text_file(path, os.str());
}

FourierCurve curve_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw InputError("curve JSON: expected {\"coeffs\": [...]}");
  }
  std::map<int, cplx> coeffs;
  for (const auto& row : j["coeffs"]) {
    if (!row.is_object() || !row.contains("k") || !row["k"].is_number_integer() ||
        !row.contains("re") || !row["re"].is_number() || !row.contains("im") ||
        !row["im"].is_number()) {
      throw InputError("curve JSON: each coefficient needs integer k and numeric re, im");
    }
    const int k = row["k"].get<int>();
    if (coeffs.count(k) != 0) throw InputError("curve JSON: duplicate index k=" + std::to_string(k));
    coeffs[k] = {row["re"].get<double>(), row["im"].get<double>()};
  }
  if (coeffs.empty()) throw InputError("curve JSON: no coefficients");
  return FourierCurve(std::move(coeffs));
}

nlohmann::json curve_to_json(const FourierCurve& curve) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, c] : curve.coeffs()) {
    arr.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"coeffs", arr}};
}

FourierCurve read_curve(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    try {
      return curve_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw InputError("curve JSON: " + std::string(e.what()));
    }
  }
  return read_curve_csv(path);
}

std::vector<cplx> read_samples_csv(std::istream& in) {
  std::string line;
  std::vector<cplx> samples;
  std::vector<double> ts;
  int line_no = 0;
  int columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    std::vector<double> vals(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) numeric = numeric && parse_double(cells[i], vals[i]);
    if (!numeric) {
      if (samples.empty() && columns == 0 && (cells.size() == 2 || cells.size() == 3)) {
        columns = static_cast<int>(cells.size());  // header row
        continue;
      }
      throw InputError("samples CSV: malformed row at line " + std::to_string(line_no));
    }
    if (columns == 0) columns = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != columns || (columns != 2 && columns != 3)) {
      throw InputError("samples CSV: expected `t,re,im` or `re,im` rows (line " +
                       std::to_string(line_no) + ")");
    }
    if (columns == 3) {
      ts.push_back(vals[0]);
      samples.emplace_back(vals[1], vals[2]);
    } else {
      samples.emplace_back(vals[0], vals[1]);
    }
  }
  if (samples.empty()) throw InputError("samples CSV: no samples");
  if (!ts.empty()) {
    const double h = kTwoPi / static_cast<double>(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (std::abs(ts[j] - ts[0] - h * static_cast<double>(j)) > 1e-6 * kTwoPi) {
        throw InputError("samples CSV: t column is not uniform over [0, 2pi)");
      }
    }
  }
  return samples;
}

std::vector<cplx> read_samples_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, const std::vector<cplx>& samples) {
  out << "t,re,im\n";
  const auto count = static_cast<double>(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    out << format_number(kTwoPi * static_cast<double>(j) / count) << ','
        << format_number(samples[j].real()) << ',' << format_number(samples[j].imag()) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cforge
