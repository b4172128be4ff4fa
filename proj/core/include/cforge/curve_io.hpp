#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cforge/fourier_curve.hpp"

namespace cforge {

/// Decimal formatting used for every number written to a file.
std::string format_number(double value);

// Curve coefficient files: CSV with header `k,re,im`, or JSON
// {"coeffs": [{"k": int, "re": float, "im": float}, ...]}.
FourierCurve read_curve_csv(std::istream& in);
FourierCurve read_curve_csv(const std::filesystem::path& path);
void write_curve_csv(std::ostream& out, const FourierCurve& curve);
void write_curve_csv(const std::filesystem::path& path, const FourierCurve& curve);

FourierCurve curve_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const FourierCurve& curve);
/// Dispatches on extension: .json, otherwise CSV.
FourierCurve read_curve(const std::filesystem::path& path);

/// Boundary samples: CSV `t,re,im` or `re,im`, with or without a header row.
/// Samples are taken to be uniform in t over [0, 2pi); an explicit t column is
/// checked for uniformity.
std::vector<cplx> read_samples_csv(std::istream& in);
std::vector<cplx> read_samples_csv(const std::filesystem::path& path);
void write_samples_csv(std::ostream& out, const std::vector<cplx>& samples);

/// Writes a string to a file, throwing InputError on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cforge
