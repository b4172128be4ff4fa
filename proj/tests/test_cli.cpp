#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "cforge/curve_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cforge_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + CFORGE_EXE + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& p) { return json::parse(cforge::read_text_file(p)); }

}  // namespace

TEST_CASE("fit writes coefficients") {
  const auto dir = scratch("fit");
  std::string csv = "t,re,im\n";
  for (int j = 0; j < 64; ++j) {
    const double t = 2.0 * M_PI * j / 64;
    csv += cforge::format_number(t) + "," + cforge::format_number(std::cos(t)) + "," +
           cforge::format_number(0.5 * std::sin(t)) + "\n";
  }
  cforge::write_text_file(dir / "ellipse.csv", csv);
  CHECK(run("fit " + (dir / "ellipse.csv").string() + " -m 4 -n 4 --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "curve.csv"));
  const auto curve = cforge::read_curve_csv(dir / "curve.csv");
  CHECK(std::abs(curve.coeff(1) - cforge::cplx{0.75, 0}) < 1e-12);
  CHECK(std::abs(curve.coeff(-1) - cforge::cplx{0.25, 0}) < 1e-12);
  CHECK(fs::exists(dir / "fit.json"));
}

TEST_CASE("map writes a manifest and re-runs identically") {
  const auto dir = scratch("map");
  cforge::write_text_file(dir / "config.json", R"({"boundary": {"builtin": "circle"}, "M": 16})");
  const auto first = dir / "first";
  const auto second = dir / "second";
  REQUIRE(run("map --config " + (dir / "config.json").string() + " --render --out " +
              first.string()) == 0);
  const auto manifest = load(first / "manifest.json");
  CHECK(manifest.at("status") == "ok");
  CHECK(manifest.at("diagnostics").at("deviation").at("sup_deviation").get<double>() < 1e-10);
  REQUIRE(run("map --config " + (first / "manifest.json").string() + " --render --out " +
              second.string()) == 0);
  for (const char* f : {"core.csv", "map.svg"}) {
    CHECK(cforge::read_text_file(first / f) == cforge::read_text_file(second / f));
  }
  CHECK(run("report --config " + (first / "manifest.json").string() + " --out " +
            first.string()) == 0);
  CHECK(fs::exists(first / "report.json"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(run("verify nope") == 2);
  CHECK(run("map --config " + (dir / "missing.json").string()) == 2);
  cforge::write_text_file(dir / "tiny.csv", "re,im\n1,0\n0,1\n-1,0\n");
  CHECK(run("fit " + (dir / "tiny.csv").string() + " -m 4 -n 4 --out " + dir.string()) == 3);
  // Corner preconditions fail on a smooth boundary with the wrong orientation index.
  cforge::write_text_file(dir / "bad.json",
                          R"({"boundary": {"builtin": "circle"}, "corner": {"t0": 0, "k": 3, "N": 2}})");
  const int code = run("map --config " + (dir / "bad.json").string() + " --out " + dir.string());
  CHECK(code != 0);
  CHECK(code != 8);
}

TEST_CASE("verify writes a report") {
  const auto dir = scratch("verify");
  CHECK(run("verify lemma2 --out " + dir.string()) == 0);
  const auto report = load(dir / "verify_lemma2.json");
  CHECK(report.at("suite") == "lemma2");
}
