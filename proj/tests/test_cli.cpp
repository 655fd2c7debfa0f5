#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "freehardy/cli.hpp"
#include "freehardy/json_io.hpp"

using namespace freehardy;
using io::json;

namespace {

const std::string kData = FREEHARDY_TEST_DATA;

struct Result {
  int code;
  json report;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  json report;
  if (!out.str().empty() && out.str().front() == '{') report = json::parse(out.str());
  return {code, report, err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("freehardy_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("factor matches the golden file for f = z") {
  const Result r = run({"factor", "--series", data("f_z.json"), "--degree", "10"});
  REQUIRE(r.code == cli::kOk);
  const InnerOuterPair golden = io::pair_from_json(
      [] {
        json g = io::read_file(data("factor_z_golden.json"));
        json p;
        for (const char* key : {"N", "workDegree", "a", "b", "normalizer", "residuals"}) p[key] = g[key];
        return p;
      }());
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(golden.a.coeff(Word(1)) - s) <= 1e-12);
  CHECK(std::abs(golden.b.coeff(Word(1, {1})) - s) <= 1e-12);

  json p;
  for (const char* key : {"N", "workDegree", "a", "b", "normalizer", "residuals"}) p[key] = r.report[key];
  const InnerOuterPair got = io::pair_from_json(p);
  CHECK(got.degree == golden.degree);
  CHECK(sup_distance(got.a, golden.a) <= 1e-12);
  CHECK(sup_distance(got.b, golden.b) <= 1e-12);
  CHECK(std::abs(got.normalizer - golden.normalizer) <= 1e-12);
  CHECK(r.report["status"] == "PASS");
}

TEST_CASE("reports carry version, config and residuals") {
  const std::string pt = temp_file("pt.json", R"({"d": 1, "n": 1, "mats": [{"re": [[0.5]]}]})");
  const std::string vec = temp_file("vec.json", R"({"re": [1.0]})");
  const std::vector<std::vector<std::string>> commands = {
      {"eval", "--series", data("f_z.json"), "--point", pt},
      {"szego", "--point", pt},
      {"szego", "--point", pt, "--method", "truncated", "--degree", "12"},
      {"kernel-vector", "--point", pt, "--y", vec, "--v", vec, "--degree", "4"},
      {"word-point", "--word", "2,1", "--r", "0.5"},
      {"word-point", "--series", data("e1.json")},
      {"factor", "--series", data("rational.json"), "--degree", "10"},
      {"wandering", "--series", data("rational.json"), "--degree", "8"},
      {"local-check", "--series", data("rational.json"), "--degree", "8"},
      {"outer-check", "--series", data("e1.json"), "--degree", "4"},
      {"diverge", "--series", data("rational.json"), "--degree", "20"},
      {"pick", "--data", data("pick_z1.json"), "--side", "right"},
      {"leech", "--data", data("leech_half.json")},
      {"member", "--series", data("e1.json"), "--points", data("points_d2.json")},
      {"sample-points", "--count", "3"},
  };
  for (const auto& args : commands) {
    CAPTURE(args.front());
    const Result r = run(args);
    CHECK(r.code == cli::kOk);
    CHECK(r.report["tool"] == cli::kToolName);
    CHECK(r.report["version"] == cli::kVersion);
    CHECK(r.report["command"] == args.front());
    CHECK(r.report.contains("config"));
    CHECK(r.report.contains("residuals"));
  }
}

TEST_CASE("pick verdicts and exit codes") {
  for (const char* side : {"left", "right"}) {
    const Result ok = run({"pick", "--data", data("pick_z1.json"), "--side", side});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.report["feasible"] == true);
    CHECK(ok.report["minEig"].get<double>() >= -1e-9);
  }
  const Result bad = run({"pick", "--data", data("pick_infeasible.json")});
  CHECK(bad.code == cli::kFail);
  CHECK(bad.report["feasible"] == false);
  CHECK(std::abs(bad.report["minEig"].get<double>() - (1.0 - 25.0) / (1.0 - 0.81)) <= 1e-9);
}

TEST_CASE("word points reproduce their targets") {
  const Result r = run({"word-point", "--word", "1,2,2", "--r", "0.3"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.report["residuals"]["reproduction"].get<double>() <= 1e-12);
  CHECK(run({"word-point", "--word", "3"}).code == cli::kInputError);
  CHECK(run({"word-point", "--word", "1", "--r", "1.5"}).code == cli::kInputError);
}

TEST_CASE("structural checks") {
  const Result w = run({"wandering", "--series", data("rational.json"), "--degree", "10"});
  CHECK(w.report["dim"] == 1);
  const Result local = run({"local-check", "--series", data("rational.json")});
  CHECK(local.report["local"] == true);
  const Result outer = run({"outer-check", "--series", data("e1.json"), "--count", "4"});
  CHECK(outer.report["rangeDensityProxy"].get<double>() == 1.0);
  CHECK(outer.report["samplePoints"] == 4);
  const Result div = run({"diverge", "--series", data("rational.json"), "--degree", "10"});
  const auto left = div.report["leftNorms"].get<std::vector<double>>();
  CHECK(left.back() * left.back() >= 10.0 - 1e-9);
}

TEST_CASE("Smirnov form check exit codes") {
  const std::string f = temp_file("sf.json", R"({"den": {"d": 1, "terms": [{"word": [], "re": 1}, {"word": [1], "re": -1}]},
      "num": {"d": 1, "terms": [{"word": [1], "re": 1}]}})");
  const std::string a = temp_file("sa.json", R"({"d": 1, "terms": [{"word": [1], "re": 1}]})");
  const std::string half = temp_file("sh.json", R"({"d": 1, "terms": [{"word": [1], "re": 0.5}]})");
  const std::string unit = temp_file("su.json", R"({"d": 1, "terms": [{"word": [], "re": 1}]})");
  CHECK(run({"smirnov-check", "--series", f, "--a", a, "--b", a, "--count", "10"}).code == cli::kOk);
  const Result wrong = run({"smirnov-check", "--series", f, "--a", a, "--b", half, "--count", "10"});
  CHECK(wrong.code == cli::kFail);
  CHECK(wrong.report["residuals"]["maxResidual"].get<double>() > 0.1);
  CHECK(run({"smirnov-check", "--series", f, "--a", a, "--b", unit}).code == cli::kInputError);
}

TEST_CASE("input errors exit with code 1") {
  const std::string broken = temp_file("broken.json", "{\n  \"d\": 2,\n  \"terms\": [\n");
  const Result r = run({"factor", "--series", broken});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("broken.json:") != std::string::npos);

  const std::string unknown = temp_file("unknown.json", R"({"d": 2, "terms": [], "color": "red"})");
  const Result u = run({"factor", "--series", unknown});
  CHECK(u.code == cli::kInputError);
  CHECK(u.err.find("$.color") != std::string::npos);

  const std::string pt = temp_file("pt2.json", R"({"d": 2, "n": 1, "mats": [{"re": [[0.1]]}, {"re": [[0.2]]}]})");
  CHECK(run({"eval", "--series", data("f_z.json"), "--point", pt}).code == cli::kInputError);
  CHECK(run({"no-such-command"}).code == cli::kInputError);
  CHECK(run({"factor", "--bogus"}).code == cli::kInputError);
  CHECK(run({"factor"}).code == cli::kInputError);
  CHECK(run({"pick", "--data", data("pick_z1.json"), "--side", "up"}).code == cli::kInputError);
  CHECK(run({"factor", "--series", "/nonexistent/f.json"}).code == cli::kInputError);
}

TEST_CASE("sample-points is reproducible") {
  const Result a = run({"sample-points", "--count", "4", "--seed", "42", "--include-nilpotent"});
  const Result b = run({"sample-points", "--count", "4", "--seed", "42", "--include-nilpotent"});
  CHECK(a.report["points"] == b.report["points"]);
  CHECK(a.report["points"].size() == 6);
  CHECK(a.report["residuals"]["maxRowNorm"].get<double>() < 0.7 + 1e-12);
  const Result empty = run({"sample-points", "--count", "0"});
  CHECK(empty.report["points"].empty());
}

TEST_CASE("--out writes the report atomically") {
  const auto path = std::filesystem::temp_directory_path() / "freehardy_cli_report.json";
  std::filesystem::remove(path);
  const Result r = run({"sample-points", "--count", "2", "--out", path.string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.report.is_null());
  CHECK(io::read_file(path.string())["command"] == "sample-points");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("help and version") {
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"--version"}).code == cli::kOk);
}
