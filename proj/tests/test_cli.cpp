#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdb/cli.hpp"

namespace fs = std::filesystem;
using qdb::cli::run;

namespace {

const fs::path kData = QDB_TEST_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  return fs::temp_directory_path() / ("qdb_cli_test_" + name);
}

}  // namespace

TEST_CASE("predict: table and JSON output for the Townsend parameters") {
  const auto r = invoke({"predict", "--h1", "-0.1376", "--h2", "0.2033", "--p-b1", "0.17"});
  CHECK(r.code == qdb::cli::kExitOk);
  CHECK(r.err.empty());
  CHECK(has(r.out, "P_T"));
  CHECK(has(r.out, "0.5926"));
  CHECK(has(r.out, "0.6715"));
  CHECK(has(r.out, "0.2365"));
  CHECK(has(r.out, "0.0788"));
  CHECK(has(r.out, "m(AG)"));

  const auto j = invoke({"predict", "--h1", "-0.1376", "--h2", "0.2033", "--p-b1", "0.17",
                         "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(std::abs(doc["p_unknown"].get<double>() - 0.6715) < 5e-4);
  CHECK(std::abs(doc["m_known"]["AB"].get<double>() - 0.3846) < 5e-4);
  CHECK(doc["params"]["sign"] == 1);
}

TEST_CASE("predict: negative interference sign") {
  const auto r = invoke({"predict", "--h1", "-0.1376", "--h2", "0.2033", "--p-b1", "0.17",
                         "--sign", "-", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["params"]["sign"] == -1);
  CHECK(std::abs(doc["p_unknown"].get<double>() - 0.5138) < 5e-4);
  CHECK(doc["interference"].get<double>() < 0.0);
}

TEST_CASE("fit: recovers the payoff parameters") {
  const auto r = invoke({"fit", "--target-b1", "0.41", "--target-b2", "0.63"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "-0.1376"));
  CHECK(has(r.out, "0.2033"));

  const auto j = invoke({"fit", "--target-b1", "0.5", "--target-b2", "0.5", "--format", "json"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(std::abs(doc["h1"].get<double>()) < 1e-9);
}

TEST_CASE("entropy: BPA file") {
  const auto r = invoke({"entropy", "--bpa", (kData / "uniform3.json").string(), "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const double expected = -3 * 0.2 * std::log2(0.2) - 3 * 0.1 * std::log2(0.1 / 3.0) -
                          0.1 * std::log2(0.1 / 7.0);
  CHECK(doc["deng"].get<double>() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(doc["shannon_pignistic"].get<double>() == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(doc["focal_sets"] == 7);
}

TEST_CASE("exit codes") {
  const auto out_of_range = invoke({"predict", "--h1", "5", "--h2", "0", "--p-b1", "0.5"});
  CHECK(out_of_range.code == qdb::cli::kExitValidation);
  CHECK(has(out_of_range.err, "error[OutOfRange]"));

  const auto missing = invoke({"predict", "--h1", "0"});
  CHECK(missing.code == qdb::cli::kExitValidation);
  CHECK(has(missing.err, "error[usage]"));

  CHECK(invoke({}).code == qdb::cli::kExitValidation);
  CHECK(invoke({"predict", "--h1", "0", "--h2", "0", "--p-b1", "0.5", "--sign", "x"}).code ==
        qdb::cli::kExitValidation);

  const auto unreachable = invoke({"fit", "--target-b1", "0.05", "--target-b2", "0.5"});
  CHECK(unreachable.code == qdb::cli::kExitFitFailure);
  CHECK(has(unreachable.err, "error[TargetUnreachable]"));

  const auto invalid = invoke({"reproduce", "--data", (kData / "invalid_prior.csv").string()});
  CHECK(invalid.code == qdb::cli::kExitValidation);
  CHECK(has(invalid.err, "error[InvariantViolation]"));

  const auto version = invoke({"--version"});
  CHECK(version.code == 0);
  CHECK(has(version.out, "qdb 1.0.0"));
}

TEST_CASE("reproduce and compare: deterministic reports and output files") {
  const auto a = invoke({"reproduce", "--builtin", "--format", "json"});
  const auto b = invoke({"reproduce", "--builtin", "--format", "json"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["rows"].size() == 12);

  const auto data = invoke({"reproduce", "--data", (kData / "narrow_rows.csv").string()});
  CHECK(data.code == 0);
  CHECK(has(data.out, "WangBusemeyer2016-E3"));

  const auto report = scratch("report.json");
  const auto chart = scratch("chart.csv");
  fs::remove(report);
  fs::remove(chart);
  const auto c = invoke({"compare", "--builtin", "--out", report.string(), "--chart", chart.string()});
  REQUIRE(c.code == 0);
  CHECK(c.out.empty());
  const auto doc = nlohmann::json::parse(slurp(report));
  CHECK(doc["rows"][1]["ordering_holds"] == true);
  const auto chart_text = slurp(chart);
  CHECK(chart_text.rfind("dataset,observed,markov,qdb,bae\n", 0) == 0);
  CHECK(has(chart_text, "Townsend2000,0.69,0.5926"));
  fs::remove(report);
  fs::remove(chart);
}
