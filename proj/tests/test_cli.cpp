#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bell/cli.hpp"
#include "bell/errors.hpp"
#include "bell/json_io.hpp"
#include "bell/tensor.hpp"
#include "test_util.hpp"

using namespace bell;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "bellcheck_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_fixture(const std::string& name, const nlohmann::ordered_json& j) {
  fs::path p = temp_file(name);
  save_json_file(p.string(), j);
  return p.string();
}

double as_double(const nlohmann::ordered_json& v) { return std::stod(v.get<std::string>()); }

}  // namespace

TEST_CASE("fmt_real prints 12 significant digits") {
  CHECK(cli::fmt_real(2.0) == "2");
  CHECK(cli::fmt_real(std::sqrt(2.0)) == "1.41421356237");
  CHECK(cli::fmt_real(5.656854249492381) == "5.65685424949");
}

TEST_CASE("cmd_bounds reports the three n=3 headline numbers") {
  cli::RunReport rep = cli::cmd_bounds(3, std::nullopt, 5);
  CHECK(rep.results["lhv_max"] == "1");
  CHECK(as_double(rep.results["quantum_norm"]) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(as_double(rep.results["ghz_value"]) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(as_double(rep.results["spectrum_cubic_residual"]) <= 1e-9);
  CHECK_FALSE(rep.claim_failed);
}

TEST_CASE("cmd_bounds at n=1 returns all ones") {
  cli::RunReport rep = cli::cmd_bounds(1, std::nullopt, 5);
  CHECK(rep.results["lhv_max"] == "1");
  CHECK(as_double(rep.results["quantum_norm"]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(as_double(rep.results["ghz_value"]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cmd_bounds accepts a settings file and rejects a bad one") {
  MeasurementSettings s = testutil::planar({0.1, 0.7});
  const std::string path = write_fixture("settings2.json", settings_to_json(s));
  cli::RunReport rep = cli::cmd_bounds(2, path, 1);
  CHECK(as_double(rep.results["quantum_norm"]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // Angles-form settings file.
  nlohmann::ordered_json angles = {{"n", 2}, {"angles", {0.4, 1.9}}};
  const std::string apath = write_fixture("settings_angles.json", angles);
  cli::RunReport arep = cli::cmd_bounds(2, apath, 1);
  CHECK(as_double(arep.results["quantum_norm"]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  const fs::path bad = temp_file("bad_settings.json");
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(cli::cmd_bounds(2, bad.string(), 1), parse_error);
}

TEST_CASE("cmd_bounds at n=6 reaches 2^2.5 and omits lhv_max above the cap") {
  cli::RunReport rep = cli::cmd_bounds(6, std::nullopt, 3);
  CHECK(as_double(rep.results["quantum_norm"]) ==
        doctest::Approx(5.656854249492381).epsilon(1e-9));
  CHECK(rep.results["lhv_max"] == "1");

  cli::RunReport high = cli::cmd_bounds(9, std::nullopt, 3);
  CHECK(high.results["lhv_max"].is_null());
}

TEST_CASE("cmd_chen_gap rows carry the expected exact columns") {
  cli::RunReport rep = cli::cmd_chen_gap(4, 9);
  const auto& rows = rep.results["rows"];
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int n = 2 + static_cast<int>(i);
    CHECK(rows[i]["n"] == std::to_string(n));
    CHECK(rows[i]["chen_lhv_bound"] == "2");
    CHECK(as_double(rows[i]["separable_v_max"]) ==
          doctest::Approx(std::ldexp(1.0, n - 1)).epsilon(1e-6));
    CHECK(as_double(rows[i]["ratio"]) == doctest::Approx(std::ldexp(1.0, n - 2)).epsilon(1e-5));
    CHECK(rows[i]["correct_counterpart_max"] == std::to_string(1 << (n - 1)));
    CHECK(rows[i]["verdict"] == "no violation");
  }
  CHECK_FALSE(rep.claim_failed);
  CHECK_THROWS_AS(cli::cmd_chen_gap(7, 1), capacity_error);
}

TEST_CASE("chen-gap CSV matches the JSON digits bit for bit") {
  cli::RunReport rep = cli::cmd_chen_gap(3, 2);
  const std::string csv = rep.to_csv();
  std::vector<std::string> lines;
  std::string line;
  for (char c : csv) {
    if (c == '\n') {
      lines.push_back(line);
      line.clear();
    } else {
      line += c;
    }
  }
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "n,chen_lhv_bound,separable_v_max,ratio,correct_counterpart_max,verdict");
  const auto& rows = rep.results["rows"];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string expected;
    for (auto it = rows[i].begin(); it != rows[i].end(); ++it) {
      if (!expected.empty()) expected += ',';
      expected += it.value().get<std::string>();
    }
    CHECK(lines[i + 1] == expected);
  }
}

TEST_CASE("cmd_synthesize verifies a separable fixture and emits the model") {
  SeparableState s = random_separable(3, 4, 14);
  const std::string state_path = write_fixture("state3.json", separable_to_json(s));
  bell::Rng rng(15);
  MeasurementSettings settings = testutil::random_orthogonal_settings(3, rng);
  const std::string settings_path = write_fixture("settings3.json", settings_to_json(settings));
  const fs::path model_path = temp_file("model3.json");

  cli::RunReport rep = cli::cmd_synthesize(state_path, settings_path, model_path.string());
  CHECK(as_double(rep.results["max_discrepancy"]) <= 1e-12);
  CHECK(std::abs(as_double(rep.results["mk_value"])) <= 1.0 + 1e-12);
  CHECK_FALSE(rep.claim_failed);
  CHECK(rep.results["model"]["lambdas"] == 4);

  LHVModel model = lhv_model_from_json(load_json_file(model_path.string()));
  CHECK(model.n_parties() == 3);
}

TEST_CASE("shipped fixtures synthesize cleanly") {
  const std::string dir = BELL_FIXTURES_DIR;
  cli::RunReport rep =
      cli::cmd_synthesize(dir + "/state.json", dir + "/settings.json", std::nullopt);
  CHECK(as_double(rep.results["max_discrepancy"]) <= 1e-12);
  CHECK_FALSE(rep.claim_failed);

  cli::RunReport smp = cli::cmd_sample(dir + "/model.json", {0, 1, 0}, 100000, 6);
  CHECK(std::abs(as_double(smp.results["z_score"])) <= 5.0);
}

TEST_CASE("cmd_synthesize rejects a non-separable state file") {
  nlohmann::ordered_json ghz_like = {{"n", 2}, {"vector", {1.0, 0.0, 0.0, 1.0}}};
  const std::string bad = write_fixture("ghz.json", ghz_like);
  MeasurementSettings settings = testutil::planar({0.0, 0.0});
  const std::string sp = write_fixture("settings_p.json", settings_to_json(settings));
  CHECK_THROWS_AS(cli::cmd_synthesize(bad, sp, std::nullopt), invalid_input_error);
}

TEST_CASE("cmd_expand covers both modes and the counterpart") {
  const std::string mk2 = "1/2 A B + 1/2 A B' + 1/2 A' B - 1/2 A' B'";
  cli::RunReport q = cli::cmd_expand(mk2, "quantum", -1, true, true);
  CHECK(q.results["canonical"] == "1 + A'' B''");
  CHECK(q.results["counterpart"]["max"] == "2");

  cli::RunReport c = cli::cmd_expand(mk2, "classical", -1, true, false);
  CHECK(c.results["canonical"] == "1");
  CHECK(c.results["classical_max"] == "1");

  cli::RunReport anti = cli::cmd_expand("A A' + A' A", "quantum", -1, false, false);
  CHECK(anti.results["canonical"] == "0");

  CHECK_THROWS_AS(cli::cmd_expand("A +", "quantum", -1, false, false), parse_error);
  CHECK_THROWS_AS(cli::cmd_expand("A", "singular", -1, false, false), invalid_input_error);
}

TEST_CASE("cmd_sample reports estimate, stderr, exact and z-score") {
  SeparableState s = random_separable(2, 3, 77);
  LHVModel model = synthesize_lhv(s, testutil::planar({0.4, 1.0}));
  const std::string path = write_fixture("model2.json", lhv_model_to_json(model));

  cli::RunReport rep = cli::cmd_sample(path, {0, 1}, 200000, 4);
  const double est = as_double(rep.results["estimate"]);
  const double exact = as_double(rep.results["exact"]);
  const double se = as_double(rep.results["stderr"]);
  const double z = as_double(rep.results["z_score"]);
  CHECK(std::abs(est - exact) <= 5.0 * se);
  if (se > 0.0) CHECK(z == doctest::Approx((est - exact) / se).epsilon(1e-6));
}

TEST_CASE("reports are deterministic given parameters and seed") {
  cli::RunReport a = cli::cmd_bounds(2, std::nullopt, 42);
  cli::RunReport b = cli::cmd_bounds(2, std::nullopt, 42);
  CHECK(a.results.dump() == b.results.dump());

  cli::RunReport g1 = cli::cmd_chen_gap(3, 7);
  cli::RunReport g2 = cli::cmd_chen_gap(3, 7);
  CHECK(g1.results.dump() == g2.results.dump());
  CHECK(g1.to_csv() == g2.to_csv());
}

TEST_CASE("report JSON carries the envelope fields") {
  cli::RunReport rep = cli::cmd_expand("A", "quantum", -1, false, false);
  nlohmann::ordered_json j = rep.to_json();
  CHECK(j.contains("command"));
  CHECK(j.contains("parameters"));
  CHECK(j.contains("results"));
  CHECK(j.contains("seed"));
  CHECK(j.contains("version"));
  CHECK(j.contains("timestamp"));
  CHECK(j.contains("claim_failed"));
  CHECK(j["command"] == "expand");
}
