#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "config.hpp"
#include "doctest.h"
#include "json.hpp"
#include "misinfo/error.hpp"
#include "outputs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace misinfo;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "misinfo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("misinfo_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("design-report examples") {
  auto r = invoke({"design-report", "--xs", "1,0", "--xt", "1,0", "--epsilon", "0.2",
                   "--seed", "1"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["y_star"][0].get<double>() == doctest::Approx(1.2).epsilon(1e-6));
  CHECK(std::abs(doc["y_star"][1].get<double>()) < 1e-6);
  CHECK(doc["lambda_star"].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-6));
  CHECK(doc["binding"] == true);
  CHECK(doc["admissible"] == true);
  CHECK(doc.contains("objective"));

  r = invoke({"design-report", "--xs", "1,0", "--xt", "1,0", "--epsilon", "10",
              "--seed", "1"});
  REQUIRE(r.code == 0);
  const json free = json::parse(r.out);
  CHECK(free["lambda_star"].get<double>() == 0.0);
  CHECK(free["binding"] == false);
}

TEST_CASE("design-report input errors") {
  auto r = invoke({"design-report", "--xs", "1,0,2", "--xt", "1,0", "--epsilon",
                   "0.2", "--seed", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--xs") != std::string::npos);
  r = invoke({"design-report", "--xs", "1,0", "--xt", "1,zz", "--epsilon", "0.2",
              "--seed", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--xt") != std::string::npos);
  r = invoke({"design-report", "--xs", "1,0", "--xt", "1,0", "--epsilon", "0.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("seed") != std::string::npos);
  r = invoke({"design-report", "--xs", "1,0", "--xt", "1,0", "--epsilon", "-1",
              "--seed", "3"});
  CHECK(r.code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("sweep writes a structured, reproducible CSV") {
  const fs::path dir = scratch("sweep");
  const auto cfg = write_config(
      dir, {{"epsilon_grid", {{"start", 0.5}, {"stop", 1.0}, {"step", 0.5}}},
            {"n_draws", 10},
            {"seed", 42},
            {"scenario", {{"n_viewers", 50}}}});
  auto r = invoke({"sweep", "--config", cfg.string(), "--out", (dir / "a").string(),
                   "--svg"});
  REQUIRE(r.code == 0);
  const std::string first = slurp(dir / "a" / "sweep.csv");
  const auto rows = csv_rows(first);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"epsilon", "true_mean", "true_std",
                                            "false_mean", "false_std"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].size() == 5);
    // Nine significant digits: d.dddddddde±XX
    CHECK(rows[i][1].find('e') == 10);
  }
  CHECK(rows[1][0] == "5.00000000e-01");
  CHECK(fs::exists(dir / "a" / "sweep.svg"));
  const std::string svg = slurp(dir / "a" / "sweep.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("#1f5fbf") != std::string::npos);
  CHECK(svg.find("#cc2222") != std::string::npos);

  r = invoke({"sweep", "--config", cfg.string(), "--out", (dir / "b").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "b" / "sweep.csv") == first);
  CHECK_FALSE(fs::exists(dir / "b" / "sweep.svg"));

  r = invoke({"sweep", "--config", cfg.string(), "--seed", "43", "--out",
              (dir / "c").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "c" / "sweep.csv") != first);
}

TEST_CASE("sweep rejects an unwritable output directory") {
  const fs::path dir = scratch("unwritable");
  std::ofstream(dir / "blocker") << "not a directory";
  const auto r = invoke({"sweep", "--seed", "1", "--draws", "2", "--out",
                         (dir / "blocker" / "inner").string()});
  CHECK(r.code != 0);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("indifferent sweep rows keep truth below falsehood") {
  const fs::path dir = scratch("order");
  const auto r = invoke({"sweep", "--seed", "2", "--draws", "300", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(slurp(dir / "sweep.csv"));
  REQUIRE(rows.size() == 31);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) <= std::stod(rows[i][3]));
  }
}

TEST_CASE("optimize-policy outputs") {
  const fs::path dir = scratch("policy");
  const auto cfg = write_config(dir, {{"seed", 5},
                                      {"n_draws", 60},
                                      {"scenario", {{"n_viewers", 40}}},
                                      {"policy", {{"beta", 0.0}}}});
  auto r = invoke({"optimize-policy", "--config", cfg.string(), "--out", dir.string(),
                   "--svg"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(slurp(dir / "utility.csv"));
  REQUIRE(rows.size() == 31);
  CHECK(rows[0] == std::vector<std::string>{"epsilon", "u1", "u2", "total",
                                            "u1_pass_delta", "u2_pass_alpha"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] == rows[i][1]);
  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["beta"].get<double>() == 0.0);
  CHECK(std::isfinite(summary["epsilon_star"].get<double>()));
  CHECK(fs::exists(dir / "utility.svg"));
  CHECK(json::parse(r.out) == summary);

  const auto one = write_config(
      dir, {{"seed", 5},
            {"n_draws", 20},
            {"scenario", {{"n_viewers", 20}}},
            {"epsilon_grid", {{"start", 0.7}, {"stop", 0.75}, {"step", 0.1}}}});
  r = invoke({"optimize-policy", "--config", one.string(), "--out",
              (dir / "one").string()});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["epsilon_star"].get<double>() == 0.7);

  r = invoke({"optimize-policy", "--seed", "1", "--d-min", "2.5", "--draws", "5",
              "--out", (dir / "inf").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("d_min") != std::string::npos);
}

TEST_CASE("validate command") {
  auto r = invoke({"validate", "--seed", "11", "--instances", "100"});
  CHECK(r.code == 0);
  CHECK(r.out.find("100/100") != std::string::npos);
  CHECK(r.err.empty());

  r = invoke({"validate", "--seed", "11", "--instances", "5", "--inject-lambda-bug"});
  CHECK(r.code == 1);
  CHECK(r.err.find("failing_instance") != std::string::npos);

  // The serialized failure replays to the same verdicts.
  const fs::path dir = scratch("replay");
  const std::string first_line = r.err.substr(0, r.err.find('\n'));
  std::ofstream(dir / "fail.json") << first_line;
  auto replay = invoke({"validate", "--seed", "11", "--replay",
                        (dir / "fail.json").string(), "--inject-lambda-bug"});
  CHECK(replay.code == 1);
  replay = invoke({"validate", "--seed", "11", "--replay", (dir / "fail.json").string()});
  CHECK(replay.code == 0);

  r = invoke({"validate", "--seed", "11", "--instances", "0"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0/0") != std::string::npos);
}

TEST_CASE("config parsing") {
  using cli::config_from_json;
  CHECK_THROWS_AS(config_from_json({{"bogus", 1}}), InvalidInput);
  CHECK_THROWS_AS(config_from_json({{"scenario", {{"sigmaa", 1}}}}), InvalidInput);
  auto cfg = config_from_json(
      {{"scenario", {{"sigma", {{"diag", {2.0, 3.0}}}}, {"sigma_s", {0.5, 0.0, 0.0, 0.5}},
                     {"audience", "educated"}}},
       {"policy", {{"d_min", 0.9}}},
       {"seed", 7}});
  CHECK(cfg.scenario.sigma.matrix()(1, 1) == 3.0);
  CHECK(cfg.scenario.sigma_s.matrix()(0, 0) == 0.5);
  CHECK(cfg.scenario.audience == Audience::kEducated);
  CHECK(cfg.scenario.d_min == 0.9);
  CHECK(cfg.seed == 7u);
  CHECK_THROWS_AS(config_from_json({{"scenario", {{"sigma", {{1, 2}, {3, 4}}}}}}),
                  InvalidInput);
  CHECK_THROWS_AS(
      config_from_json({{"epsilon_grid", {{"start", 2.0}, {"stop", 1.0}, {"step", 0.1}}}}),
      InvalidInput);
  CHECK_THROWS_AS(config_from_json({{"epsilon_grid", {{"step", 0.0}}}}), InvalidInput);
  // Round trip of the defaults.
  const auto back = config_from_json(cli::config_to_json(cli::RunConfig{}));
  CHECK(back.n_draws == 2000);
  CHECK(back.policy.beta == 1.6);
  CHECK(back.epsilon_grid.values().size() == 30);
}

TEST_CASE("vector parsing") {
  const Vec v = cli::parse_vector("1, -2.5,3e-1", "--xs");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == -2.5);
  CHECK(v[2] == 0.3);
  CHECK_THROWS_AS(cli::parse_vector("", "--xs"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_vector("1,,2", "--xs"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_vector("1,nan", "--xs"), InvalidInput);
}

TEST_CASE("instance serialization round trip") {
  Rng rng(3);
  const auto inst = random_instance(rng, 2, 3);
  const auto back = cli::instance_from_json(json::parse(cli::instance_json(inst).dump()));
  CHECK(back.epsilon == inst.epsilon);
  CHECK((back.x_s - inst.x_s).norm() == 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.population[i].sigma() == inst.population[i].sigma());
    CHECK((back.population[i].mu() - inst.population[i].mu()).norm() == 0.0);
  }
  CHECK_THROWS_AS(cli::instance_from_json(json::object()), InvalidInput);
}

}  // TEST_SUITE
