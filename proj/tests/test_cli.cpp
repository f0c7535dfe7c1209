#include <doctest.h>

#include <filesystem>
#include <stdexcept>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "riskfront/cli.hpp"
#include "riskfront/envs.hpp"

using namespace riskfront;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("riskfront_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "riskfront");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Drops the trailing timing column.
std::string without_timing(const std::string& row) { return row.substr(0, row.rfind(',')); }

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(1.26e-5) == "1.26e-05");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-10) == "-10");
}

TEST_CASE("parse_config") {
  auto cfg = parse_config(R"({"env": "cliff", "epsilon": 0.02, "specs": [{"kind": "threshold", "T_rel": 0.5}, {"kind": "cvar", "alpha": 0.1}]})", "/tmp");
  CHECK(cfg.epsilon == 0.02);
  CHECK(cfg.beta_min == -10.0);
  REQUIRE(cfg.specs.size() == 2);
  CHECK(cfg.specs[0].relative);
  CHECK(cfg.specs[1].kind == RiskKind::CVaR);
  CHECK(cfg.out_dir == fs::path("/tmp/out"));

  CHECK_THROWS_AS(parse_config(R"({"env": "cliff", "epsilon": 2})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"env": "cliff", "beta_min": 1})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"env": "cliff", "methods": ["magic"]})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"env": "cliff", "colour": 1})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"env": "cliff", "specs": [{"kind": "cvar"}]})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"epsilon": 0.1})", "."), ConfigError);
  try {
    parse_config("{\n\"env\": \"cliff\",\n\"epsilon\": 0.1,,\n}", ".");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("build_env") {
  CHECK(build_env(Json("cliff"), 0, ".").n_states == 49);
  CHECK(build_env(Json::parse(R"({"name": "inventory", "capacity": 3})"), 0, ".").n_states == 14);
  CHECK(build_env(Json::parse(R"({"name": "random", "n_states": 2})"), 4, ".").rewards ==
        random_mdp(2, 2, 3, 4).rewards);
  CHECK_THROWS_AS(build_env(Json("moon"), 0, "."), ConfigError);
  CHECK_THROWS_AS(build_env(Json::parse(R"({"name": "cliff", "wind": 1})"), 0, "."), ConfigError);
  CHECK_THROWS_AS(build_env(Json::parse(R"({"name": "cliff", "width": 1})"), 0, "."), ConfigError);

  TempDir dir;
  auto bad = mdp_to_json(random_mdp(2, 2, 2, 1));
  bad["transitions"][0][0] = Json::array({0.5, 0.4});
  dir.write("bad.json", bad.dump());
  CHECK_THROWS_AS(build_env(Json::parse(R"({"file": "bad.json"})"), 0, dir.path), ConfigError);
  CHECK_THROWS_AS(build_env(Json::parse(R"({"file": "absent.json"})"), 0, dir.path), ConfigError);
}

TEST_CASE("front command") {
  TempDir dir;
  TabularMDP toy = TabularMDP::make(1, 1, 2);
  toy.p(0, 0, 0, 0) = 1.0;
  toy.r(0, 0, 0) = 0.5;
  dir.write("toy.json", mdp_to_json(toy).dump());
  dir.write("cfg.json", R"({"env": {"file": "toy.json"}, "out_dir": "res"})");
  auto r = run({"front", "--config", (dir.path / "cfg.json").string()});
  REQUIRE(r.code == kExitOk);
  auto front = Json::parse(std::ifstream(dir.path / "res" / "front.json"));
  CHECK(front["entries"].size() == 1);
  auto summary = lines(dir.path / "res" / "front_summary.csv");
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].rfind("entry,beta_lo,beta_hi,mean", 0) == 0);

  dir.write("cliff.json", R"({"env": "cliff", "out_dir": "c"})");
  auto out_dir = dir.path / "override";
  REQUIRE(run({"front", "--config", (dir.path / "cliff.json").string(), "--out", out_dir.string()}).code == kExitOk);
  auto cliff = Json::parse(std::ifstream(out_dir / "front.json"));
  CHECK(cliff["entries"].size() > 1);
  CHECK(cliff["entries"][0]["policy"].size() == 16);
  CHECK(cliff["entries"][0]["policy"][0].size() == 49);
}

TEST_CASE("evaluate command") {
  TempDir dir;
  dir.write("cfg.json", R"({"env": "cliff", "methods": ["front", "augmented_tp", "risk_neutral"],
    "specs": [{"kind": "threshold", "T": -0.5}, {"kind": "threshold", "T": 0}], "out_dir": "res"})");
  auto cfg = (dir.path / "cfg.json").string();
  REQUIRE(run({"evaluate", "--config", cfg}).code == kExitOk);
  auto rows = lines(dir.path / "res" / "metrics.csv");
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "method,spec_kind,spec_param,value,beta_star,interval_lo,interval_hi,eval_count,wall_ms");
  // Front and optimum agree on the cliff.
  auto value = [](const std::string& row) {
    std::vector<std::string> cells;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    return cells.at(3);
  };
  CHECK(value(rows[1]) == value(rows[3]));
  CHECK(value(rows[2]) == value(rows[4]));

  // Deterministic apart from timing.
  auto first = rows;
  REQUIRE(run({"evaluate", "--config", cfg}).code == kExitOk);
  auto second = lines(dir.path / "res" / "metrics.csv");
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 1; i < first.size(); ++i) CHECK(without_timing(first[i]) == without_timing(second[i]));

  dir.write("bad.json", R"({"env": "cliff", "methods": ["augmented_tp"], "specs": [{"kind": "cvar", "alpha": 0.1}]})");
  CHECK(run({"evaluate", "--config", (dir.path / "bad.json").string()}).code == kExitConfig);
}

TEST_CASE("bench command") {
  TempDir dir;
  dir.write("coin_lottery.json", R"({"env": "coin_lottery", "precisions": [0.01, 0.001], "out_dir": "res"})");
  REQUIRE(run({"bench", "--config", (dir.path / "coin_lottery.json").string()}).code == kExitOk);
  auto rows = lines(dir.path / "res" / "bench.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "epsilon,eval_count,grid_count,ratio,n_breakpoints,wall_ms");
  CHECK(rows[1].rfind("0.01,", 0) == 0);
  CHECK(rows[1].find(",800,") != std::string::npos);
  CHECK(rows[2].find(",8000,") != std::string::npos);

  dir.write("default.json", R"({"env": "coin_lottery", "out_dir": "d"})");
  REQUIRE(run({"bench", "--config", (dir.path / "default.json").string()}).code == kExitOk);
  CHECK(lines(dir.path / "d" / "bench.csv").size() == 11);
}

TEST_CASE("bench on the cliff: ratio grows as precision tightens") {
  TempDir dir;
  dir.write("cliff.json", R"({"env": "cliff", "precisions": [0.1, 0.01, 0.001], "out_dir": "res"})");
  REQUIRE(run({"bench", "--config", (dir.path / "cliff.json").string()}).code == kExitOk);
  auto rows = lines(dir.path / "res" / "bench.csv");
  REQUIRE(rows.size() == 4);
  std::vector<double> ratios;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::vector<std::string> cells;
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ratios.push_back(std::stod(cells.at(3)));
  }
  CHECK(ratios[0] < ratios[1]);
  CHECK(ratios[1] < ratios[2]);
  CHECK(ratios[2] >= 5.0);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitConfig);
  CHECK(run({"front"}).code == kExitConfig);
  CHECK(run({"launch", "--config", "x"}).code == kExitConfig);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"front", "--config", "/nonexistent/cfg.json"}).code == kExitConfig);
  TempDir dir;
  dir.write("broken.json", "{\"env\": ");
  CHECK(run({"front", "--config", (dir.path / "broken.json").string()}).code == kExitConfig);
  // A numeric failure inside the solvers maps to 3: the augmented DP rejects
  // rewards without a common grid.
  TabularMDP m = random_mdp(2, 2, 2, 3);
  dir.write("m.json", mdp_to_json(m).dump());
  dir.write("num.json", R"({"env": {"file": "m.json"}, "methods": ["augmented_tp"], "specs": [{"kind": "threshold", "T": 0.5}]})");
  CHECK(run({"evaluate", "--config", (dir.path / "num.json").string(), "--out", (dir.path / "o").string()}).code == kExitNumeric);
}
