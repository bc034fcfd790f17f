// Copyright 2026 The lqrgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lqrgame/cli.hpp"
#include "lqrgame/errors.hpp"
#include "lqrgame/io.hpp"
#include "lqrgame/models.hpp"

using namespace lqrgame;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  const char* env = std::getenv("LQRGAME_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "lqrgame_test_cli";
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Two-node system and loss table shared by the cases below.
const fs::path& table_path() {
  static const fs::path path = [] {
    const fs::path dir = workdir();
    const auto sys = (dir / "sys2.json").string();
    const auto table = (dir / "table2.json").string();
    fs::remove(table);
    REQUIRE(run({"synth", "--nodes", "2", "--topology", "line", "--out", sys}).code == 0);
    REQUIRE(run({"build-table", "--system", sys, "--out", table}).code == 0);
    return fs::path(table);
  }();
  return path;
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0.1,0.2,0.5") == std::vector<double>{0.1, 0.2, 0.5});
  const auto lin = parse_grid("lin:0:1:5");
  REQUIRE(lin.size() == 5);
  CHECK(lin[1] == 0.25);
  CHECK(lin[4] == 1.0);
  CHECK(parse_grid("lin:2:3:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_grid("lin:0:1"), ValidationError);
  CHECK_THROWS_AS(parse_grid("lin:0:1:2.5"), ValidationError);
  CHECK_THROWS_AS(parse_grid("1,abc"), ValidationError);
}

TEST_CASE("sweep spec validation") {
  SweepSpec spec{{0.1, 0.2}, {0.0}, std::nullopt};
  CHECK_NOTHROW(spec.validate());
  spec.gamma_a_values = {0.2, 0.1};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.gamma_a_values = {0.1, 0.1};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.gamma_a_values = {-0.1};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.gamma_a_values = {};
  CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("build-table reuses a matching cache") {
  const auto table = table_path();
  const auto sys = (workdir() / "sys2.json").string();
  const auto again = run({"build-table", "--system", sys, "--out", table.string()});
  CHECK(again.code == 0);
  CHECK(again.err.find("cache hit") != std::string::npos);
  CHECK(again.out.find("J_lqr") != std::string::npos);
  // A different optimizer setting is a different key.
  const auto other = (workdir() / "table2b.json").string();
  fs::copy_file(table, other, fs::copy_options::overwrite_existing);
  const auto miss = run({"build-table", "--system", sys, "--out", other, "--grad-tol", "1e-7"});
  CHECK(miss.code == 0);
  CHECK(miss.err.find("cache hit") == std::string::npos);
  const auto json = run({"build-table", "--system", sys, "--out", table.string(), "--format",
                         "json"});
  CHECK(Json::parse(json.out)["entries"].size() == 4);
}

TEST_CASE("solve writes an equilibrium document") {
  const auto out = (workdir() / "eq.json").string();
  const auto r = run({"solve", "--table", table_path().string(), "--gamma-a", "0.01",
                      "--gamma-d", "0.02", "--out", out});
  REQUIRE(r.code == 0);
  const Json doc = read_json_file(out);
  CHECK(doc["gamma_a"] == 0.01);
  CHECK(doc["r_star"].size() == 4);
  CHECK(doc["epsilon"].get<double>() <= 1e-6 * doc["payoff_scale"].get<double>());
  CHECK(doc.contains("config"));
  CHECK(r.out.find("E_a") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
  const auto dir = workdir();
  std::vector<std::string> base{"sweep", "--table", table_path().string(), "--gamma-a-grid",
                                "lin:0:0.1:4", "--gamma-d-grid", "0,0.01", "--seed", "3"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  REQUIRE(run(with({"--out", (dir / "s1.csv").string()})).code == 0);
  REQUIRE(run(with({"--out", (dir / "s2.csv").string()})).code == 0);
  REQUIRE(run(with({"--out", (dir / "s3.csv").string(), "--threads", "2"})).code == 0);
  const auto s1 = slurp(dir / "s1.csv");
  CHECK(s1 == slurp(dir / "s2.csv"));
  CHECK(s1 == slurp(dir / "s3.csv"));
  CHECK(s1.rfind("# lqrgame-sweep-csv v1\n# config: ", 0) == 0);
  // version, config, header, 8 rows
  CHECK(std::count(s1.begin(), s1.end(), '\n') == 11);

  const auto json = run(with({"--format", "json"}));
  REQUIRE(json.code == 0);
  CHECK(Json::parse(json.out)["records"].size() == 8);
}

TEST_CASE("oracle-check agrees on a small table") {
  const auto r = run({"oracle-check", "--table", table_path().string(), "--gamma-a", "0.01",
                      "--gamma-d", "0.005"});
  CHECK(r.code == 0);
  CHECK(r.out.find("match") != std::string::npos);
}

TEST_CASE("config file feeds defaults and flags win") {
  const auto cfg = (workdir() / "cfg.json").string();
  write_text_file(cfg, R"({"solver": {"restarts": 3, "seed": 11}, "support_threshold": 0.1})");
  const auto r = run({"solve", "--table", table_path().string(), "--gamma-a", "0.01",
                      "--gamma-d", "0.0", "--config", cfg, "--restarts", "5"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["config"]["solver"]["restarts"] == 5);
  CHECK(doc["config"]["solver"]["seed"] == 11);
  CHECK(doc["config"]["support_threshold"] == 0.1);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"solve", "--bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"solve", "--table", (workdir() / "nope.json").string(), "--gamma-a", "1",
             "--gamma-d", "1"})
            .code == 2);
  CHECK(run({"solve", "--table", table_path().string(), "--gamma-a", "-1", "--gamma-d", "1"})
            .code == 2);
  CHECK(run({"solve", "--table", table_path().string(), "--gamma-a", "1", "--gamma-d", "1",
             "--eps-tol", "0"})
            .code == 2);
  CHECK(run({"sweep", "--table", table_path().string(), "--gamma-a-grid", "0.2,0.1"}).code ==
        2);

  const auto big = (workdir() / "sys17.json").string();
  REQUIRE(run({"synth", "--nodes", "17", "--out", big}).code == 0);
  CHECK(run({"build-table", "--system", big}).code == 4);

  // An unstable pattern under the error policy.
  const auto unstable = (workdir() / "unstable.json").string();
  write_text_file(unstable, R"({
    "A": [[1.0, 0.0], [0.5, -1.0]], "B": [[1.0, 0.0], [0.0, 1.0]], "D": [1.0, 1.0],
    "Q": [[1.0, 0.0], [0.0, 1.0]], "R": [[1.0, 0.0], [0.0, 1.0]],
    "n": 2, "state_sizes": [1, 1], "input_sizes": [1, 1]})");
  CHECK(run({"build-table", "--system", unstable, "--unstable-policy", "error"}).code == 5);
  CHECK(run({"build-table", "--system", unstable}).code == 0);
}

TEST_CASE("sweep records obey the payoff decomposition and the gamma_d trend") {
  const auto table = build_loss_table(build_synthetic_network(3, ring_graph(3)), {});
  double md = 0.0;
  for (const auto& e : table.entries()) md = std::max(md, e.delta);
  SweepSpec spec;
  spec.gamma_a_values = {0.01 * md};
  for (int i = 0; i < 12; ++i) spec.gamma_d_values.push_back(md * i / 24.0);
  spec.fixed_axis = "gamma_a";
  const auto records = run_sweep(table, spec, {}, 1);
  REQUIRE(records.size() == 12);
  // Expected number of protected nodes; free protection covers everything.
  auto protected_count = [](const SweepRecord& r) {
    return r.gamma_d > 0.0 ? r.E_cost_d / r.gamma_d : 3.0;
  };
  CHECK(records[0].defender_support == "111:1.000000");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    REQUIRE(r.error.empty());
    const double mag = 1.0 + std::abs(r.E_loss);
    CHECK(std::abs(r.E_a - (r.E_loss - r.E_cost_a)) <= 1e-8 * mag);
    CHECK(std::abs(r.E_d - (-r.E_loss - r.E_cost_d)) <= 1e-8 * mag);
    CHECK(r.E_loss_pct == r.E_loss / table.j_lqr() * 100.0);
    if (i > 0) {
      const auto& p = records[i - 1];
      CHECK(r.E_d <= p.E_d + 2.0 * (r.epsilon + p.epsilon) + 1e-12);
      CHECK(protected_count(r) <= protected_count(p) + 1e-6);
    }
  }
}

TEST_CASE("single-point sweep equals solve") {
  std::vector<std::string> point{"--table", table_path().string(), "--gamma-a", "0.003",
                                 "--gamma-d", "0.001", "--seed", "4"};
  std::vector<std::string> solve_args{"solve"};
  solve_args.insert(solve_args.end(), point.begin(), point.end());
  std::vector<std::string> sweep_args{"sweep", "--format", "json"};
  sweep_args.insert(sweep_args.end(), point.begin(), point.end());
  const auto solved = run(solve_args);
  const auto swept = run(sweep_args);
  REQUIRE(solved.code == 0);
  REQUIRE(swept.code == 0);
  const Json s = Json::parse(solved.out);
  const Json rec = Json::parse(swept.out)["records"][0];
  CHECK(rec["E_a"] == s["f_star"]);
  CHECK(rec["E_d"] == s["g_star"]);
  CHECK(rec["E_loss"] == s["expected_loss"]);
  CHECK(rec["epsilon"] == s["epsilon"]);
}
