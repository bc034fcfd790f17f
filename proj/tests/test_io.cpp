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

#include <filesystem>
#include <fstream>

#include "lqrgame/errors.hpp"
#include "lqrgame/io.hpp"
#include "lqrgame/models.hpp"

using namespace lqrgame;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lqrgame_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("system round trip") {
  const auto sys = build_synthetic_network(3, ring_graph(3));
  const auto path = scratch("sys.json");
  save_system(sys, path);
  const auto back = load_system(path);
  CHECK((back.A() - sys.A()).norm() == 0.0);
  CHECK((back.B() - sys.B()).norm() == 0.0);
  CHECK((back.D() - sys.D()).norm() == 0.0);
  CHECK((back.Q() - sys.Q()).norm() == 0.0);
  CHECK((back.R() - sys.R()).norm() == 0.0);
  CHECK(back.layout() == sys.layout());
  CHECK(system_to_json(back).dump() == system_to_json(sys).dump());
}

TEST_CASE("flat disturbance vectors are accepted") {
  Json doc = system_to_json(build_synthetic_network(2, line_graph(2)));
  Json flat = Json::array();
  for (const auto& row : doc["D"]) flat.push_back(row[0]);
  doc["D"] = flat;
  CHECK(system_from_json(doc).D()(1) == 1.0);
}

TEST_CASE("malformed systems are validation errors") {
  Json doc = system_to_json(build_synthetic_network(2, line_graph(2)));
  Json bad = doc;
  bad.erase("A");
  CHECK_THROWS_AS(system_from_json(bad), ValidationError);
  bad = doc;
  bad["A"][0][0] = "x";
  CHECK_THROWS_AS(system_from_json(bad), ValidationError);
  bad = doc;
  bad["B"] = Json::array({Json::array({1.0})});
  CHECK_THROWS_AS(system_from_json(bad), Error);
  const auto path = scratch("broken.json");
  write_text_file(path, "{ not json");
  CHECK_THROWS_AS(load_system(path), ValidationError);
  CHECK_THROWS_AS(load_system(scratch("missing.json")), ValidationError);
}

TEST_CASE("loss table round trip keeps every bit") {
  const auto sys = build_synthetic_network(2, line_graph(2));
  auto table = build_loss_table(sys, {});
  table.set_system_hash("00ff");
  const auto path = scratch("table.json");
  save_loss_table(table, path, Json{{"note", "x"}});
  const auto back = load_loss_table(path);
  CHECK(back.system_hash() == "00ff");
  CHECK(back.j_lqr() == table.j_lqr());
  REQUIRE(back.size() == table.size());
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    CHECK(back.delta(i) == table.delta(i));
    CHECK(back.entry(i).status == table.entry(i).status);
  }
  CHECK(read_json_file(path)["config"]["note"] == "x");
}

TEST_CASE("graph spec round trip") {
  GraphSpec spec = complete_graph(3, 0.7);
  spec.seed = 9;
  spec.damping = 0.4;
  const auto back = graph_spec_from_json(graph_spec_to_json(spec));
  CHECK(back.edges.size() == 3);
  CHECK(back.edges[2].weight == 0.7);
  CHECK(back.seed == 9);
  CHECK(back.damping == 0.4);
}

TEST_CASE("hash is stable fnv-1a") {
  // Published FNV-1a 64 test vectors.
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("writes are atomic replacements") {
  const auto path = scratch("atomic.txt");
  write_text_file(path, "one");
  write_text_file(path, "two");
  std::ifstream in(path);
  std::string text;
  std::getline(in, text);
  CHECK(text == "two");
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}
