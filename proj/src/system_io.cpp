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

#include <fstream>
#include <sstream>

#include "lqrgame/errors.hpp"
#include "lqrgame/io.hpp"

namespace lqrgame {

namespace {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw ValidationError(std::string("missing field '") + name + "'");
  }
  return doc.at(name);
}

double number(const Json& value, const std::string& what) {
  if (!value.is_number()) throw ValidationError(what + " must be a number");
  return value.get<double>();
}

Matrix matrix_from_json(const Json& doc, const char* name) {
  const Json& value = field(doc, name);
  if (!value.is_array()) throw ValidationError(std::string(name) + " must be an array");
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (rows == 0) return Matrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(value.front().is_array() ? value.front().size() : 0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(std::string(name) + " must be a rectangular nested array");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = number(row[static_cast<std::size_t>(j)], std::string(name) + " entry");
    }
  }
  return m;
}

Vector vector_from_json(const Json& doc, const char* name) {
  const Json& value = field(doc, name);
  if (!value.is_array()) throw ValidationError(std::string(name) + " must be an array");
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Json& item = value[i];
    if (item.is_array()) {
      if (item.size() != 1) throw ValidationError(std::string(name) + " must be a column");
      v(static_cast<Eigen::Index>(i)) = number(item[0], std::string(name) + " entry");
    } else {
      v(static_cast<Eigen::Index>(i)) = number(item, std::string(name) + " entry");
    }
  }
  return v;
}

std::vector<std::size_t> sizes_from_json(const Json& doc, const char* name) {
  const Json& value = field(doc, name);
  if (!value.is_array()) throw ValidationError(std::string(name) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& item : value) {
    if (!item.is_number_integer() || item.get<long long>() < 0) {
      throw ValidationError(std::string(name) + " entries must be non-negative integers");
    }
    out.push_back(item.get<std::size_t>());
  }
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

Json system_to_json(const LinearSystem& sys) {
  Json doc;
  doc["n"] = sys.layout().nodes();
  doc["state_sizes"] = sys.layout().state_sizes();
  doc["input_sizes"] = sys.layout().input_sizes();
  doc["A"] = matrix_to_json(sys.A());
  doc["B"] = matrix_to_json(sys.B());
  doc["D"] = matrix_to_json(Matrix(sys.D()));
  doc["Q"] = matrix_to_json(sys.Q());
  doc["R"] = matrix_to_json(sys.R());
  return doc;
}

LinearSystem system_from_json(const Json& doc) {
  const Json& n_field = field(doc, "n");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1) {
    throw ValidationError("n must be a positive integer");
  }
  const auto n = n_field.get<std::size_t>();
  auto state_sizes = sizes_from_json(doc, "state_sizes");
  auto input_sizes = sizes_from_json(doc, "input_sizes");
  if (state_sizes.size() != n || input_sizes.size() != n) {
    throw DimensionError("state_sizes and input_sizes must have n = " + std::to_string(n) +
                         " entries");
  }
  return LinearSystem(matrix_from_json(doc, "A"), matrix_from_json(doc, "B"),
                      vector_from_json(doc, "D"), matrix_from_json(doc, "Q"),
                      matrix_from_json(doc, "R"),
                      BlockLayout(std::move(state_sizes), std::move(input_sizes)));
}

void save_system(const LinearSystem& sys, const std::filesystem::path& path) {
  write_text_file(path, system_to_json(sys).dump(2) + "\n");
}

LinearSystem load_system(const std::filesystem::path& path) {
  return system_from_json(read_json_file(path));
}

GraphSpec graph_spec_from_json(const Json& doc) {
  GraphSpec spec;
  for (const auto& e : field(doc, "edges")) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw ValidationError("edges must be [i, j, w] triples with integer node ids");
    }
    if (e[0].get<long long>() < 1 || e[1].get<long long>() < 1) {
      throw ValidationError("edge node ids are 1-based");
    }
    spec.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                          number(e[2], "edge weight")});
  }
  spec.damping = number(field(doc, "damping"), "damping");
  if (doc.contains("disturbance_node")) {
    const Json& k = doc.at("disturbance_node");
    if (!k.is_number_integer() || k.get<long long>() < 1) {
      throw ValidationError("disturbance_node must be a positive integer");
    }
    spec.disturbance_node = k.get<std::size_t>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) throw ValidationError("seed must be an integer");
    spec.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("grounding")) spec.grounding = number(doc.at("grounding"), "grounding");
  if (doc.contains("jitter")) spec.jitter = number(doc.at("jitter"), "jitter");
  return spec;
}

Json graph_spec_to_json(const GraphSpec& spec) {
  Json edges = Json::array();
  for (const auto& e : spec.edges) edges.push_back(Json::array({e.from, e.to, e.weight}));
  return Json{{"edges", edges},
              {"damping", spec.damping},
              {"disturbance_node", spec.disturbance_node},
              {"seed", spec.seed},
              {"grounding", spec.grounding},
              {"jitter", spec.jitter}};
}

Json loss_table_to_json(const LossTable& table) {
  Json entries = Json::array();
  for (const auto& e : table.entries()) {
    entries.push_back(Json{{"pattern", e.pattern.to_string()},
                           {"delta", e.delta},
                           {"status", to_string(e.status)}});
  }
  return Json{{"system_hash", table.system_hash()},
              {"j_lqr", table.j_lqr()},
              {"entries", std::move(entries)}};
}

LossTable loss_table_from_json(const Json& doc) {
  const Json& hash = field(doc, "system_hash");
  if (!hash.is_string()) throw ValidationError("system_hash must be a string");
  const double j_lqr = number(field(doc, "j_lqr"), "j_lqr");
  const Json& items = field(doc, "entries");
  if (!items.is_array() || items.empty()) throw ValidationError("entries must be a non-empty array");

  std::vector<LossEntry> entries;
  std::size_t nodes = 0;
  for (const auto& item : items) {
    const Json& pattern = field(item, "pattern");
    if (!pattern.is_string()) throw ValidationError("pattern must be a string");
    LossEntry e;
    e.pattern = NodePattern::from_string(pattern.get<std::string>());
    if (nodes == 0) nodes = e.pattern.size();
    if (e.pattern.size() != nodes) throw ValidationError("patterns have inconsistent lengths");
    e.delta = number(field(item, "delta"), "delta");
    const Json& status = field(item, "status");
    if (!status.is_string()) throw ValidationError("status must be a string");
    e.status = parse_loss_status(status.get<std::string>());
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const LossEntry& a, const LossEntry& b) {
    return a.pattern.index() < b.pattern.index();
  });
  return LossTable(nodes, j_lqr, std::move(entries), hash.get<std::string>());
}

void save_loss_table(const LossTable& table, const std::filesystem::path& path,
                     const Json& config) {
  Json doc = loss_table_to_json(table);
  if (!config.empty()) doc["config"] = config;
  write_text_file(path, doc.dump(2) + "\n");
}

LossTable load_loss_table(const std::filesystem::path& path) {
  return loss_table_from_json(read_json_file(path));
}

Json equilibrium_to_json(const EquilibriumSolution& sol, const PayoffMatrices& u,
                         double j_lqr, double support_threshold) {
  auto digest = [&](const MixedStrategy& s) {
    Json out = Json::array();
    for (const auto& e : dominant_support(s, support_threshold)) {
      out.push_back(Json{{"pattern", e.pattern.to_string()}, {"probability", e.probability}});
    }
    return out;
  };
  auto pct = [&](double v) { return v / j_lqr * 100.0; };
  return Json{{"gamma_a", u.gamma_a},
              {"gamma_d", u.gamma_d},
              {"f_star", sol.f_star},
              {"g_star", sol.g_star},
              {"expected_loss", sol.expected_loss},
              {"expected_cost_attacker", sol.expected_cost_attacker},
              {"expected_cost_defender", sol.expected_cost_defender},
              {"expected_loss_pct", pct(sol.expected_loss)},
              {"expected_cost_attacker_pct", pct(sol.expected_cost_attacker)},
              {"expected_cost_defender_pct", pct(sol.expected_cost_defender)},
              {"j_lqr", j_lqr},
              {"epsilon", sol.epsilon},
              {"objective", sol.objective},
              {"payoff_scale", sol.payoff_scale},
              {"restarts_used", sol.restarts_used},
              {"r_star", sol.r_star.probs()},
              {"d_star", sol.d_star.probs()},
              {"attacker_support", digest(sol.r_star)},
              {"defender_support", digest(sol.d_star)}};
}

}  // namespace lqrgame
