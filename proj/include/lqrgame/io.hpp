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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lqrgame/game.hpp"
#include "lqrgame/lqr.hpp"
#include "lqrgame/models.hpp"

namespace lqrgame {

using Json = nlohmann::json;

// System documents: {"n", "state_sizes", "input_sizes", "A", "B", "D", "Q", "R"}
// with matrices as row-major nested arrays.
Json system_to_json(const LinearSystem& sys);
LinearSystem system_from_json(const Json& doc);
void save_system(const LinearSystem& sys, const std::filesystem::path& path);
LinearSystem load_system(const std::filesystem::path& path);

// {"edges": [[i, j, w], ...], "damping", "disturbance_node", "seed"} plus the
// optional "grounding" and "jitter".
GraphSpec graph_spec_from_json(const Json& doc);
Json graph_spec_to_json(const GraphSpec& spec);

// {"system_hash", "j_lqr", "entries": [{"pattern", "delta", "status"}]}
Json loss_table_to_json(const LossTable& table);
LossTable loss_table_from_json(const Json& doc);
void save_loss_table(const LossTable& table, const std::filesystem::path& path,
                     const Json& config = Json::object());
LossTable load_loss_table(const std::filesystem::path& path);

Json equilibrium_to_json(const EquilibriumSolution& sol, const PayoffMatrices& u,
                         double j_lqr, double support_threshold = 0.03);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace lqrgame
