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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqrgame/game.hpp"
#include "lqrgame/io.hpp"

namespace lqrgame {

inline constexpr std::string_view kSweepCsvVersion = "lqrgame-sweep-csv v1";

struct SweepSpec {
  std::vector<double> gamma_a_values;
  std::vector<double> gamma_d_values;
  std::optional<std::string> fixed_axis;  // "gamma_a" or "gamma_d" for 1-D sweeps

  // Throws ValidationError unless both lists are non-empty, non-negative,
  // strictly ascending.
  void validate() const;
};

// "0.1", "0,0.01,0.1" or "lin:<lo>:<hi>:<count>".
std::vector<double> parse_grid(const std::string& text);

struct SweepRecord {
  double gamma_a = 0.0;
  double gamma_d = 0.0;
  double E_a = 0.0;
  double E_d = 0.0;
  double E_loss = 0.0;
  double E_cost_a = 0.0;
  double E_cost_d = 0.0;
  double E_a_pct = 0.0;
  double E_d_pct = 0.0;
  double E_loss_pct = 0.0;
  double E_cost_a_pct = 0.0;
  double E_cost_d_pct = 0.0;
  std::string attacker_support;
  std::string defender_support;
  double epsilon = 0.0;
  std::string error;  // empty when the point solved
};

SweepRecord make_sweep_record(const EquilibriumSolution& sol, double gamma_a, double gamma_d,
                              double j_lqr, double support_threshold = 0.03);

// Solves every grid point independently (gamma_a outer, gamma_d inner).
// Per-point failures land in the record's error field.
std::vector<SweepRecord> run_sweep(const LossTable& table, const SweepSpec& spec,
                                   const SolverOptions& opts, unsigned threads = 1);

std::string sweep_csv(const std::vector<SweepRecord>& records, const Json& config);
Json sweep_json(const std::vector<SweepRecord>& records, const Json& config);

// Content hash keying the loss-table cache.
std::string loss_table_key(const LinearSystem& sys, const LossTableOptions& options);

// Entry point of the command-line tool. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lqrgame
