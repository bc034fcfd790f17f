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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lqrgame/errors.hpp"
#include "lqrgame/game.hpp"
#include "lqrgame/parallel.hpp"

namespace lqrgame {

std::string to_string(LossStatus status) {
  return status == LossStatus::kExact ? "exact" : "unstable-capped";
}

LossStatus parse_loss_status(const std::string& text) {
  if (text == "exact") return LossStatus::kExact;
  if (text == "unstable-capped") return LossStatus::kUnstableCapped;
  throw ValidationError("unknown loss status '" + text + "'");
}

UnstablePolicy UnstablePolicy::parse(const std::string& text) {
  UnstablePolicy policy;
  if (text == "error") {
    policy.kind = Kind::kError;
    return policy;
  }
  if (text == "cap") return policy;
  if (text.rfind("cap:", 0) == 0) {
    const std::string value = text.substr(4);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v) ||
        v < 0.0) {
      throw ValidationError("invalid unstable-pattern cap '" + value + "'");
    }
    policy.cap_value = v;
    return policy;
  }
  throw ValidationError("unstable policy must be 'cap', 'cap:<value>' or 'error', got '" +
                        text + "'");
}

std::string UnstablePolicy::to_string() const {
  if (kind == Kind::kError) return "error";
  if (!cap_value) return "cap";
  char buf[64];
  std::snprintf(buf, sizeof buf, "cap:%.17g", *cap_value);
  return buf;
}

LossTable::LossTable(std::size_t nodes, double j_lqr, std::vector<LossEntry> entries,
                     std::string system_hash)
    : nodes_(nodes),
      j_lqr_(j_lqr),
      entries_(std::move(entries)),
      system_hash_(std::move(system_hash)) {
  if (nodes_ == 0 || nodes_ > 63) throw ValidationError("loss table node count out of range");
  if (entries_.size() != (std::size_t{1} << nodes_)) {
    throw DimensionError("loss table for " + std::to_string(nodes_) + " nodes needs " +
                         std::to_string(std::size_t{1} << nodes_) + " entries, got " +
                         std::to_string(entries_.size()));
  }
  if (!(j_lqr_ > 0.0) || !std::isfinite(j_lqr_)) {
    throw ValidationError("loss table j_lqr must be positive and finite");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.pattern.size() != nodes_ || e.pattern.index() != i) {
      throw ValidationError("loss table entry " + std::to_string(i) +
                            " is out of order or has the wrong length");
    }
    if (!(e.delta >= 0.0) || !std::isfinite(e.delta)) {
      throw ValidationError("loss for pattern " + e.pattern.to_string() +
                            " must be finite and non-negative");
    }
  }
}

const LossEntry& LossTable::entry(const NodePattern& s) const {
  if (s.size() != nodes_) throw DimensionError("pattern length does not match loss table");
  return entries_[s.index()];
}

double LossTable::fractional(std::uint64_t index) const {
  return entries_.at(index).delta / j_lqr_ * 100.0;
}

LossTable build_loss_table(const LinearSystem& sys, const LossTableOptions& options) {
  options.optimizer.validate();
  const std::size_t n = sys.layout().nodes();
  const auto patterns = enumerate_patterns(n, options.max_nodes);
  const std::size_t count = patterns.size();

  const RiccatiSolution lqr = solve_riccati(sys);
  const double j_lqr = sys.D().dot(lqr.P * sys.D());

  std::vector<std::optional<StructuredSolution>> solved(count);
  std::vector<LossEntry> entries(count);
  for (std::size_t i = 0; i < count; ++i) entries[i].pattern = patterns[i];

  std::vector<std::vector<std::size_t>> levels(n + 1);
  for (std::size_t i = 0; i < count; ++i) levels[patterns[i].count_ones()].push_back(i);

  for (std::size_t level = 0; level <= n; ++level) {
    const auto& members = levels[level];
    parallel_for(members.size(), options.threads, [&](std::size_t slot) {
      const std::size_t idx = members[slot];
      const NodePattern& s = patterns[idx];
      LossEntry& entry = entries[idx];
      if (s.is_all_ones()) {
        StructuredSolution sol;
        sol.K_star = lqr.K;
        sol.J_star = j_lqr;
        sol.converged = true;
        sol.initializer = "lqr";
        entry.cost = j_lqr;
        entry.initializer = "lqr";
        solved[idx] = std::move(sol);
        return;
      }
      StructuredProblem problem{sys, pattern_to_mask(s, sys.layout(), options.self_links_disabled),
                                options.optimizer, {}};
      for (std::size_t bit = 0; bit < n; ++bit) {
        if (!s[bit]) continue;
        const std::size_t below = idx & ~(std::size_t{1} << (n - 1 - bit));
        if (solved[below]) problem.warm_starts.push_back(solved[below]->K_star);
      }
      try {
        StructuredSolution sol = optimize_structured(problem);
        entry.cost = sol.J_star;
        entry.delta = std::max(0.0, sol.J_star - j_lqr);
        entry.converged = sol.converged;
        entry.iterations = sol.iterations;
        entry.initializer = sol.initializer;
        solved[idx] = std::move(sol);
      } catch (const StabilizabilityError&) {
        if (options.unstable_policy.kind == UnstablePolicy::Kind::kError) {
          throw StabilizabilityError("pattern " + s.to_string() +
                                     " admits no stabilizing structured gain");
        }
        entry.status = LossStatus::kUnstableCapped;
        entry.cost = std::numeric_limits<double>::infinity();
        entry.converged = false;
      }
    });
  }

  double max_finite = 0.0;
  for (const auto& e : entries) {
    if (e.status == LossStatus::kExact) max_finite = std::max(max_finite, e.delta);
  }
  const auto& policy = options.unstable_policy;
  const double cap = policy.cap_value
                         ? *policy.cap_value
                         : policy.cap_multiplier * (max_finite > 0.0 ? max_finite : j_lqr);
  for (auto& e : entries) {
    if (e.status == LossStatus::kUnstableCapped) e.delta = cap;
  }
  return LossTable(n, j_lqr, std::move(entries));
}

}  // namespace lqrgame
