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

#include "lqrgame/pattern.hpp"

#include <algorithm>
#include <numeric>

#include "lqrgame/errors.hpp"

namespace lqrgame {

NodePattern::NodePattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw ValidationError("pattern bits must be 0 or 1");
  }
}

NodePattern NodePattern::from_index(std::uint64_t index, std::size_t n) {
  if (n > 63) throw CapacityError("pattern length exceeds 63 nodes");
  if (n < 64 && (index >> n) != 0) {
    throw DimensionError("pattern index " + std::to_string(index) +
                         " does not fit in " + std::to_string(n) + " nodes");
  }
  std::vector<std::uint8_t> bits(n);
  for (std::size_t k = 0; k < n; ++k) {
    bits[k] = static_cast<std::uint8_t>((index >> (n - 1 - k)) & 1U);
  }
  return NodePattern(std::move(bits));
}

NodePattern NodePattern::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ValidationError("invalid pattern string '" + std::string(text) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (bits.empty()) throw ValidationError("empty pattern string");
  return NodePattern(std::move(bits));
}

NodePattern NodePattern::all_ones(std::size_t n) {
  return NodePattern(std::vector<std::uint8_t>(n, 1));
}

NodePattern NodePattern::all_zeros(std::size_t n) {
  return NodePattern(std::vector<std::uint8_t>(n, 0));
}

std::uint64_t NodePattern::index() const noexcept {
  std::uint64_t value = 0;
  for (auto b : bits_) value = (value << 1) | b;
  return value;
}

std::string NodePattern::to_string() const {
  std::string out(bits_.size(), '0');
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) out[k] = '1';
  }
  return out;
}

std::size_t NodePattern::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool NodePattern::is_below(const NodePattern& other) const {
  if (other.size() != size()) throw DimensionError("pattern length mismatch");
  for (std::size_t k = 0; k < size(); ++k) {
    if (bits_[k] > other.bits_[k]) return false;
  }
  return true;
}

std::vector<NodePattern> enumerate_patterns(std::size_t n, std::size_t max_nodes) {
  if (n == 0) throw ValidationError("node count must be at least 1");
  if (n > max_nodes) {
    throw CapacityError("node count " + std::to_string(n) +
                        " exceeds the enumeration limit of " +
                        std::to_string(max_nodes) + " nodes");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<NodePattern> out;
  out.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m) out.push_back(NodePattern::from_index(m, n));
  return out;
}

NodePattern combine(const NodePattern& attack, const NodePattern& protection) {
  if (attack.size() != protection.size()) {
    throw DimensionError("cannot combine patterns of length " +
                         std::to_string(attack.size()) + " and " +
                         std::to_string(protection.size()));
  }
  std::vector<std::uint8_t> bits(attack.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    bits[k] = attack.bits()[k] | protection.bits()[k];
  }
  return NodePattern(std::move(bits));
}

std::size_t count_attacked(const NodePattern& attack) noexcept {
  return attack.size() - attack.count_ones();
}

std::size_t count_protected(const NodePattern& protection) noexcept {
  return protection.count_ones();
}

BlockLayout::BlockLayout(std::vector<std::size_t> state_sizes,
                         std::vector<std::size_t> input_sizes)
    : state_sizes_(std::move(state_sizes)), input_sizes_(std::move(input_sizes)) {
  if (state_sizes_.empty()) throw ValidationError("layout needs at least one node");
  if (state_sizes_.size() != input_sizes_.size()) {
    throw DimensionError("layout has " + std::to_string(state_sizes_.size()) +
                         " state blocks but " + std::to_string(input_sizes_.size()) +
                         " input blocks");
  }
  for (auto s : state_sizes_) {
    if (s == 0) throw ValidationError("every node needs at least one state");
  }
  state_offsets_.assign(1, 0);
  input_offsets_.assign(1, 0);
  for (std::size_t i = 0; i < state_sizes_.size(); ++i) {
    state_offsets_.push_back(state_offsets_.back() + state_sizes_[i]);
    input_offsets_.push_back(input_offsets_.back() + input_sizes_[i]);
  }
}

BlockLayout BlockLayout::uniform(std::size_t n, std::size_t states_per_node,
                                 std::size_t inputs_per_node) {
  return BlockLayout(std::vector<std::size_t>(n, states_per_node),
                     std::vector<std::size_t>(n, inputs_per_node));
}

std::size_t GainMask::free_count() const {
  return static_cast<std::size_t>((entries.array() != 0).count());
}

void GainMask::project(Eigen::MatrixXd& k) const {
  if (k.rows() != rows() || k.cols() != cols()) {
    throw DimensionError("gain does not match mask dimensions");
  }
  for (Eigen::Index j = 0; j < cols(); ++j) {
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (!entries(i, j)) k(i, j) = 0.0;
    }
  }
}

bool GainMask::is_below(const GainMask& other) const {
  if (other.rows() != rows() || other.cols() != cols()) {
    throw DimensionError("mask dimension mismatch");
  }
  return ((entries.array() <= other.entries.array())).all();
}

GainMask GainMask::full(Eigen::Index rows, Eigen::Index cols) {
  GainMask mask;
  mask.entries.setOnes(rows, cols);
  return mask;
}

GainMask pattern_to_mask(const NodePattern& pattern, const BlockLayout& layout,
                         bool self_links_disabled) {
  if (pattern.size() != layout.nodes()) {
    throw DimensionError("pattern has " + std::to_string(pattern.size()) +
                         " nodes but layout has " + std::to_string(layout.nodes()));
  }
  GainMask mask;
  mask.self_links_disabled = self_links_disabled;
  mask.entries.setZero(static_cast<Eigen::Index>(layout.inputs()),
                       static_cast<Eigen::Index>(layout.states()));
  const std::size_t n = layout.nodes();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool zeroed = !pattern[i] || !pattern[j];
      if (!self_links_disabled && i == j) zeroed = false;
      if (zeroed) continue;
      mask.entries
          .block(static_cast<Eigen::Index>(layout.input_offset(i)),
                 static_cast<Eigen::Index>(layout.state_offset(j)),
                 static_cast<Eigen::Index>(layout.input_sizes()[i]),
                 static_cast<Eigen::Index>(layout.state_sizes()[j]))
          .setOnes();
    }
  }
  return mask;
}

}  // namespace lqrgame
