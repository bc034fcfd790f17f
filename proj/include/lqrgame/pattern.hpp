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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace lqrgame {

inline constexpr std::size_t kDefaultMaxNodes = 16;

// Binary tuple over the network nodes. Node 1 is the first character of the
// string form and the most-significant bit of the index. The meaning of a bit
// depends on the role: for attack patterns 0 means attacked, for protection
// patterns 1 means protected, for combined patterns 0 means the node's
// communication is disabled.
class NodePattern {
 public:
  NodePattern() = default;
  explicit NodePattern(std::vector<std::uint8_t> bits);

  static NodePattern from_index(std::uint64_t index, std::size_t n);
  static NodePattern from_string(std::string_view text);
  static NodePattern all_ones(std::size_t n);
  static NodePattern all_zeros(std::size_t n);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t node) const { return bits_[node] != 0; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  std::uint64_t index() const noexcept;
  std::string to_string() const;
  std::size_t count_ones() const noexcept;
  bool is_all_ones() const noexcept { return count_ones() == size(); }

  // Elementwise s <= other.
  bool is_below(const NodePattern& other) const;

  friend bool operator==(const NodePattern&, const NodePattern&) = default;
  friend auto operator<=>(const NodePattern& a, const NodePattern& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

// All 2^n patterns in ascending index order.
std::vector<NodePattern> enumerate_patterns(std::size_t n,
                                            std::size_t max_nodes = kDefaultMaxNodes);

// Bitwise OR: node k ends up disabled only when attacked and unprotected.
NodePattern combine(const NodePattern& attack, const NodePattern& protection);

std::size_t count_attacked(const NodePattern& attack) noexcept;
std::size_t count_protected(const NodePattern& protection) noexcept;

// Per-node state and input block sizes.
class BlockLayout {
 public:
  BlockLayout() = default;
  BlockLayout(std::vector<std::size_t> state_sizes,
              std::vector<std::size_t> input_sizes);

  // n nodes with one state and one input each.
  static BlockLayout uniform(std::size_t n, std::size_t states_per_node = 1,
                             std::size_t inputs_per_node = 1);

  std::size_t nodes() const noexcept { return state_sizes_.size(); }
  std::size_t states() const noexcept { return state_offsets_.back(); }
  std::size_t inputs() const noexcept { return input_offsets_.back(); }

  const std::vector<std::size_t>& state_sizes() const noexcept { return state_sizes_; }
  const std::vector<std::size_t>& input_sizes() const noexcept { return input_sizes_; }
  std::size_t state_offset(std::size_t node) const { return state_offsets_[node]; }
  std::size_t input_offset(std::size_t node) const { return input_offsets_[node]; }

  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;

 private:
  std::vector<std::size_t> state_sizes_;
  std::vector<std::size_t> input_sizes_;
  std::vector<std::size_t> state_offsets_{0};
  std::vector<std::size_t> input_offsets_{0};
};

// r x m zero/one matrix marking which entries of the feedback gain are free.
struct GainMask {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> entries;
  bool self_links_disabled = true;

  Eigen::Index rows() const noexcept { return entries.rows(); }
  Eigen::Index cols() const noexcept { return entries.cols(); }
  bool is_free(Eigen::Index i, Eigen::Index j) const { return entries(i, j) != 0; }
  std::size_t free_count() const;

  // Zero every masked-out entry of k in place.
  void project(Eigen::MatrixXd& k) const;

  // Entrywise this <= other.
  bool is_below(const GainMask& other) const;

  static GainMask full(Eigen::Index rows, Eigen::Index cols);
};

// Block (i, j) of K couples the controller of node i to the states of node j.
// With self links disabled it is zero when either node is disabled; with self
// links intact the diagonal blocks stay free.
GainMask pattern_to_mask(const NodePattern& pattern, const BlockLayout& layout,
                         bool self_links_disabled = true);

}  // namespace lqrgame
