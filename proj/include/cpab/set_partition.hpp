#pragma once

// Canonical set partitions of finite label sets.
//
// A ground set is a sorted vector of distinct non-negative labels. A
// SetPartition stores its blocks in canonical form: each block sorted
// ascending, blocks ordered by least element. Canonical form makes
// value equality the same as mathematical equality, which everything
// downstream (enumeration, matrices, histograms) relies on.

#include <compare>
#include <cstddef>
#include <map>
#include <vector>

namespace cpab {

using Label = int;
using LabelSet = std::vector<Label>;  // sorted, distinct

// Sorts and checks distinctness; throws std::invalid_argument on duplicates
// or an empty input.
LabelSet make_label_set(std::vector<Label> labels);

// {1, ..., n}
LabelSet range_set(int n);

bool is_valid_label_set(const LabelSet& s);
bool is_subset(const LabelSet& a, const LabelSet& b);
LabelSet intersect(const LabelSet& a, const LabelSet& b);

class SetPartition {
 public:
  // Canonicalizes the given blocks. Throws on empty input, empty blocks or
  // overlapping blocks.
  static SetPartition of_blocks(std::vector<LabelSet> blocks);

  // 1_S, the one-block partition of S.
  static SetPartition one_block(const LabelSet& ground);

  // The all-singletons partition of S.
  static SetPartition singletons(const LabelSet& ground);

  // e_{S^x} = {S \ {x}, {x}}; x must lie in the ground set, which must have
  // at least two elements.
  static SetPartition leaf_split(const LabelSet& ground, Label x);

  const LabelSet& ground() const { return ground_; }
  const std::vector<LabelSet>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t size() const { return ground_.size(); }
  bool is_one_block() const { return blocks_.size() == 1; }

  // Index of the block containing x; throws if x is not in the ground set.
  std::size_t block_index_of(Label x) const;

  // B|_S: intersect every block with S, drop empties. S must be a non-empty
  // subset of the ground set.
  SetPartition restrict_to(const LabelSet& s) const;

  // Relabels through an injection defined on the whole ground set and
  // re-canonicalizes. Throws if the map is partial or non-injective.
  SetPartition relabeled(const std::map<Label, Label>& injection) const;

  auto operator<=>(const SetPartition&) const = default;

 private:
  SetPartition(LabelSet ground, std::vector<LabelSet> blocks)
      : ground_(std::move(ground)), blocks_(std::move(blocks)) {}

  LabelSet ground_;
  std::vector<LabelSet> blocks_;
};

}  // namespace cpab
