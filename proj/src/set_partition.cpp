#include "cpab/set_partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cpab {

LabelSet make_label_set(std::vector<Label> labels) {
  if (labels.empty()) throw std::invalid_argument("label set must be non-empty");
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw std::invalid_argument("label set contains duplicates");
  }
  return labels;
}

LabelSet range_set(int n) {
  if (n < 1) throw std::invalid_argument("range_set: n must be >= 1");
  LabelSet s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 1);
  return s;
}

bool is_valid_label_set(const LabelSet& s) {
  if (s.empty()) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i - 1] >= s[i]) return false;
  }
  return true;
}

bool is_subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

LabelSet intersect(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SetPartition SetPartition::of_blocks(std::vector<LabelSet> blocks) {
  if (blocks.empty()) throw std::invalid_argument("partition needs at least one block");
  std::size_t total = 0;
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition block must be non-empty");
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) {
      throw std::invalid_argument("partition block contains duplicates");
    }
    total += b.size();
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const LabelSet& a, const LabelSet& b) { return a.front() < b.front(); });
  LabelSet ground;
  ground.reserve(total);
  for (const auto& b : blocks) ground.insert(ground.end(), b.begin(), b.end());
  std::sort(ground.begin(), ground.end());
  if (std::adjacent_find(ground.begin(), ground.end()) != ground.end()) {
    throw std::invalid_argument("partition blocks overlap");
  }
  return SetPartition(std::move(ground), std::move(blocks));
}

SetPartition SetPartition::one_block(const LabelSet& ground) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  return SetPartition(ground, {ground});
}

SetPartition SetPartition::singletons(const LabelSet& ground) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  std::vector<LabelSet> blocks;
  blocks.reserve(ground.size());
  for (Label x : ground) blocks.push_back({x});
  return SetPartition(ground, std::move(blocks));
}

SetPartition SetPartition::leaf_split(const LabelSet& ground, Label x) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  if (ground.size() < 2) throw std::invalid_argument("leaf_split needs at least two labels");
  if (!std::binary_search(ground.begin(), ground.end(), x)) {
    throw std::invalid_argument("leaf_split: label not in ground set");
  }
  LabelSet rest;
  rest.reserve(ground.size() - 1);
  for (Label y : ground) {
    if (y != x) rest.push_back(y);
  }
  return of_blocks({std::move(rest), {x}});
}

std::size_t SetPartition::block_index_of(Label x) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), x)) return i;
  }
  throw std::invalid_argument("label not in ground set");
}

SetPartition SetPartition::restrict_to(const LabelSet& s) const {
  if (!is_valid_label_set(s)) throw std::invalid_argument("restrict_to: invalid subset");
  if (!is_subset(s, ground_)) throw std::invalid_argument("restrict_to: not a subset of ground");
  std::vector<LabelSet> blocks;
  for (const auto& b : blocks_) {
    LabelSet cut = intersect(b, s);
    if (!cut.empty()) blocks.push_back(std::move(cut));
  }
  return of_blocks(std::move(blocks));
}

SetPartition SetPartition::relabeled(const std::map<Label, Label>& injection) const {
  std::vector<LabelSet> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    LabelSet nb;
    nb.reserve(b.size());
    for (Label x : b) {
      auto it = injection.find(x);
      if (it == injection.end()) throw std::invalid_argument("relabeled: map not total on ground");
      nb.push_back(it->second);
    }
    blocks.push_back(std::move(nb));
  }
  SetPartition out = of_blocks(std::move(blocks));  // overlap check catches non-injective maps
  if (out.ground().size() != ground_.size()) {
    throw std::invalid_argument("relabeled: map not injective");
  }
  return out;
}

}  // namespace cpab
