#include "cpab/enumerate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cpab {

namespace {

void rgs_recurse(const LabelSet& ground, std::size_t max_blocks, std::size_t pos,
                 std::vector<std::size_t>& assignment, std::size_t used,
                 std::vector<SetPartition>& out) {
  if (pos == ground.size()) {
    std::vector<LabelSet> blocks(used);
    for (std::size_t i = 0; i < ground.size(); ++i) blocks[assignment[i]].push_back(ground[i]);
    out.push_back(SetPartition::of_blocks(std::move(blocks)));
    return;
  }
  std::size_t top = used + 1;
  if (max_blocks != kUnbounded) top = std::min(top, max_blocks);
  for (std::size_t j = 0; j < top; ++j) {
    assignment[pos] = j;
    rgs_recurse(ground, max_blocks, pos + 1, assignment, std::max(used, j + 1), out);
  }
}

void tree_product(const LabelSet& ground, const SetPartition& split,
                  const std::vector<std::vector<FragmentationTree>>& options, std::size_t block,
                  std::vector<FragmentationTree>& chosen, std::vector<FragmentationTree>& out) {
  if (block == options.size()) {
    out.push_back(FragmentationTree::compose(ground, split, chosen));
    return;
  }
  for (const auto& subtree : options[block]) {
    chosen.push_back(subtree);
    tree_product(ground, split, options, block + 1, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

std::vector<SetPartition> enumerate_partitions(const LabelSet& ground, std::size_t max_blocks) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  std::vector<SetPartition> out;
  std::vector<std::size_t> assignment(ground.size(), 0);
  rgs_recurse(ground, max_blocks, 0, assignment, 0, out);
  return out;
}

std::vector<SetPartition> enumerate_partitions(int n, std::size_t max_blocks) {
  return enumerate_partitions(range_set(n), max_blocks);
}

std::vector<FragmentationTree> enumerate_trees(const LabelSet& ground, std::size_t max_degree) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  if (ground.size() == 1) return {FragmentationTree::singleton(ground.front())};
  std::vector<FragmentationTree> out;
  for (const auto& split : enumerate_partitions(ground, max_degree)) {
    if (split.block_count() < 2) continue;
    std::vector<std::vector<FragmentationTree>> options;
    options.reserve(split.block_count());
    for (const auto& block : split.blocks()) options.push_back(enumerate_trees(block, max_degree));
    std::vector<FragmentationTree> chosen;
    chosen.reserve(split.block_count());
    tree_product(ground, split, options, 0, chosen, out);
  }
  return out;
}

std::vector<FragmentationTree> enumerate_trees(int n, std::size_t max_degree) {
  return enumerate_trees(range_set(n), max_degree);
}

std::vector<SetPartition> partition_fiber(const SetPartition& p, std::size_t max_blocks) {
  const Label fresh = p.ground().back() + 1;
  std::vector<SetPartition> out;
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    std::vector<LabelSet> blocks = p.blocks();
    blocks[i].push_back(fresh);
    out.push_back(SetPartition::of_blocks(std::move(blocks)));
  }
  if (max_blocks == kUnbounded || p.block_count() < max_blocks) {
    std::vector<LabelSet> blocks = p.blocks();
    blocks.push_back({fresh});
    out.push_back(SetPartition::of_blocks(std::move(blocks)));
  }
  return out;
}

std::vector<FragmentationTree> tree_fiber(const FragmentationTree& t, std::size_t max_degree) {
  LabelSet extended = t.ground();
  extended.push_back(extended.back() + 1);
  std::vector<FragmentationTree> out;
  for (auto& candidate : enumerate_trees(extended, max_degree)) {
    if (candidate.restrict_to(t.ground()) == t) out.push_back(std::move(candidate));
  }
  return out;
}

std::vector<std::map<Label, Label>> all_permutations(const LabelSet& ground) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  LabelSet image = ground;
  std::vector<std::map<Label, Label>> out;
  do {
    std::map<Label, Label> perm;
    for (std::size_t i = 0; i < ground.size(); ++i) perm[ground[i]] = image[i];
    out.push_back(std::move(perm));
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

}  // namespace cpab
