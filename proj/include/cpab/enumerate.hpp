#pragma once

// Exhaustive enumeration of partitions and fragmentation trees of small
// ground sets, deletion fibers, and related brute-force machinery.
//
// Orders are deterministic and documented: partitions come in restricted
// growth string order; trees recursively by root partition, then by the
// subtree product with the first block varying slowest.

#include <cstddef>
#include <vector>

#include "cpab/fragmentation_tree.hpp"
#include "cpab/set_partition.hpp"

namespace cpab {

inline constexpr std::size_t kUnbounded = 0;

// All partitions of the ground set with at most max_blocks blocks
// (kUnbounded for no limit).
std::vector<SetPartition> enumerate_partitions(const LabelSet& ground, std::size_t max_blocks);
std::vector<SetPartition> enumerate_partitions(int n, std::size_t max_blocks);

// All fragmentation trees with fragmentation degree at most max_degree.
std::vector<FragmentationTree> enumerate_trees(const LabelSet& ground, std::size_t max_degree);
std::vector<FragmentationTree> enumerate_trees(int n, std::size_t max_degree);

// All partitions of ground ∪ {max(ground)+1} whose restriction to ground is
// the given partition, within the block bound.
std::vector<SetPartition> partition_fiber(const SetPartition& p, std::size_t max_blocks);

// Same for trees, within the degree bound; realized by filtering the
// enumeration of the extended ground set.
std::vector<FragmentationTree> tree_fiber(const FragmentationTree& t, std::size_t max_degree);

// Every bijection ground -> ground, as relabeling maps, in lexicographic
// image order.
std::vector<std::map<Label, Label>> all_permutations(const LabelSet& ground);

}  // namespace cpab
