#pragma once

// Fragmentation trees: laminar families of label sets containing the ground
// set (root) and every singleton. Internal vertices split into >= 2 children.
//
// Vertices are stored canonically, sorted by (size descending, least element
// ascending); within a laminar family this order is total, so value equality
// is structural equality. Parent/children relations are derived once at
// construction from the per-element containment chains.

#include <compare>
#include <cstddef>
#include <map>
#include <vector>

#include "cpab/set_partition.hpp"

namespace cpab {

class FragmentationTree {
 public:
  // Full validation: deduplicates, checks the root and all singletons are
  // present and that the family is laminar. Throws std::invalid_argument.
  static FragmentationTree from_vertices(std::vector<LabelSet> vertices);

  // Tree on a single label: the one-vertex family {{x}}.
  static FragmentationTree singleton(Label x);

  // Assembles root + subtrees whose grounds are the blocks of root_split.
  // Structure is valid by construction, so only cheap shape checks run.
  static FragmentationTree compose(const LabelSet& ground, const SetPartition& root_split,
                                   std::vector<FragmentationTree> subtrees);

  // Left caterpillar on the ground set: binary, nested prefixes.
  static FragmentationTree caterpillar(const LabelSet& ground);

  // Star: root splits directly into singletons.
  static FragmentationTree star(const LabelSet& ground);

  const LabelSet& ground() const { return ground_; }
  const std::vector<LabelSet>& vertices() const { return vertices_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  const LabelSet& root() const { return vertices_.front(); }
  bool is_leaf(std::size_t v) const { return children_[v].empty(); }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t parent_of(std::size_t v) const { return parent_[v]; }
  const std::vector<std::size_t>& children_of(std::size_t v) const { return children_[v]; }

  // frag(t): the children of vertex v as a partition of it; v must be
  // non-singleton.
  SetPartition child_partition(std::size_t v) const;

  // Pi_T, the root partition; requires a ground set of size >= 2.
  SetPartition root_partition() const;

  // Maximum number of children over all vertices (0 for a singleton tree).
  std::size_t degree() const;

  // T|_S, the reduced subtree: intersect every vertex with S, drop empties,
  // deduplicate. S must be a non-empty subset of the ground set.
  FragmentationTree restrict_to(const LabelSet& s) const;

  FragmentationTree relabeled(const std::map<Label, Label>& injection) const;

  bool operator==(const FragmentationTree& o) const { return vertices_ == o.vertices_; }
  std::strong_ordering operator<=>(const FragmentationTree& o) const {
    return vertices_ <=> o.vertices_;
  }

 private:
  FragmentationTree() = default;
  void build_relations();  // fills parent_/children_, validates laminarity

  LabelSet ground_;
  std::vector<LabelSet> vertices_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
};

// Canonical vertex order: size descending, then lexicographic.
bool vertex_order(const LabelSet& a, const LabelSet& b);

// 1 / max{m : T|prefix_m = T'|prefix_m}, 0 when the trees are equal;
// prefixes are taken through the common sorted ground set. Throws on
// mismatched grounds.
double tree_distance(const FragmentationTree& a, const FragmentationTree& b);

}  // namespace cpab
