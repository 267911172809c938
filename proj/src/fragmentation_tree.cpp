#include "cpab/fragmentation_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpab {

bool vertex_order(const LabelSet& a, const LabelSet& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

FragmentationTree FragmentationTree::from_vertices(std::vector<LabelSet> vertices) {
  if (vertices.empty()) throw std::invalid_argument("tree needs at least one vertex");
  for (auto& v : vertices) {
    if (v.empty()) throw std::invalid_argument("tree vertex must be non-empty");
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
      throw std::invalid_argument("tree vertex contains duplicate labels");
    }
  }
  std::sort(vertices.begin(), vertices.end(), vertex_order);
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  FragmentationTree t;
  t.vertices_ = std::move(vertices);
  t.ground_ = t.vertices_.front();
  t.build_relations();
  return t;
}

void FragmentationTree::build_relations() {
  const std::size_t n_vert = vertices_.size();
  parent_.assign(n_vert, npos);
  children_.assign(n_vert, {});

  // Union of all vertices must equal the root.
  LabelSet all;
  for (const auto& v : vertices_) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all != ground_) {
    throw std::invalid_argument("tree root must contain every vertex");
  }

  // Per-element containment chains; sorted small-to-large they must be
  // strictly nested, starting at the singleton.
  std::map<Label, std::vector<std::size_t>> chains;
  for (std::size_t i = 0; i < n_vert; ++i) {
    for (Label x : vertices_[i]) chains[x].push_back(i);
  }
  for (auto& [x, chain] : chains) {
    std::sort(chain.begin(), chain.end(), [&](std::size_t a, std::size_t b) {
      return vertices_[a].size() < vertices_[b].size();
    });
    if (vertices_[chain.front()].size() != 1) {
      throw std::invalid_argument("tree must contain every singleton of its ground set");
    }
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      const LabelSet& small = vertices_[chain[j]];
      const LabelSet& big = vertices_[chain[j + 1]];
      if (small.size() >= big.size() || !is_subset(small, big)) {
        throw std::invalid_argument("tree vertices are not laminar");
      }
    }
    // Parent of each chain entry is the next one up.
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      std::size_t& p = parent_[chain[j]];
      if (p == npos) p = chain[j + 1];
    }
  }

  for (std::size_t i = 1; i < n_vert; ++i) {
    if (parent_[i] == npos) throw std::invalid_argument("disconnected tree vertex");
    children_[parent_[i]].push_back(i);
  }
  for (auto& kids : children_) {
    std::sort(kids.begin(), kids.end(),
              [&](std::size_t a, std::size_t b) { return vertices_[a].front() < vertices_[b].front(); });
  }
}

FragmentationTree FragmentationTree::singleton(Label x) {
  FragmentationTree t;
  t.vertices_ = {{x}};
  t.ground_ = {x};
  t.parent_ = {npos};
  t.children_ = {{}};
  return t;
}

FragmentationTree FragmentationTree::compose(const LabelSet& ground, const SetPartition& root_split,
                                             std::vector<FragmentationTree> subtrees) {
  if (root_split.ground() != ground) {
    throw std::invalid_argument("compose: root split must partition the ground set");
  }
  if (root_split.block_count() < 2) {
    throw std::invalid_argument("compose: root split must have at least two blocks");
  }
  if (subtrees.size() != root_split.block_count()) {
    throw std::invalid_argument("compose: one subtree per root block required");
  }
  std::vector<LabelSet> vertices;
  vertices.push_back(ground);
  for (std::size_t i = 0; i < subtrees.size(); ++i) {
    if (subtrees[i].ground() != root_split.blocks()[i]) {
      throw std::invalid_argument("compose: subtree ground mismatch");
    }
    for (auto& v : subtrees[i].vertices_) vertices.push_back(std::move(v));
  }
  std::sort(vertices.begin(), vertices.end(), vertex_order);

  FragmentationTree t;
  t.vertices_ = std::move(vertices);
  t.ground_ = ground;
  t.build_relations();
  return t;
}

FragmentationTree FragmentationTree::caterpillar(const LabelSet& ground) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  std::vector<LabelSet> vertices;
  for (std::size_t m = ground.size(); m >= 2; --m) {
    vertices.emplace_back(ground.begin(), ground.begin() + static_cast<std::ptrdiff_t>(m));
  }
  for (Label x : ground) vertices.push_back({x});
  return from_vertices(std::move(vertices));
}

FragmentationTree FragmentationTree::star(const LabelSet& ground) {
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  std::vector<LabelSet> vertices;
  vertices.push_back(ground);
  for (Label x : ground) vertices.push_back({x});
  return from_vertices(std::move(vertices));
}

SetPartition FragmentationTree::child_partition(std::size_t v) const {
  if (children_[v].empty()) throw std::invalid_argument("singleton vertex has no child partition");
  std::vector<LabelSet> blocks;
  blocks.reserve(children_[v].size());
  for (std::size_t c : children_[v]) blocks.push_back(vertices_[c]);
  return SetPartition::of_blocks(std::move(blocks));
}

SetPartition FragmentationTree::root_partition() const {
  if (ground_.size() < 2) {
    throw std::invalid_argument("root partition undefined on a singleton ground set");
  }
  return child_partition(0);
}

std::size_t FragmentationTree::degree() const {
  std::size_t d = 0;
  for (const auto& kids : children_) d = std::max(d, kids.size());
  return d;
}

FragmentationTree FragmentationTree::restrict_to(const LabelSet& s) const {
  if (!is_valid_label_set(s)) throw std::invalid_argument("restrict_to: invalid subset");
  if (!is_subset(s, ground_)) throw std::invalid_argument("restrict_to: not a subset of ground");
  std::vector<LabelSet> vertices;
  vertices.reserve(vertices_.size());
  for (const auto& v : vertices_) {
    LabelSet cut = intersect(v, s);
    if (!cut.empty()) vertices.push_back(std::move(cut));
  }
  return from_vertices(std::move(vertices));
}

FragmentationTree FragmentationTree::relabeled(const std::map<Label, Label>& injection) const {
  std::vector<LabelSet> vertices;
  vertices.reserve(vertices_.size());
  for (const auto& v : vertices_) {
    LabelSet nv;
    nv.reserve(v.size());
    for (Label x : v) {
      auto it = injection.find(x);
      if (it == injection.end()) throw std::invalid_argument("relabeled: map not total on ground");
      nv.push_back(it->second);
    }
    std::sort(nv.begin(), nv.end());
    if (std::adjacent_find(nv.begin(), nv.end()) != nv.end()) {
      throw std::invalid_argument("relabeled: map not injective");
    }
    vertices.push_back(std::move(nv));
  }
  return from_vertices(std::move(vertices));
}

double tree_distance(const FragmentationTree& a, const FragmentationTree& b) {
  if (a.ground() != b.ground()) throw std::invalid_argument("tree_distance: mismatched grounds");
  if (a == b) return 0.0;
  const LabelSet& ground = a.ground();
  std::size_t agree = 1;  // restrictions to a single label always coincide
  for (std::size_t m = 2; m <= ground.size(); ++m) {
    LabelSet prefix(ground.begin(), ground.begin() + static_cast<std::ptrdiff_t>(m));
    if (a.restrict_to(prefix) == b.restrict_to(prefix)) {
      agree = m;
    } else {
      break;
    }
  }
  return 1.0 / static_cast<double>(agree);
}

}  // namespace cpab
