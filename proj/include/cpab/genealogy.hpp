#pragma once

// Genealogical indexing: finite sequences of positive child positions
// addressing tree vertices, with the empty sequence for the root.

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cpab {

struct GenealogicalIndex {
  std::vector<int> path;  // entries >= 1; empty = root

  static GenealogicalIndex root() { return {}; }

  GenealogicalIndex child(int i) const {
    if (i < 1) throw std::invalid_argument("genealogical child index must be >= 1");
    GenealogicalIndex u = *this;
    u.path.push_back(i);
    return u;
  }

  GenealogicalIndex parent() const {
    if (path.empty()) throw std::invalid_argument("root index has no parent");
    GenealogicalIndex u = *this;
    u.path.pop_back();
    return u;
  }

  std::size_t generation() const { return path.size(); }
  bool is_root() const { return path.empty(); }

  auto operator<=>(const GenealogicalIndex&) const = default;
};

}  // namespace cpab
