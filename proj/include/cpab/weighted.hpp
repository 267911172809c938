#pragma once

// Fragmentation trees with per-vertex edge lengths: the two-step sampler
// (branching shape, then independent exponential lengths), the transition
// log-density, and the length-summing restriction.
//
// The exponential rate of an edge at vertex b is theta * q_b(pi, 1_b) with
// q = 1 - p; which tree supplies pi is convention-dependent (the algorithm
// step names the freshly sampled tree, the density display names the prior
// one). Both are available behind EdgeRateConvention; the sampler's form is
// the default.

#include <map>
#include <string>

#include "cpab/ab.hpp"
#include "cpab/fragmentation_tree.hpp"
#include "cpab/paintbox.hpp"
#include "cpab/random.hpp"

namespace cpab {

struct WeightedTree {
  FragmentationTree tree;
  std::map<LabelSet, double> lengths;  // vertex -> edge length above it; absent = 0

  explicit WeightedTree(FragmentationTree t, std::map<LabelSet, double> l = {})
      : tree(std::move(t)), lengths(std::move(l)) {}

  double length_of(const LabelSet& vertex) const;
  void validate() const;  // lengths finite, non-negative, keyed by vertices
};

enum class EdgeRateConvention {
  next_tree,      // rate theta * q_b(rp(to|_b), 1_b)
  previous_tree,  // rate theta * q_b(rp(from|_b), 1_b)
};

// Shape from the branching sampler with the cut-and-paste kernel, then one
// independent exponential length per non-singleton vertex (singletons keep
// length 0). Requires a non-degenerate nu so every rate is positive.
WeightedTree weighted_sample(const WeightedTree& from, const MixtureMeasure& nu, int k,
                             double theta, Rng& rng,
                             EdgeRateConvention convention = EdgeRateConvention::next_tree,
                             std::size_t reject_cap = kDefaultRejectCap);

// Sum over non-singleton vertices b of `to` of
//   log theta + log p_b(rp(from|_b), rp(to|_b)) - theta * t_b * q_b(pi, 1_b)
// with pi per the convention. Returns -infinity for a zero-probability shape.
double weighted_log_density(const WeightedTree& from, const WeightedTree& to,
                            const MixtureMeasure& nu, int k, double theta,
                            EdgeRateConvention convention = EdgeRateConvention::next_tree);

// Restriction with length accumulation: vertices collapsing to the same set
// add their lengths, so root-to-leaf path lengths of surviving leaves are
// preserved.
WeightedTree weighted_restrict(const WeightedTree& t, const LabelSet& s);

// Newick serialization; leaves are labeled by their single element, lengths
// printed with 12 significant digits.
std::string to_newick(const WeightedTree& t);

}  // namespace cpab
