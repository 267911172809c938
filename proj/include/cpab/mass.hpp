#pragma once

// Conservative mass fragmentations of 1 and their Markov dynamics: the
// matrix-driven one-step transition, empirical frequency estimation, the
// projection from fragmentation trees to mass trees, and the Poissonian
// continuous-time variant.

#include <cstdint>
#include <utility>
#include <vector>

#include "cpab/fragmentation_tree.hpp"
#include "cpab/genealogy.hpp"
#include "cpab/paintbox.hpp"
#include "cpab/random.hpp"

namespace cpab {

// Masses below this threshold are pruned as zero children.
inline constexpr double kMassPrune = 1e-12;

struct MassNode {
  double mass = 0.0;
  std::vector<MassNode> children;  // non-increasing masses
};

class MassFragmentation {
 public:
  // The unfragmented state: root of mass 1, no children.
  static MassFragmentation root_only();

  // Validates: root mass 1, children non-increasing and conservative at
  // every vertex (sum to the parent within 1e-9).
  static MassFragmentation of_root(MassNode root);

  const MassNode& root() const { return root_; }
  std::vector<double> root_children() const;

  // Node addressed by child positions; nullptr when absent.
  const MassNode* node_at(const GenealogicalIndex& u) const;

  void validate(double tol = 1e-9) const;

 private:
  MassNode root_;
};

// #(A ∩ [n]) / n.
double asymptotic_frequency(const LabelSet& a, int n);

// Finite-truncation mass image of a tree on n labels: every vertex mapped to
// #vertex / n, children ranked by mass.
MassFragmentation mass_of_tree(const FragmentationTree& t);

// Ranked column totals of one update matrix: entry (i, m) is
// node_mass * prior[i] * s[i][sigma[i][m]]. Ties rank by column index;
// totals at or below kMassPrune are dropped.
std::vector<double> mass_update_children(double node_mass, const std::vector<double>& prior,
                                         const std::vector<RankedMassPartition>& s,
                                         const std::vector<std::vector<std::uint32_t>>& sigma);

// One transition of the mass chain: at every index u of the new tree,
// children are the ranked column totals of the k x k matrix
// (node mass) * (previous root-child mass i) * s^u_{i, sigma^u_i(m)},
// with fresh s^u ~ nu^(k) and uniform sigma^u per index, truncated at
// `depth` generations. Ties rank by column index. A previous state with no
// recorded root children is treated as the unfragmented vector (1, 0, ...).
MassFragmentation mass_step(const MassFragmentation& prev, const MixtureMeasure& nu, int k,
                            int depth, Rng& rng);

// Stream-split variant; consumes exactly the (seed, driver-mass/driver-perms,
// index) streams of streams.hpp, matching the genealogical tree sampler.
MassFragmentation mass_step_seeded(const MassFragmentation& prev, const MixtureMeasure& nu, int k,
                                   int depth, std::uint64_t seed);

struct TimedMassPath {
  std::vector<std::pair<double, MassFragmentation>> states;
  std::size_t event_count = 0;
};

// Poissonian variant: rate-lambda atoms, one matrix update per atom with a
// fresh per-atom stream family; constant between atoms.
TimedMassPath mass_ct_simulate(const MassFragmentation& m0, const MixtureMeasure& nu, int k,
                               double lambda, double horizon, int depth, std::uint64_t seed);

}  // namespace cpab
