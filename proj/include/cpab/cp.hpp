#pragma once

// Cut-and-paste transitions on set partitions with a bounded number of
// blocks: the exact transition probability, the deterministic column-total
// map driven by cutting partitions and permutations, samplers (both the
// paintbox-driven instance and the general label-measure algorithm), and
// tabulated transition matrices over enumerated state spaces.

#include <cstddef>
#include <functional>
#include <string>

#include "cpab/paintbox.hpp"
#include "cpab/random.hpp"
#include "cpab/set_partition.hpp"
#include "cpab/stochastic_matrix.hpp"

namespace cpab {

// A pluggable family {p_b} of partition kernels, defined on every finite
// ground set. The family must satisfy p_b(., 1_b) < 1 and each p_b(from, .)
// must sum to 1 over the bounded state space of its ground set.
struct PartitionKernelFamily {
  std::function<double(const SetPartition& from, const SetPartition& to)> prob;
  std::function<SetPartition(const SetPartition& from, Rng& rng)> sample;
  int max_blocks = 0;  // 0 = unbounded
  std::string description;
};

// Driver for one deterministic cut-and-paste application: k cutting
// partitions (on supersets of the blocks they cut) and k permutations of
// {0, ..., k-1}.
struct CPDriver {
  std::vector<SetPartition> cuts;
  std::vector<std::vector<std::uint32_t>> perms;

  std::size_t k() const { return cuts.size(); }
};

// Transition probability: prefactor k!/(k-#to)! times, per block b of
// `from`, (k - #to|_b)!/k! * rho_nu(to|_b). Returns 0 when #to > k; throws
// when #from > k.
double cp_prob(const SetPartition& from, const SetPartition& to, const MixtureMeasure& nu, int k);

// Column totals of the block/cut intersection matrix: block j of the result
// is the union over i of from_i ∩ cuts_i[perm_i(j)], empties dropped.
SetPartition cp_apply(const SetPartition& from, const CPDriver& driver);

// Fresh driver: k i.i.d. rho_nu paintboxes on `ground` plus k uniform
// permutations of {0, ..., k-1}.
CPDriver sample_cp_driver(const LabelSet& ground, const MixtureMeasure& nu, int k, Rng& rng);

// One cut-and-paste transition: sample a driver on ground(from) and apply it.
SetPartition cp_sample(const SetPartition& from, const MixtureMeasure& nu, int k, Rng& rng);

// The general algorithm: cut each block independently with `cutter`, label
// the pieces by a size-biased sample from mu permuted uniformly, then paste
// equal labels. With uniform mu on [k] and rho_nu cutters this reduces in
// law to cp_sample.
SetPartition general_cp_sample(
    const SetPartition& from,
    const std::function<SetPartition(const LabelSet& block, Rng& rng)>& cutter,
    const LabelMeasure& mu, Rng& rng);

// Tabulates cp_prob over enumerate_partitions(n, k). Guarded by an n cap.
StochasticMatrix<SetPartition> cp_matrix(int n, int k, const MixtureMeasure& nu, int n_cap = 10);

// The cut-and-paste instance of the pluggable kernel family.
PartitionKernelFamily cp_kernel(const MixtureMeasure& nu, int k);

}  // namespace cpab
