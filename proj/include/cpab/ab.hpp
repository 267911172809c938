#pragma once

// Ancestral branching kernels on fragmentation trees: exact transition
// probabilities (flat product and recursive form), the rejection sampler,
// the genealogically indexed construction driven by cut-and-paste, exact
// transition matrices, and discrete-, continuous-time and Poissonian chains.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "cpab/cp.hpp"
#include "cpab/fragmentation_tree.hpp"
#include "cpab/genealogy.hpp"
#include "cpab/paintbox.hpp"
#include "cpab/random.hpp"
#include "cpab/stochastic_matrix.hpp"

namespace cpab {

inline constexpr std::size_t kDefaultRejectCap = 1'000'000;

// A branching kernel: the per-ground-set partition kernel family it is built
// from, plus the degree bound of the tree state space (0 = unbounded).
struct ABKernel {
  PartitionKernelFamily base;
  int k = 0;
};

// The cut-and-paste instance.
ABKernel cp_ab_kernel(const MixtureMeasure& nu, int k);

// Product over non-singleton vertices b of `to` of
//   p_b(rp(from|_b), rp(to|_b)) / (1 - p_b(rp(from|_b), 1_b)).
// Throws std::domain_error if the base kernel puts mass ~1 on a one-block
// state (the conditioning denominator would vanish).
double ab_prob(const FragmentationTree& from, const FragmentationTree& to, const ABKernel& kernel);

// Same value through the root-factor recursion; agrees with ab_prob to
// floating-point accuracy.
double ab_prob_recursive(const FragmentationTree& from, const FragmentationTree& to,
                         const ABKernel& kernel);

// Frontier sampler: split each non-singleton block by the base kernel,
// discarding one-block draws. Deterministic depth-first, least-element-first
// frontier order. Throws std::runtime_error once `reject_cap` consecutive
// one-block draws accumulate (near-degenerate kernel diagnostic).
FragmentationTree ab_sample(const FragmentationTree& from, const ABKernel& kernel, Rng& rng,
                            std::size_t reject_cap = kDefaultRejectCap);

// Genealogically indexed construction: every index u carries an independent
// driver (k cutting paintboxes on the full ground set plus k permutations);
// a trivial split descends to index u1 with a fresh driver. Law equals
// ab_sample with the cut-and-paste kernel.
using DriverSource = std::function<CPDriver(const GenealogicalIndex&)>;

FragmentationTree genealogical_step(const FragmentationTree& from, const DriverSource& driver_at,
                                    std::size_t reject_cap = kDefaultRejectCap);

// Driver source with per-index streams derived from (seed, purpose tag,
// index path); see streams.hpp for the contract.
DriverSource seeded_driver_source(const LabelSet& ground, const MixtureMeasure& nu, int k,
                                  std::uint64_t seed);

FragmentationTree genealogical_sample_seeded(const FragmentationTree& from,
                                             const MixtureMeasure& nu, int k, std::uint64_t seed);

// Convenience wrapper: derives the stream seed from the rng.
FragmentationTree genealogical_sample(const FragmentationTree& from, const MixtureMeasure& nu,
                                      int k, Rng& rng);

// Tabulates ab_prob over enumerate_trees(n, kernel.k). Guarded by an n cap.
StochasticMatrix<FragmentationTree> ab_matrix(int n, const ABKernel& kernel, int n_cap = 6);

struct CTChainConfig {
  double lambda = 1.0;
  double horizon = 1.0;
};

// Right-continuous piecewise-constant path, starting at (0, initial state).
// event_count: jumps for ct_simulate, processed atoms for poisson_simulate.
struct TimedTreePath {
  std::vector<std::pair<double, FragmentationTree>> states;
  std::size_t event_count = 0;
};

// Embedded-jump construction: hold ~ Exp(lambda * (1 - Q(T,T))), next state
// drawn from Q(T, .) conditioned on a change.
TimedTreePath ct_simulate(const FragmentationTree& t0, const ABKernel& kernel,
                          const CTChainConfig& cfg, Rng& rng,
                          std::size_t reject_cap = kDefaultRejectCap);

// Poissonian construction: homogeneous rate-lambda atoms; each atom applies
// one genealogical step with its own lazily generated driver family; the
// state changes only when the candidate differs.
TimedTreePath poisson_simulate(const FragmentationTree& t0, const MixtureMeasure& nu, int k,
                               double lambda, double horizon, std::uint64_t seed,
                               std::size_t reject_cap = kDefaultRejectCap);

}  // namespace cpab
