#include "cpab/ab.hpp"

#include <cmath>
#include <stdexcept>

#include "cpab/enumerate.hpp"
#include "cpab/streams.hpp"

namespace cpab {

namespace {
constexpr double kDenomFloor = 1e-15;

double conditioned_factor(const ABKernel& kernel, const SetPartition& from,
                          const SetPartition& to, const LabelSet& ground) {
  const double p = kernel.base.prob(from, to);
  const double stay = kernel.base.prob(from, SetPartition::one_block(ground));
  const double denom = 1.0 - stay;
  if (denom <= kDenomFloor) {
    throw std::domain_error("branching kernel gives probability ~1 to the one-block state");
  }
  return p / denom;
}
}  // namespace

ABKernel cp_ab_kernel(const MixtureMeasure& nu, int k) { return ABKernel{cp_kernel(nu, k), k}; }

double ab_prob(const FragmentationTree& from, const FragmentationTree& to, const ABKernel& kernel) {
  if (from.ground() != to.ground()) throw std::invalid_argument("ab_prob: ground sets differ");
  double q = 1.0;
  for (std::size_t v = 0; v < to.vertex_count(); ++v) {
    const LabelSet& b = to.vertices()[v];
    if (b.size() < 2) continue;
    const SetPartition prior = from.restrict_to(b).root_partition();
    q *= conditioned_factor(kernel, prior, to.child_partition(v), b);
  }
  return q;
}

double ab_prob_recursive(const FragmentationTree& from, const FragmentationTree& to,
                         const ABKernel& kernel) {
  if (from.ground() != to.ground()) throw std::invalid_argument("ab_prob: ground sets differ");
  if (to.ground().size() < 2) return 1.0;
  const SetPartition split = to.root_partition();
  double q = conditioned_factor(kernel, from.root_partition(), split, to.ground());
  for (const auto& block : split.blocks()) {
    if (block.size() < 2) continue;
    q *= ab_prob_recursive(from.restrict_to(block), to.restrict_to(block), kernel);
  }
  return q;
}

FragmentationTree ab_sample(const FragmentationTree& from, const ABKernel& kernel, Rng& rng,
                            std::size_t reject_cap) {
  std::size_t rejects = 0;
  std::function<FragmentationTree(const LabelSet&)> build =
      [&](const LabelSet& block) -> FragmentationTree {
    if (block.size() == 1) return FragmentationTree::singleton(block.front());
    const SetPartition prior = from.restrict_to(block).root_partition();
    SetPartition split = kernel.base.sample(prior, rng);
    while (split.is_one_block()) {
      if (++rejects > reject_cap) {
        throw std::runtime_error(
            "ab_sample: rejection cap exceeded; base kernel is nearly degenerate at the "
            "one-block state");
      }
      split = kernel.base.sample(prior, rng);
    }
    std::vector<FragmentationTree> subtrees;
    subtrees.reserve(split.block_count());
    for (const auto& child : split.blocks()) subtrees.push_back(build(child));
    return FragmentationTree::compose(block, split, std::move(subtrees));
  };
  return build(from.ground());
}

FragmentationTree genealogical_step(const FragmentationTree& from, const DriverSource& driver_at,
                                    std::size_t reject_cap) {
  std::size_t rejects = 0;
  std::function<FragmentationTree(const LabelSet&, const GenealogicalIndex&)> build =
      [&](const LabelSet& block, const GenealogicalIndex& u) -> FragmentationTree {
    if (block.size() == 1) return FragmentationTree::singleton(block.front());
    const SetPartition prior = from.restrict_to(block).root_partition();
    GenealogicalIndex idx = u;
    SetPartition split = cp_apply(prior, driver_at(idx));
    while (split.is_one_block()) {
      if (++rejects > reject_cap) {
        throw std::runtime_error("genealogical_step: rejection cap exceeded");
      }
      idx = idx.child(1);
      split = cp_apply(prior, driver_at(idx));
    }
    std::vector<FragmentationTree> subtrees;
    subtrees.reserve(split.block_count());
    for (std::size_t j = 0; j < split.block_count(); ++j) {
      subtrees.push_back(build(split.blocks()[j], idx.child(static_cast<int>(j) + 1)));
    }
    return FragmentationTree::compose(block, split, std::move(subtrees));
  };
  return build(from.ground(), GenealogicalIndex::root());
}

DriverSource seeded_driver_source(const LabelSet& ground, const MixtureMeasure& nu, int k,
                                  std::uint64_t seed) {
  return [ground, nu, k, seed](const GenealogicalIndex& u) {
    Rng rng_mass(derive_seed(seed, streams::kDriverMass, u.path));
    Rng rng_colors(derive_seed(seed, streams::kDriverColors, u.path));
    Rng rng_perms(derive_seed(seed, streams::kDriverPerms, u.path));
    CPDriver d;
    d.cuts.reserve(static_cast<std::size_t>(k));
    d.perms.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const RankedMassPartition s = sample_mass_partition(nu, rng_mass);
      d.cuts.push_back(paintbox_sample(s, ground, rng_colors));
    }
    for (int i = 0; i < k; ++i) {
      d.perms.push_back(rng_perms.permutation(static_cast<std::size_t>(k)));
    }
    return d;
  };
}

FragmentationTree genealogical_sample_seeded(const FragmentationTree& from,
                                             const MixtureMeasure& nu, int k,
                                             std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("genealogical sampler needs k >= 2");
  if (from.degree() > static_cast<std::size_t>(k)) {
    throw std::invalid_argument("initial tree exceeds the degree bound");
  }
  return genealogical_step(from, seeded_driver_source(from.ground(), nu, k, seed));
}

FragmentationTree genealogical_sample(const FragmentationTree& from, const MixtureMeasure& nu,
                                      int k, Rng& rng) {
  return genealogical_sample_seeded(from, nu, k, rng.next_u64());
}

StochasticMatrix<FragmentationTree> ab_matrix(int n, const ABKernel& kernel, int n_cap) {
  if (n < 1) throw std::invalid_argument("ab_matrix: n must be >= 1");
  if (n > n_cap) throw std::invalid_argument("ab_matrix: state space too large for the given cap");
  std::vector<FragmentationTree> states =
      enumerate_trees(n, kernel.k > 0 ? static_cast<std::size_t>(kernel.k) : kUnbounded);
  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd probs(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      probs(i, j) = ab_prob(states[static_cast<std::size_t>(i)],
                            states[static_cast<std::size_t>(j)], kernel);
    }
  }
  return StochasticMatrix<FragmentationTree>(std::move(states), std::move(probs));
}

TimedTreePath ct_simulate(const FragmentationTree& t0, const ABKernel& kernel,
                          const CTChainConfig& cfg, Rng& rng, std::size_t reject_cap) {
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("ct_simulate: lambda must be positive");
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("ct_simulate: horizon must be positive");
  TimedTreePath path;
  path.states.emplace_back(0.0, t0);
  FragmentationTree current = t0;
  double t = 0.0;
  for (;;) {
    const double stay = ab_prob(current, current, kernel);
    const double rate = cfg.lambda * (1.0 - stay);
    if (rate <= 0.0) break;  // conditioned chain has nowhere to go
    t += rng.exponential(rate);
    if (t > cfg.horizon) break;
    FragmentationTree next = ab_sample(current, kernel, rng, reject_cap);
    std::size_t tries = 0;
    while (next == current) {
      if (++tries > reject_cap) {
        throw std::runtime_error("ct_simulate: conditioned-jump rejection cap exceeded");
      }
      next = ab_sample(current, kernel, rng, reject_cap);
    }
    current = std::move(next);
    path.states.emplace_back(t, current);
    ++path.event_count;
  }
  return path;
}

TimedTreePath poisson_simulate(const FragmentationTree& t0, const MixtureMeasure& nu, int k,
                               double lambda, double horizon, std::uint64_t seed,
                               std::size_t reject_cap) {
  if (!(lambda > 0.0)) throw std::invalid_argument("poisson_simulate: lambda must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("poisson_simulate: horizon must be positive");
  TimedTreePath path;
  path.states.emplace_back(0.0, t0);
  FragmentationTree current = t0;
  Rng atom_clock(derive_seed(seed, streams::kAtomTimes));
  double t = 0.0;
  for (std::uint64_t atom = 0;; ++atom) {
    t += atom_clock.exponential(lambda);
    if (t > horizon) break;
    ++path.event_count;
    const std::uint64_t atom_seed = derive_seed(seed, streams::kAtomDriver, atom);
    FragmentationTree candidate = genealogical_step(
        current, seeded_driver_source(current.ground(), nu, k, atom_seed), reject_cap);
    if (!(candidate == current)) {
      current = std::move(candidate);
      path.states.emplace_back(t, current);
    }
  }
  return path;
}

}  // namespace cpab
