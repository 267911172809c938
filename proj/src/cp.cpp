#include "cpab/cp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cpab/enumerate.hpp"

namespace cpab {

namespace {
double falling_factorial(int k, int r) {
  double out = 1.0;
  for (int i = 0; i < r; ++i) out *= static_cast<double>(k - i);
  return out;
}
}  // namespace

double cp_prob(const SetPartition& from, const SetPartition& to, const MixtureMeasure& nu, int k) {
  if (k < 1) throw std::invalid_argument("cp_prob: k must be >= 1");
  if (from.ground() != to.ground()) throw std::invalid_argument("cp_prob: ground sets differ");
  if (from.block_count() > static_cast<std::size_t>(k)) {
    throw std::invalid_argument("cp_prob: from-state has more than k blocks");
  }
  if (to.block_count() > static_cast<std::size_t>(k)) return 0.0;

  double p = falling_factorial(k, static_cast<int>(to.block_count()));
  for (const auto& b : from.blocks()) {
    const SetPartition cut = to.restrict_to(b);
    p *= rho_nu_prob(nu, cut) / falling_factorial(k, static_cast<int>(cut.block_count()));
  }
  return p;
}

SetPartition cp_apply(const SetPartition& from, const CPDriver& driver) {
  const std::size_t k = driver.k();
  if (driver.perms.size() != k) throw std::invalid_argument("cp_apply: driver size mismatch");
  if (from.block_count() > k) {
    throw std::invalid_argument("cp_apply: more blocks than driver rows");
  }
  for (std::size_t i = 0; i < from.block_count(); ++i) {
    if (!is_subset(from.blocks()[i], driver.cuts[i].ground())) {
      throw std::invalid_argument("cp_apply: cut partition must cover the block it cuts");
    }
    if (driver.perms[i].size() != k) {
      throw std::invalid_argument("cp_apply: permutation must act on k columns");
    }
    std::vector<bool> hit(k, false);
    for (std::uint32_t image : driver.perms[i]) {
      if (image >= k || hit[image]) {
        throw std::invalid_argument("cp_apply: driver permutation is not a bijection of [k]");
      }
      hit[image] = true;
    }
  }

  std::vector<LabelSet> columns(k);
  for (std::size_t i = 0; i < from.block_count(); ++i) {
    const auto& cut_blocks = driver.cuts[i].blocks();
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint32_t m = driver.perms[i][j];
      if (m >= cut_blocks.size()) continue;  // empty cell
      LabelSet piece = intersect(from.blocks()[i], cut_blocks[m]);
      columns[j].insert(columns[j].end(), piece.begin(), piece.end());
    }
  }
  std::vector<LabelSet> blocks;
  for (auto& col : columns) {
    if (!col.empty()) blocks.push_back(std::move(col));
  }
  return SetPartition::of_blocks(std::move(blocks));
}

CPDriver sample_cp_driver(const LabelSet& ground, const MixtureMeasure& nu, int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("sample_cp_driver: k must be >= 1");
  CPDriver d;
  d.cuts.reserve(static_cast<std::size_t>(k));
  d.perms.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) d.cuts.push_back(rho_nu_sample(nu, ground, rng));
  for (int i = 0; i < k; ++i) d.perms.push_back(rng.permutation(static_cast<std::size_t>(k)));
  return d;
}

SetPartition cp_sample(const SetPartition& from, const MixtureMeasure& nu, int k, Rng& rng) {
  if (from.block_count() > static_cast<std::size_t>(k)) {
    throw std::invalid_argument("cp_sample: from-state has more than k blocks");
  }
  return cp_apply(from, sample_cp_driver(from.ground(), nu, k, rng));
}

SetPartition general_cp_sample(
    const SetPartition& from,
    const std::function<SetPartition(const LabelSet& block, Rng& rng)>& cutter,
    const LabelMeasure& mu, Rng& rng) {
  std::map<Label, LabelSet> pasted;
  for (const auto& block : from.blocks()) {
    const SetPartition cut = cutter(block, rng);
    if (cut.ground() != block) {
      throw std::invalid_argument("general_cp_sample: cutter must partition the block");
    }
    const std::size_t pieces = cut.block_count();
    const std::vector<Label> labels = size_biased_labels(mu, pieces, rng);
    const std::vector<std::uint32_t> sigma = rng.permutation(pieces);
    for (std::size_t j = 0; j < pieces; ++j) {
      LabelSet& bucket = pasted[labels[sigma[j]]];
      const LabelSet& piece = cut.blocks()[j];
      bucket.insert(bucket.end(), piece.begin(), piece.end());
    }
  }
  std::vector<LabelSet> blocks;
  blocks.reserve(pasted.size());
  for (auto& [label, members] : pasted) blocks.push_back(std::move(members));
  return SetPartition::of_blocks(std::move(blocks));
}

StochasticMatrix<SetPartition> cp_matrix(int n, int k, const MixtureMeasure& nu, int n_cap) {
  if (n < 1) throw std::invalid_argument("cp_matrix: n must be >= 1");
  if (n > n_cap) throw std::invalid_argument("cp_matrix: state space too large for the given cap");
  std::vector<SetPartition> states = enumerate_partitions(n, static_cast<std::size_t>(k));
  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd probs(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      probs(i, j) = cp_prob(states[static_cast<std::size_t>(i)],
                            states[static_cast<std::size_t>(j)], nu, k);
    }
  }
  return StochasticMatrix<SetPartition>(std::move(states), std::move(probs));
}

PartitionKernelFamily cp_kernel(const MixtureMeasure& nu, int k) {
  if (k < 1) throw std::invalid_argument("cp_kernel: k must be >= 1");
  PartitionKernelFamily f;
  f.prob = [nu, k](const SetPartition& from, const SetPartition& to) {
    return cp_prob(from, to, nu, k);
  };
  f.sample = [nu, k](const SetPartition& from, Rng& rng) { return cp_sample(from, nu, k, rng); };
  f.max_blocks = k;
  f.description = "cut-and-paste";
  return f;
}

}  // namespace cpab
