#include "cpab/mass.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "cpab/streams.hpp"

namespace cpab {

namespace {
void validate_node(const MassNode& node, double tol) {
  if (node.mass < 0.0) throw std::invalid_argument("mass must be non-negative");
  if (node.children.empty()) return;
  double total = 0.0;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i > 0 && node.children[i].mass > node.children[i - 1].mass + tol) {
      throw std::invalid_argument("children masses must be non-increasing");
    }
    total += node.children[i].mass;
  }
  if (std::abs(total - node.mass) > tol) {
    throw std::invalid_argument("children masses must sum to the parent mass");
  }
  for (const auto& c : node.children) validate_node(c, tol);
}
}  // namespace

MassFragmentation MassFragmentation::root_only() {
  MassFragmentation m;
  m.root_.mass = 1.0;
  return m;
}

MassFragmentation MassFragmentation::of_root(MassNode root) {
  MassFragmentation m;
  m.root_ = std::move(root);
  m.validate();
  return m;
}

std::vector<double> MassFragmentation::root_children() const {
  std::vector<double> out;
  out.reserve(root_.children.size());
  for (const auto& c : root_.children) out.push_back(c.mass);
  return out;
}

const MassNode* MassFragmentation::node_at(const GenealogicalIndex& u) const {
  const MassNode* node = &root_;
  for (int step : u.path) {
    const auto idx = static_cast<std::size_t>(step - 1);
    if (step < 1 || idx >= node->children.size()) return nullptr;
    node = &node->children[idx];
  }
  return node;
}

void MassFragmentation::validate(double tol) const {
  if (std::abs(root_.mass - 1.0) > tol) throw std::invalid_argument("root mass must be 1");
  validate_node(root_, tol);
}

double asymptotic_frequency(const LabelSet& a, int n) {
  if (n < 1) throw std::invalid_argument("asymptotic_frequency: n must be >= 1");
  if (!is_valid_label_set(a)) throw std::invalid_argument("asymptotic_frequency: invalid set");
  const auto count =
      std::upper_bound(a.begin(), a.end(), n) - std::lower_bound(a.begin(), a.end(), 1);
  return static_cast<double>(count) / static_cast<double>(n);
}

MassFragmentation mass_of_tree(const FragmentationTree& t) {
  const double n = static_cast<double>(t.ground().size());
  std::function<MassNode(std::size_t)> build = [&](std::size_t v) {
    MassNode node;
    node.mass = static_cast<double>(t.vertices()[v].size()) / n;
    for (std::size_t c : t.children_of(v)) node.children.push_back(build(c));
    std::stable_sort(node.children.begin(), node.children.end(),
                     [](const MassNode& a, const MassNode& b) { return a.mass > b.mass; });
    return node;
  };
  return MassFragmentation::of_root(build(0));
}

std::vector<double> mass_update_children(double node_mass, const std::vector<double>& prior,
                                         const std::vector<RankedMassPartition>& s,
                                         const std::vector<std::vector<std::uint32_t>>& sigma) {
  const std::size_t k = prior.size();
  if (s.size() != k || sigma.size() != k) {
    throw std::invalid_argument("mass_update_children: k-tuple size mismatch");
  }
  std::vector<double> totals(k, 0.0);
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto& row = s[i].masses();
      const std::uint32_t col = sigma[i][m];
      const double entry = col < row.size() ? row[col] : 0.0;
      totals[m] += node_mass * prior[i] * entry;
    }
  }
  std::stable_sort(totals.begin(), totals.end(), std::greater<>());
  while (!totals.empty() && totals.back() <= kMassPrune) totals.pop_back();
  return totals;
}

MassFragmentation mass_step_seeded(const MassFragmentation& prev, const MixtureMeasure& nu, int k,
                                   int depth, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("mass_step: k must be >= 2");
  if (depth < 1) throw std::invalid_argument("mass_step: depth must be >= 1");
  std::vector<double> prior = prev.root_children();
  if (prior.empty()) prior.push_back(1.0);  // unfragmented previous state
  if (prior.size() > static_cast<std::size_t>(k)) {
    throw std::invalid_argument("mass_step: previous root has more than k children");
  }
  prior.resize(static_cast<std::size_t>(k), 0.0);

  std::function<MassNode(const GenealogicalIndex&, double, int)> build =
      [&](const GenealogicalIndex& u, double mass, int remaining) {
        MassNode node;
        node.mass = mass;
        if (remaining == 0 || mass <= kMassPrune) return node;
        Rng rng_mass(derive_seed(seed, streams::kDriverMass, u.path));
        Rng rng_perms(derive_seed(seed, streams::kDriverPerms, u.path));
        std::vector<RankedMassPartition> s;
        s.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) s.push_back(sample_mass_partition(nu, rng_mass));
        std::vector<std::vector<std::uint32_t>> sigma;
        sigma.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
          sigma.push_back(rng_perms.permutation(static_cast<std::size_t>(k)));
        }
        const std::vector<double> totals = mass_update_children(mass, prior, s, sigma);
        for (std::size_t j = 0; j < totals.size(); ++j) {
          node.children.push_back(
              build(u.child(static_cast<int>(j) + 1), totals[j], remaining - 1));
        }
        return node;
      };

  return MassFragmentation::of_root(build(GenealogicalIndex::root(), 1.0, depth));
}

MassFragmentation mass_step(const MassFragmentation& prev, const MixtureMeasure& nu, int k,
                            int depth, Rng& rng) {
  return mass_step_seeded(prev, nu, k, depth, rng.next_u64());
}

TimedMassPath mass_ct_simulate(const MassFragmentation& m0, const MixtureMeasure& nu, int k,
                               double lambda, double horizon, int depth, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("mass_ct_simulate: lambda must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("mass_ct_simulate: horizon must be positive");
  TimedMassPath path;
  path.states.emplace_back(0.0, m0);
  MassFragmentation current = m0;
  Rng atom_clock(derive_seed(seed, streams::kAtomTimes));
  double t = 0.0;
  for (std::uint64_t atom = 0;; ++atom) {
    t += atom_clock.exponential(lambda);
    if (t > horizon) break;
    ++path.event_count;
    current = mass_step_seeded(current, nu, k, depth, derive_seed(seed, streams::kAtomDriver, atom));
    path.states.emplace_back(t, current);
  }
  return path;
}

}  // namespace cpab
