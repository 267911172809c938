#include "cpab/paintbox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace cpab {

namespace {
constexpr double kSumTol = 1e-12;

bool is_unit_vector(const std::vector<double>& m) {
  if (m.empty()) return false;
  if (std::abs(m.front() - 1.0) > kSumTol) return false;
  for (std::size_t i = 1; i < m.size(); ++i) {
    if (m[i] > kSumTol) return false;
  }
  return true;
}

void require_simplex(const RankedMassPartition& s) {
  if (std::abs(s.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("mass partition must sum to 1 (dissipative vectors unsupported)");
  }
}

// log of the rising factorial x(x+1)...(x+m-1)
double log_rising(double x, std::size_t m) {
  return std::lgamma(x + static_cast<double>(m)) - std::lgamma(x);
}
}  // namespace

RankedMassPartition RankedMassPartition::simplex(std::vector<double> masses) {
  if (masses.empty()) throw std::invalid_argument("mass partition must be non-empty");
  double total = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] < 0.0) throw std::invalid_argument("masses must be non-negative");
    if (i > 0 && masses[i] > masses[i - 1] + kSumTol) {
      throw std::invalid_argument("masses must be non-increasing");
    }
    total += masses[i];
  }
  if (std::abs(total - 1.0) > kSumTol) {
    throw std::invalid_argument("ranked simplex masses must sum to 1");
  }
  return RankedMassPartition(std::move(masses));
}

double RankedMassPartition::sum() const {
  double total = 0.0;
  for (double m : masses_) total += m;
  return total;
}

MixtureMeasure MixtureMeasure::dirac(RankedMassPartition s) {
  return finite({{std::move(s), 1.0}});
}

MixtureMeasure MixtureMeasure::finite(std::vector<std::pair<RankedMassPartition, double>> atoms) {
  if (atoms.empty()) throw std::invalid_argument("mixture needs at least one atom");
  double total = 0.0;
  for (const auto& [s, w] : atoms) {
    if (w <= 0.0) throw std::invalid_argument("mixture weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kSumTol) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
  MixtureMeasure nu;
  nu.v_ = FiniteSupport{std::move(atoms)};
  return nu;
}

MixtureMeasure MixtureMeasure::symmetric_dirichlet(int k, double beta) {
  if (k < 1) throw std::invalid_argument("dirichlet: k must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("dirichlet: beta must be positive");
  MixtureMeasure nu;
  nu.v_ = SymmetricDirichlet{k, beta};
  return nu;
}

int MixtureMeasure::max_parts() const {
  if (is_finite()) {
    std::size_t k = 0;
    for (const auto& [s, w] : finite_support().atoms) k = std::max(k, s.size());
    return static_cast<int>(k);
  }
  return dirichlet().k;
}

bool MixtureMeasure::is_degenerate() const {
  if (!is_finite()) return false;
  for (const auto& [s, w] : finite_support().atoms) {
    if (!is_unit_vector(s.masses())) return false;
  }
  return true;
}

LabelMeasure LabelMeasure::of_atoms(std::vector<std::pair<Label, double>> atoms) {
  if (atoms.empty()) throw std::invalid_argument("label measure needs at least one atom");
  double total = 0.0;
  for (const auto& [x, p] : atoms) {
    if (p <= 0.0) throw std::invalid_argument("label probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("label probabilities must sum to 1");
  }
  std::vector<Label> labels;
  for (const auto& [x, p] : atoms) labels.push_back(x);
  make_label_set(labels);  // distinctness
  return LabelMeasure(std::move(atoms));
}

LabelMeasure LabelMeasure::uniform(int k) {
  if (k < 1) throw std::invalid_argument("uniform label measure: k must be >= 1");
  std::vector<std::pair<Label, double>> atoms;
  atoms.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) atoms.emplace_back(i, 1.0 / k);
  return LabelMeasure(std::move(atoms));
}

double paintbox_prob(const RankedMassPartition& s, const SetPartition& pi) {
  require_simplex(s);
  const std::size_t k = s.size();
  const std::size_t r = pi.block_count();
  if (r > k) return 0.0;

  std::vector<bool> used(k, false);
  double total = 0.0;
  // Depth-first sum over injections blocks -> colors.
  std::function<void(std::size_t, double)> visit = [&](std::size_t i, double acc) {
    if (i == r) {
      total += acc;
      return;
    }
    const double sz = static_cast<double>(pi.blocks()[i].size());
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j] || s.masses()[j] == 0.0) continue;
      used[j] = true;
      visit(i + 1, acc * std::pow(s.masses()[j], sz));
      used[j] = false;
    }
  };
  visit(0, 1.0);
  return total;
}

SetPartition paintbox_sample(const RankedMassPartition& s, const LabelSet& ground, Rng& rng) {
  require_simplex(s);
  if (!is_valid_label_set(ground)) throw std::invalid_argument("invalid ground set");
  std::vector<LabelSet> classes(s.size());
  for (Label x : ground) {
    classes[rng.discrete(s.masses())].push_back(x);
  }
  std::vector<LabelSet> blocks;
  for (auto& c : classes) {
    if (!c.empty()) blocks.push_back(std::move(c));
  }
  return SetPartition::of_blocks(std::move(blocks));
}

SetPartition paintbox_sample(const RankedMassPartition& s, int n, Rng& rng) {
  return paintbox_sample(s, range_set(n), rng);
}

double rho_nu_prob(const MixtureMeasure& nu, const SetPartition& pi) {
  if (nu.is_finite()) {
    double total = 0.0;
    for (const auto& [s, w] : nu.finite_support().atoms) total += w * paintbox_prob(s, pi);
    return total;
  }
  const auto& d = nu.dirichlet();
  const std::size_t k = static_cast<std::size_t>(d.k);
  const std::size_t r = pi.block_count();
  if (r > k) return 0.0;
  // k!/(k-r)! * prod_i (beta)^(n_i) / (k beta)^(n), rising factorials.
  double log_p = std::lgamma(static_cast<double>(k) + 1.0) -
                 std::lgamma(static_cast<double>(k - r) + 1.0);
  std::size_t n = 0;
  for (const auto& b : pi.blocks()) {
    log_p += log_rising(d.beta, b.size());
    n += b.size();
  }
  log_p -= log_rising(d.beta * static_cast<double>(k), n);
  return std::exp(log_p);
}

RankedMassPartition sample_mass_partition(const MixtureMeasure& nu, Rng& rng) {
  if (nu.is_finite()) {
    const auto& atoms = nu.finite_support().atoms;
    std::vector<double> weights;
    weights.reserve(atoms.size());
    for (const auto& [s, w] : atoms) weights.push_back(w);
    return atoms[rng.discrete(weights)].first;
  }
  const auto& d = nu.dirichlet();
  std::vector<double> g(static_cast<std::size_t>(d.k));
  double total = 0.0;
  for (auto& x : g) {
    x = rng.gamma(d.beta);
    total += x;
  }
  for (auto& x : g) x /= total;
  std::sort(g.begin(), g.end(), std::greater<>());
  // Guard against rounding drift before the simplex check.
  double sum = 0.0;
  for (double x : g) sum += x;
  for (auto& x : g) x /= sum;
  return RankedMassPartition::simplex(std::move(g));
}

SetPartition rho_nu_sample(const MixtureMeasure& nu, const LabelSet& ground, Rng& rng) {
  return paintbox_sample(sample_mass_partition(nu, rng), ground, rng);
}

SetPartition rho_nu_sample(const MixtureMeasure& nu, int n, Rng& rng) {
  return rho_nu_sample(nu, range_set(n), rng);
}

std::vector<Label> size_biased_labels(const LabelMeasure& mu, std::size_t count, Rng& rng) {
  const auto& atoms = mu.atoms();
  if (count > atoms.size()) {
    throw std::invalid_argument("size_biased_labels: count exceeds support size");
  }
  std::vector<std::pair<Label, double>> pool = atoms;
  std::vector<Label> out;
  out.reserve(count);
  for (std::size_t step = 0; step < count; ++step) {
    std::vector<double> weights;
    weights.reserve(pool.size());
    for (const auto& [x, p] : pool) weights.push_back(p);
    const std::size_t pick = rng.discrete(weights);
    out.push_back(pool[pick].first);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace cpab
