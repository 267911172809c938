#pragma once

// Ranked mass partitions, mixing measures over them, and exact paintbox
// probabilities and samplers on finite set partitions.
//
// Only conservative mass vectors (sum 1) are accepted by the probability
// and sampling operations; dissipative vectors are out of scope.

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "cpab/random.hpp"
#include "cpab/set_partition.hpp"

namespace cpab {

// Non-increasing, non-negative masses. The simplex factory additionally
// requires the masses to sum to 1 within 1e-12.
class RankedMassPartition {
 public:
  static RankedMassPartition simplex(std::vector<double> masses);

  const std::vector<double>& masses() const { return masses_; }
  std::size_t size() const { return masses_.size(); }
  double sum() const;
  bool operator==(const RankedMassPartition&) const = default;

 private:
  explicit RankedMassPartition(std::vector<double> masses) : masses_(std::move(masses)) {}
  std::vector<double> masses_;
};

// A probability measure on the ranked k-simplex: either finitely supported
// or a ranked symmetric Dirichlet(beta, ..., beta) over k parts.
class MixtureMeasure {
 public:
  struct FiniteSupport {
    std::vector<std::pair<RankedMassPartition, double>> atoms;  // weights sum to 1
  };
  struct SymmetricDirichlet {
    int k = 0;
    double beta = 0.0;
  };

  static MixtureMeasure dirac(RankedMassPartition s);
  static MixtureMeasure finite(std::vector<std::pair<RankedMassPartition, double>> atoms);
  static MixtureMeasure symmetric_dirichlet(int k, double beta);

  bool is_finite() const { return std::holds_alternative<FiniteSupport>(v_); }
  const FiniteSupport& finite_support() const { return std::get<FiniteSupport>(v_); }
  const SymmetricDirichlet& dirichlet() const { return std::get<SymmetricDirichlet>(v_); }

  // Maximal number of parts any draw can have.
  int max_parts() const;

  // True iff all mass sits on (1, 0, ..., 0).
  bool is_degenerate() const;

 private:
  std::variant<FiniteSupport, SymmetricDirichlet> v_;
};

// Probability measure on a finite label alphabet.
class LabelMeasure {
 public:
  static LabelMeasure of_atoms(std::vector<std::pair<Label, double>> atoms);
  static LabelMeasure uniform(int k);  // uniform on {1, ..., k}

  const std::vector<std::pair<Label, double>>& atoms() const { return atoms_; }

 private:
  explicit LabelMeasure(std::vector<std::pair<Label, double>> atoms) : atoms_(std::move(atoms)) {}
  std::vector<std::pair<Label, double>> atoms_;
};

// rho_s(pi): exact probability that i.i.d. colors drawn from s induce pi on
// its ground set. Sum over injections of blocks into colors.
double paintbox_prob(const RankedMassPartition& s, const SetPartition& pi);

SetPartition paintbox_sample(const RankedMassPartition& s, const LabelSet& ground, Rng& rng);
SetPartition paintbox_sample(const RankedMassPartition& s, int n, Rng& rng);

// rho_nu(pi): finite mixtures by direct weighting; symmetric Dirichlet in
// closed form via rising factorials computed in log space.
double rho_nu_prob(const MixtureMeasure& nu, const SetPartition& pi);

// Draw s ~ nu.
RankedMassPartition sample_mass_partition(const MixtureMeasure& nu, Rng& rng);

SetPartition rho_nu_sample(const MixtureMeasure& nu, const LabelSet& ground, Rng& rng);
SetPartition rho_nu_sample(const MixtureMeasure& nu, int n, Rng& rng);

// Size-biased sampling without replacement: `count` distinct labels, each
// drawn proportionally to the remaining mass.
std::vector<Label> size_biased_labels(const LabelMeasure& mu, std::size_t count, Rng& rng);

}  // namespace cpab
