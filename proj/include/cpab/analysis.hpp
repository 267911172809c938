#pragma once

// Brute-force oracles and machine checks for the structural properties of
// the partition and tree kernels: stationary distributions, exchangeability
// and consistency sweeps, partition meets, alpha-permanents, and the
// closed-form binary-tree kernel they combine into.

#include <Eigen/Dense>
#include <string>
#include <string_view>

#include "cpab/ab.hpp"
#include "cpab/cp.hpp"
#include "cpab/enumerate.hpp"
#include "cpab/stochastic_matrix.hpp"

namespace cpab {

// Unique stationary distribution of a row-stochastic matrix. Verifies
// irreducibility and aperiodicity first and names the failed premise in the
// exception message. Direct linear solve, power-iteration fallback; result
// satisfies ||rho M - rho||_1 <= 1e-10.
Eigen::VectorXd stationary(const Eigen::MatrixXd& transition);

template <typename State>
Eigen::VectorXd stationary(const StochasticMatrix<State>& m) {
  return stationary(m.probs);
}

// Partition-lattice meet: all non-empty pairwise block intersections.
SetPartition meet(const SetPartition& a, const SetPartition& b);

// Sum over permutations of alpha^(cycle count) times the permutation's entry
// product. Factorial brute force; guarded by a size cap.
double alpha_permanent(const Eigen::MatrixXd& a, double alpha, int size_cap = 10);

// How a partition is encoded as a 0-1 matrix for the alpha-permanent:
//   equivalence - square relation matrix, (x, y) = 1 iff x ~ y (default;
//                 the entrywise AND of two such matrices encodes the meet);
//   incidence   - rows = elements, columns = blocks, zero-padded square.
enum class PartitionMatrixConvention { equivalence, incidence };

Eigen::MatrixXd partition_boolean_matrix(const SetPartition& p, PartitionMatrixConvention c);

// Closed-form binary-tree transition: product over non-singleton vertices b
// of `to` of 2 per_{alpha/2}(M(prior ∧ split)) / (per_alpha M(prior) -
// 2 per_{alpha/2} M(prior)), prior/split being the root partitions of the
// restrictions of `from` and `to` to b. Both trees must be binary. Throws
// std::domain_error on a non-positive denominator (convention mismatch
// diagnostic).
double ab2_alpha_prob(const FragmentationTree& from, const FragmentationTree& to, double alpha,
                      PartitionMatrixConvention c = PartitionMatrixConvention::equivalence);

struct PropertyReport {
  std::string property;
  int n = 0;
  int k = 0;
  double tolerance = 0.0;
  double max_violation = 0.0;
  std::string counterexample;  // non-empty iff the check failed
  bool pass = false;
};

enum class Suite { row_sums, exchangeability, consistency, stationarity, recursion_equiv };

Suite suite_from_name(std::string_view name);
std::string_view suite_name(Suite s);

// Exhaustive sweeps at fixed tolerances. `consistency` checks level n
// against level n+1 through deletion fibers, at both the partition-kernel
// and the tree-kernel level.
PropertyReport check_row_sums(int n, int k, const MixtureMeasure& nu);
PropertyReport check_exchangeability(int n, int k, const MixtureMeasure& nu);
PropertyReport check_consistency(int n, int k, const MixtureMeasure& nu);
PropertyReport check_stationarity(int n, int k, const MixtureMeasure& nu);
PropertyReport check_recursion_equiv(int n, int k, const MixtureMeasure& nu);
PropertyReport run_suite(Suite s, int n, int k, const MixtureMeasure& nu);

// Kernel-level exchangeability sweep for an arbitrary kernel family
// (negative controls plug in deliberately biased kernels here).
PropertyReport check_kernel_exchangeability(int n, std::size_t max_blocks,
                                            const PartitionKernelFamily& family, double tol);

// Cross-evaluation of the alpha-permanent kernel against the branching
// kernel with the matching ranked-Dirichlet cutting measure.
struct Ab2CrossCheck {
  int n = 0;
  double alpha = 0.0;
  bool equivalence_evaluated = false;
  double max_abs_diff = 0.0;   // over all tree pairs, equivalence convention
  std::string incidence_note;  // outcome of attempting the incidence convention
};

Ab2CrossCheck ab2_cross_check(int n, double alpha);

std::string report_text(const PropertyReport& r);

}  // namespace cpab
