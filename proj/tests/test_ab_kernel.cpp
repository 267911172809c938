#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "cpab/ab.hpp"
#include "cpab/enumerate.hpp"
#include "test_util.hpp"

using namespace cpab;

namespace {
RankedMassPartition S(std::vector<double> m) { return RankedMassPartition::simplex(std::move(m)); }

MixtureMeasure two_atom() {
  return MixtureMeasure::finite({{S({1.0, 0.0}), 0.5}, {S({0.5, 0.5}), 0.5}});
}

// Kernel that always stays in the one-block state; violates the branching
// premise and must be diagnosed, not looped on.
PartitionKernelFamily absorbing_kernel() {
  PartitionKernelFamily f;
  f.prob = [](const SetPartition& /*from*/, const SetPartition& to) {
    return to.is_one_block() ? 1.0 : 0.0;
  };
  f.sample = [](const SetPartition& from, Rng&) {
    return SetPartition::one_block(from.ground());
  };
  f.max_blocks = 2;
  f.description = "absorbing";
  return f;
}
}  // namespace

TEST_CASE("transition probability desk values") {
  const auto kernel = cp_ab_kernel(testutil::half_half(), 2);

  const auto pair = enumerate_trees(2, 2).front();
  CHECK(ab_prob(pair, pair, kernel) == doctest::Approx(1.0));
  CHECK(ab_prob_recursive(pair, pair, kernel) == doctest::Approx(1.0));

  const auto trees3 = enumerate_trees(3, 2);
  for (const auto& from : trees3) {
    for (const auto& to : trees3) {
      CHECK(ab_prob(from, to, kernel) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
      CHECK(ab_prob_recursive(from, to, kernel) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("rows sum to one over the bounded tree space") {
  for (const auto& nu : {testutil::half_half(), two_atom()}) {
    const auto kernel = cp_ab_kernel(nu, 2);
    for (int n = 2; n <= 5; ++n) {
      CHECK(ab_matrix(n, kernel).max_row_sum_error() < 1e-9);
    }
  }
  const auto m2 = ab_matrix(2, cp_ab_kernel(testutil::half_half(), 2));
  CHECK(m2.size() == 1);
  CHECK(m2.probs(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ab_matrix(7, cp_ab_kernel(testutil::half_half(), 2)), std::invalid_argument);
}

TEST_CASE("flat product equals the recursion") {
  const auto kernel = cp_ab_kernel(two_atom(), 2);
  for (int n = 2; n <= 4; ++n) {
    const auto trees = enumerate_trees(n, 2);
    for (const auto& from : trees) {
      for (const auto& to : trees) {
        CHECK(std::abs(ab_prob(from, to, kernel) - ab_prob_recursive(from, to, kernel)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("tree kernel is exchangeable") {
  const auto kernel = cp_ab_kernel(two_atom(), 2);
  for (int n = 3; n <= 4; ++n) {
    const auto trees = enumerate_trees(n, 2);
    const auto perms = all_permutations(range_set(n));
    for (const auto& from : trees) {
      for (const auto& to : trees) {
        const double base = ab_prob(from, to, kernel);
        for (const auto& sigma : perms) {
          CHECK(std::abs(ab_prob(from.relabeled(sigma), to.relabeled(sigma), kernel) - base) <=
                1e-12);
        }
      }
    }
  }
}

TEST_CASE("tree kernel is consistent under deletion fibers") {
  // With the uniform dirac measure the kernel rows depend on the target
  // block count only, and consistency holds for every fiber element.
  const auto kernel = cp_ab_kernel(testutil::half_half(), 2);
  for (int n = 2; n <= 3; ++n) {
    const auto trees = enumerate_trees(n, 2);
    for (const auto& from : trees) {
      for (const auto& lifted_from : tree_fiber(from, 2)) {
        for (const auto& to : trees) {
          double lifted_total = 0.0;
          for (const auto& lifted_to : tree_fiber(to, 2)) {
            lifted_total += ab_prob(lifted_from, lifted_to, kernel);
          }
          CHECK(lifted_total == doctest::Approx(ab_prob(from, to, kernel)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("consistency boundary for from-state-dependent kernels") {
  // For a non-uniform measure, fiber elements whose root partition restricts
  // to the original root partition remain consistent; the lift that splits
  // the new leaf off alone at the root does not. The partition kernels are
  // consistent throughout, so this isolates a genuine tree-level boundary.
  const auto kernel = cp_ab_kernel(two_atom(), 2);
  const auto trees3 = enumerate_trees(3, 2);
  const auto caterpillar = FragmentationTree::caterpillar(range_set(3));
  for (const auto& from : trees3) {
    for (const auto& lifted_from : tree_fiber(from, 2)) {
      const bool root_lifts =
          lifted_from.root_partition().restrict_to(from.ground()) == from.root_partition();
      for (const auto& to : trees3) {
        double lifted_total = 0.0;
        for (const auto& lifted_to : tree_fiber(to, 2)) {
          lifted_total += ab_prob(lifted_from, lifted_to, kernel);
        }
        if (root_lifts) {
          CHECK(lifted_total == doctest::Approx(ab_prob(from, to, kernel)).epsilon(1e-9));
        } else if (from == caterpillar && to == caterpillar) {
          CHECK(lifted_total == doctest::Approx(5.0 / 11.0).epsilon(1e-9));
          CHECK(ab_prob(from, to, kernel) == doctest::Approx(0.6).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("branching sampler matches the exact kernel") {
  const auto kernel = cp_ab_kernel(testutil::half_half(), 2);
  Rng rng(101);

  const auto pair = enumerate_trees(2, 2).front();
  for (int i = 0; i < 20; ++i) CHECK(ab_sample(pair, kernel, rng) == pair);

  const auto m = ab_matrix(4, kernel);
  for (std::size_t start : {std::size_t{0}, std::size_t{7}}) {
    std::vector<double> row;
    for (std::size_t j = 0; j < m.size(); ++j) {
      row.push_back(m.probs(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(j)));
    }
    std::map<FragmentationTree, std::size_t> counts;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
      const auto out = ab_sample(m.states[start], kernel, rng);
      ++counts[out];
    }
    CHECK(testutil::tv_distance(counts, draws, m.states, row) < 0.01);
  }

  // Sampled trees satisfy the degree bound.
  for (int i = 0; i < 200; ++i) CHECK(ab_sample(m.states[4], kernel, rng).degree() <= 2);

  Rng a(5), b(5);
  for (int i = 0; i < 20; ++i) {
    CHECK(ab_sample(m.states[3], kernel, a) == ab_sample(m.states[3], kernel, b));
  }
}

TEST_CASE("genealogical construction has the same law") {
  const auto nu = testutil::half_half();
  const auto kernel = cp_ab_kernel(nu, 2);
  Rng rng(303);

  // Uniform over the three binary shapes at n=3.
  const auto trees3 = enumerate_trees(3, 2);
  std::map<FragmentationTree, std::size_t> counts3;
  const std::size_t draws3 = 100000;
  for (std::size_t i = 0; i < draws3; ++i) ++counts3[genealogical_sample(trees3[0], nu, 2, rng)];
  CHECK(testutil::tv_distance(counts3, draws3, trees3, std::vector<double>(3, 1.0 / 3.0)) < 0.01);

  const auto m = ab_matrix(4, kernel);
  std::vector<double> row;
  for (std::size_t j = 0; j < m.size(); ++j) {
    row.push_back(m.probs(2, static_cast<Eigen::Index>(j)));
  }
  std::map<FragmentationTree, std::size_t> counts;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[genealogical_sample(m.states[2], nu, 2, rng)];
  }
  CHECK(testutil::tv_distance(counts, draws, m.states, row) < 0.01);

  CHECK(genealogical_sample_seeded(m.states[2], nu, 2, 42) ==
        genealogical_sample_seeded(m.states[2], nu, 2, 42));
}

TEST_CASE("degenerate kernels are diagnosed") {
  const ABKernel bad{absorbing_kernel(), 2};
  const auto trees = enumerate_trees(3, 2);
  CHECK_THROWS_AS(ab_prob(trees[0], trees[1], bad), std::domain_error);
  Rng rng(1);
  CHECK_THROWS_AS(ab_sample(trees[0], bad, rng, 1000), std::runtime_error);

  // One-block cuts still split eventually (blocks of a non-trivial prior land
  // in independent columns), so the genealogical construction terminates.
  const auto degenerate = MixtureMeasure::dirac(S({1.0, 0.0}));
  const auto out = genealogical_step(
      trees[0], seeded_driver_source(trees[0].ground(), degenerate, 2, 9));
  CHECK(out.ground() == trees[0].ground());
}

TEST_CASE("continuous-time chain") {
  const auto kernel = cp_ab_kernel(testutil::half_half(), 2);
  const auto trees3 = enumerate_trees(3, 2);
  Rng rng(77);

  // Horizon shorter than any plausible first hold.
  const auto still = ct_simulate(trees3[0], kernel, {1.0, 1e-12}, rng);
  CHECK(still.states.size() == 1);
  CHECK(still.event_count == 0);

  // Q(T,T) = 1/3, so jumps arrive at rate 2/3.
  std::vector<double> jump_counts;
  for (int run = 0; run < 100; ++run) {
    jump_counts.push_back(
        static_cast<double>(ct_simulate(trees3[0], kernel, {1.0, 100.0}, rng).event_count));
  }
  const auto mv = testutil::mean_var(jump_counts);
  const double expected = 100.0 * 2.0 / 3.0;
  const double sigma = std::sqrt(expected / 100.0);
  CHECK(std::abs(mv.mean - expected) <= 3.0 * sigma);

  // Embedded jump chain: off-diagonal conditioned kernel rows.
  const auto m = ab_matrix(3, kernel);
  std::map<FragmentationTree, std::map<FragmentationTree, std::size_t>> transitions;
  std::map<FragmentationTree, std::size_t> totals;
  const auto path = ct_simulate(trees3[0], kernel, {1.0, 9000.0}, rng);
  for (std::size_t i = 1; i < path.states.size(); ++i) {
    const auto& src = path.states[i - 1].second;
    ++transitions[src][path.states[i].second];
    ++totals[src];
  }
  for (const auto& [src, row_counts] : transitions) {
    const std::size_t si = m.index_of(src);
    const double stay = m.probs(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(si));
    std::vector<double> conditioned;
    for (std::size_t j = 0; j < m.size(); ++j) {
      conditioned.push_back(j == si ? 0.0
                                    : m.probs(static_cast<Eigen::Index>(si),
                                              static_cast<Eigen::Index>(j)) /
                                          (1.0 - stay));
    }
    CHECK(testutil::tv_distance(row_counts, totals[src], m.states, conditioned) < 0.02);
  }
}

TEST_CASE("Poissonian construction") {
  const auto nu = testutil::half_half();
  const auto trees3 = enumerate_trees(3, 2);

  // Reproducible given the seed.
  const auto p1 = poisson_simulate(trees3[1], nu, 2, 1.0, 20.0, 2024);
  const auto p2 = poisson_simulate(trees3[1], nu, 2, 1.0, 20.0, 2024);
  REQUIRE(p1.states.size() == p2.states.size());
  for (std::size_t i = 0; i < p1.states.size(); ++i) {
    CHECK(p1.states[i].first == p2.states[i].first);
    CHECK(p1.states[i].second == p2.states[i].second);
  }

  // Path records only changes, in increasing time order.
  for (std::size_t i = 1; i < p1.states.size(); ++i) {
    CHECK(p1.states[i].first > p1.states[i - 1].first);
    CHECK(!(p1.states[i].second == p1.states[i - 1].second));
  }

  // Atom counts are Poisson(lambda * horizon) on average.
  std::vector<double> atom_counts;
  for (int run = 0; run < 200; ++run) {
    atom_counts.push_back(static_cast<double>(
        poisson_simulate(trees3[0], nu, 2, 1.0, 10.0, 5000 + static_cast<std::uint64_t>(run))
            .event_count));
  }
  const auto mv = testutil::mean_var(atom_counts);
  const double sigma = std::sqrt(10.0 / 200.0);
  CHECK(std::abs(mv.mean - 10.0) <= 3.0 * sigma);

  // The large-time state distribution reaches the stationary law.
  std::map<FragmentationTree, std::size_t> finals;
  const std::size_t paths = 4000;
  for (std::size_t run = 0; run < paths; ++run) {
    const auto path = poisson_simulate(trees3[0], nu, 2, 1.0, 12.0, 100000 + run);
    ++finals[path.states.back().second];
  }
  CHECK(testutil::tv_distance(finals, paths, trees3, std::vector<double>(3, 1.0 / 3.0)) < 0.05);
}
