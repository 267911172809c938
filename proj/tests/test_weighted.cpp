#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "cpab/ab.hpp"
#include "cpab/enumerate.hpp"
#include "cpab/json_io.hpp"
#include "cpab/weighted.hpp"
#include "test_util.hpp"

using namespace cpab;

namespace {
RankedMassPartition S(std::vector<double> m) { return RankedMassPartition::simplex(std::move(m)); }

WeightedTree flat(const FragmentationTree& t) { return WeightedTree(t); }
}  // namespace

TEST_CASE("sampled edge lengths are exponential with the stay-complement rate") {
  const auto nu = testutil::half_half();
  Rng rng(10);
  const auto pair = enumerate_trees(2, 2).front();

  // q_2 = 1/2, so the single edge is Exp(1/2) with mean 2.
  std::vector<double> lengths;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto next = weighted_sample(flat(pair), nu, 2, 1.0, rng);
    CHECK(next.tree == pair);
    lengths.push_back(next.length_of({1, 2}));
    CHECK(next.length_of({1}) == 0.0);  // singletons carry no length
  }
  const auto mv = testutil::mean_var(lengths);
  CHECK(mv.mean == doctest::Approx(2.0).epsilon(0.02));
  for (double l : lengths) {
    CHECK(l >= 0.0);
    if (l < 0.0) break;
  }

  CHECK_THROWS_AS(weighted_sample(flat(pair), MixtureMeasure::dirac(S({1.0, 0.0})), 2, 1.0, rng),
                  std::domain_error);
}

TEST_CASE("shape marginal matches the branching kernel") {
  const auto nu = testutil::half_half();
  const auto kernel = cp_ab_kernel(nu, 2);
  const auto m = ab_matrix(3, kernel);
  Rng rng(21);
  std::map<FragmentationTree, std::size_t> counts;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[weighted_sample(flat(m.states[0]), nu, 2, 1.0, rng).tree];
  }
  std::vector<double> row;
  for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.probs(0, static_cast<Eigen::Index>(j)));
  CHECK(testutil::tv_distance(counts, draws, m.states, row) < 0.01);
}

TEST_CASE("log density desk values and shape support") {
  const auto nu = testutil::half_half();
  const auto pair = enumerate_trees(2, 2).front();
  const WeightedTree from = flat(pair);
  WeightedTree zero_len = flat(pair);  // root length 0

  for (auto convention : {EdgeRateConvention::next_tree, EdgeRateConvention::previous_tree}) {
    CHECK(weighted_log_density(from, zero_len, nu, 2, 1.0, convention) ==
          doctest::Approx(std::log(0.5)));
  }

  // Increasing any length strictly decreases the density.
  WeightedTree longer = zero_len;
  longer.lengths[{1, 2}] = 0.7;
  CHECK(weighted_log_density(from, longer, nu, 2, 1.0) <
        weighted_log_density(from, zero_len, nu, 2, 1.0));

  // Zero-probability shape: a pure-coagulation measure cannot cut {1,2}.
  const auto coag = MixtureMeasure::dirac(S({1.0, 0.0}));
  const auto cat = FragmentationTree::from_vertices({{1, 2, 3}, {1, 2}, {1}, {2}, {3}});
  const auto other = FragmentationTree::from_vertices({{1, 2, 3}, {1, 3}, {1}, {2}, {3}});
  CHECK(weighted_log_density(flat(cat), flat(other), coag, 2, 1.0) ==
        -std::numeric_limits<double>::infinity());

  // Density of sampled transitions is finite almost surely.
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto next = weighted_sample(flat(cat), nu, 2, 1.0, rng);
    CHECK(std::isfinite(weighted_log_density(flat(cat), next, nu, 2, 1.0)));
  }
}

TEST_CASE("density integrates to one over lengths and shapes") {
  // Importance-sample the length integral per shape under the printed form
  // (rates from the prior tree) and sum the shape masses.
  const auto nu = testutil::half_half();
  const auto kernel = cp_ab_kernel(nu, 2);
  const auto trees = enumerate_trees(3, 2);
  const auto& from = trees[0];
  Rng rng(1234);
  const double theta = 1.0;

  double total = 0.0;
  for (const auto& shape : trees) {
    // Proposal: independent Exp(r_b) with r_b deliberately off the target
    // rate but inside the finite-variance band r_b < 2 theta q_b.
    std::vector<LabelSet> edges;
    std::vector<double> rates;
    for (std::size_t v = 0; v < shape.vertex_count(); ++v) {
      const LabelSet& b = shape.vertices()[v];
      if (b.size() < 2) continue;
      const auto prior = from.restrict_to(b).root_partition();
      const double q = 1.0 - cp_prob(prior, SetPartition::one_block(b), nu, 2);
      edges.push_back(b);
      rates.push_back(0.6 * theta * q);
    }
    double acc = 0.0;
    const std::size_t draws = 200000;
    for (std::size_t i = 0; i < draws; ++i) {
      WeightedTree proposal = flat(shape);
      double log_proposal = 0.0;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const double t = rng.exponential(rates[e]);
        proposal.lengths[edges[e]] = t;
        log_proposal += std::log(rates[e]) - rates[e] * t;
      }
      acc += std::exp(weighted_log_density(flat(from), proposal, nu, 2, theta,
                                           EdgeRateConvention::previous_tree) -
                      log_proposal);
    }
    const double shape_mass = acc / static_cast<double>(draws);
    CHECK(shape_mass == doctest::Approx(ab_prob(from, shape, kernel)).epsilon(0.02));
    total += shape_mass;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("restriction adds lengths along collapsed chains") {
  // Leaf 3 split off at the root: the root edge and the [2]-vertex edge add.
  WeightedTree split_off(
      FragmentationTree::from_vertices({{1, 2, 3}, {1, 2}, {1}, {2}, {3}}));
  split_off.lengths[{1, 2, 3}] = 0.3;
  split_off.lengths[{1, 2}] = 0.5;
  const auto restricted = weighted_restrict(split_off, {1, 2});
  CHECK(restricted.length_of({1, 2}) == doctest::Approx(0.8));

  // Leaf 3 attached deeper: the root edge is untouched.
  WeightedTree deep(FragmentationTree::from_vertices({{1, 2, 3}, {1, 3}, {1}, {2}, {3}}));
  deep.lengths[{1, 2, 3}] = 0.3;
  deep.lengths[{1, 3}] = 0.5;
  const auto deep_restricted = weighted_restrict(deep, {1, 2});
  CHECK(deep_restricted.length_of({1, 2}) == doctest::Approx(0.3));
  CHECK(deep_restricted.length_of({1}) == doctest::Approx(0.5));  // {1,3} collapses onto {1}

  // Root-to-leaf path lengths of surviving leaves are preserved.
  Rng rng(3);
  const auto nu = testutil::half_half();
  auto state = flat(FragmentationTree::caterpillar(range_set(5)));
  for (int trial = 0; trial < 50; ++trial) {
    state = weighted_sample(state, nu, 2, 1.0, rng);
    const LabelSet keep{1, 3, 5};
    const auto cut = weighted_restrict(state, keep);
    for (Label leaf : keep) {
      double full = 0.0;
      for (const auto& v : state.tree.vertices()) {
        if (std::binary_search(v.begin(), v.end(), leaf)) full += state.length_of(v);
      }
      double reduced = 0.0;
      for (const auto& v : cut.tree.vertices()) {
        if (std::binary_search(v.begin(), v.end(), leaf)) reduced += cut.length_of(v);
      }
      CHECK(reduced == doctest::Approx(full).epsilon(1e-12));
    }
  }
}

TEST_CASE("restricted root edge is exponential with the level-n rate") {
  const auto nu = testutil::half_half();
  Rng rng(2718);
  const double theta = 1.0;
  // q_n for this measure is state-independent: 1 - 2^(1-n).
  for (int n : {2, 3}) {
    const auto start = flat(FragmentationTree::caterpillar(range_set(n + 1)));
    const double q = 1.0 - std::pow(2.0, -n + 1);
    std::vector<double> root_lengths;
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) {
      const auto next = weighted_sample(start, nu, 2, theta, rng);
      root_lengths.push_back(weighted_restrict(next, range_set(n)).length_of(range_set(n)));
    }
    const auto mv = testutil::mean_var(root_lengths);
    const double mean = 1.0 / (theta * q);
    const double var = mean * mean;
    const double se_mean = std::sqrt(var / static_cast<double>(draws));
    const double se_var = var * std::sqrt(8.0 / static_cast<double>(draws));
    CHECK(std::abs(mv.mean - mean) <= 3.0 * se_mean);
    CHECK(std::abs(mv.var - var) <= 3.0 * se_var);
  }
}

TEST_CASE("serialization") {
  WeightedTree w(FragmentationTree::caterpillar(range_set(3)));
  w.lengths[{1, 2, 3}] = 0.4;
  w.lengths[{1, 2}] = 0.3;
  w.lengths[{1}] = 0.1;
  w.lengths[{2}] = 0.2;
  CHECK(to_newick(w) == "((1:0.1,2:0.2):0.3,3:0):0.4;");

  const auto parsed = weighted_from_json(weighted_to_json(w));
  CHECK(parsed.tree == w.tree);
  CHECK(weighted_to_json(parsed) == weighted_to_json(w));
}
