#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "cpab/cp.hpp"
#include "cpab/enumerate.hpp"
#include "test_util.hpp"

using namespace cpab;

namespace {
SetPartition P(std::vector<LabelSet> blocks) { return SetPartition::of_blocks(std::move(blocks)); }
RankedMassPartition S(std::vector<double> m) { return RankedMassPartition::simplex(std::move(m)); }

MixtureMeasure two_atom() {
  return MixtureMeasure::finite({{S({1.0, 0.0}), 0.5}, {S({0.5, 0.5}), 0.5}});
}
}  // namespace

TEST_CASE("transition probability desk values") {
  const auto half = testutil::half_half();

  CHECK(cp_prob(P({{1}}), P({{1}}), half, 2) == doctest::Approx(1.0));

  const auto one2 = SetPartition::one_block({1, 2});
  CHECK(cp_prob(one2, P({{1}, {2}}), half, 2) == doctest::Approx(0.5));
  CHECK(cp_prob(one2, one2, half, 2) == doctest::Approx(0.5));

  // Uniform 4x4 transition matrix at n=3, k=2.
  for (const auto& from : enumerate_partitions(3, 2)) {
    for (const auto& to : enumerate_partitions(3, 2)) {
      CHECK(cp_prob(from, to, half, 2) == doctest::Approx(0.25).epsilon(1e-12));
    }
  }

  CHECK(cp_prob(one2, SetPartition::singletons({1, 2}), MixtureMeasure::dirac(S({1.0, 0.0})), 1) ==
        0.0);  // more target blocks than k
  CHECK_THROWS_AS(cp_prob(SetPartition::singletons({1, 2, 3}), one2.restrict_to({1, 2}),
                          half, 2),
                  std::invalid_argument);  // ground mismatch
  CHECK_THROWS_AS(
      cp_prob(SetPartition::singletons({1, 2, 3}), SetPartition::one_block({1, 2, 3}), half, 2),
      std::invalid_argument);  // from-state outside the bounded space
}

TEST_CASE("deterministic cut-and-paste map") {
  // Every block lands whole in column 1.
  CPDriver all_one;
  all_one.cuts = {SetPartition::one_block({1, 2, 3}), SetPartition::one_block({1, 2, 3})};
  all_one.perms = {{0, 1}, {0, 1}};
  CHECK(cp_apply(P({{1, 2}, {3}}), all_one) == SetPartition::one_block({1, 2, 3}));

  // Worked example: columns {1}∪{3} and {2}.
  CPDriver d;
  d.cuts = {P({{1, 3}, {2}}), SetPartition::one_block({1, 2, 3})};
  d.perms = {{0, 1}, {0, 1}};
  CHECK(cp_apply(P({{1, 2}, {3}}), d) == P({{1, 3}, {2}}));

  // Relabeling columns by a common permutation leaves the result unchanged.
  Rng rng(99);
  const auto nu = two_atom();
  for (int trial = 0; trial < 200; ++trial) {
    const auto from = rho_nu_sample(nu, 5, rng);
    if (from.block_count() > 2) continue;
    CPDriver driver = sample_cp_driver(from.ground(), nu, 2, rng);
    const auto tau = rng.permutation(2);
    CPDriver relabeled = driver;
    for (auto& perm : relabeled.perms) {
      std::vector<std::uint32_t> composed(perm.size());
      for (std::size_t j = 0; j < perm.size(); ++j) composed[j] = perm[tau[j]];
      perm = composed;
    }
    CHECK(cp_apply(from, driver) == cp_apply(from, relabeled));
  }
}

TEST_CASE("cp sampler") {
  Rng rng(7);
  // One-block cuts coagulate: every output block is a union of input blocks.
  const auto coag_nu = MixtureMeasure::dirac(S({1.0, 0.0}));
  const auto from = P({{1, 2}, {3, 4}});
  for (int i = 0; i < 200; ++i) {
    const auto out = cp_sample(from, coag_nu, 2, rng);
    for (const auto& block : out.blocks()) {
      for (const auto& original : from.blocks()) {
        const auto cut = intersect(block, original);
        CHECK((cut.empty() || cut == original));
      }
    }
  }

  // Empirical law at n=3, k=2 is uniform over four states.
  const auto half = testutil::half_half();
  const auto states = enumerate_partitions(3, 2);
  std::vector<double> probs(states.size(), 0.25);
  std::map<SetPartition, std::size_t> counts;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) {
    ++counts[cp_sample(SetPartition::one_block({1, 2, 3}), half, 2, rng)];
  }
  CHECK(testutil::tv_distance(counts, draws, states, probs) < 0.01);

  // And at n=4 against the tabulated kernel, from a two-block start.
  const auto m4 = cp_matrix(4, 2, half);
  const auto start4 = P({{1, 3}, {2, 4}});
  std::vector<double> row4;
  for (std::size_t j = 0; j < m4.size(); ++j) {
    row4.push_back(m4.probs(static_cast<Eigen::Index>(m4.index_of(start4)),
                            static_cast<Eigen::Index>(j)));
  }
  std::map<SetPartition, std::size_t> counts4;
  for (std::size_t i = 0; i < draws; ++i) ++counts4[cp_sample(start4, half, 2, rng)];
  CHECK(testutil::tv_distance(counts4, draws, m4.states, row4) < 0.01);

  Rng a(4), b(4);
  for (int i = 0; i < 50; ++i) {
    CHECK(cp_sample(from, half, 2, a) == cp_sample(from, half, 2, b));
  }

  // Output block count never exceeds k.
  const auto d3 = MixtureMeasure::symmetric_dirichlet(3, 0.5);
  auto state = SetPartition::one_block(range_set(6));
  for (int i = 0; i < 300; ++i) {
    state = cp_sample(state, d3, 3, rng);
    CHECK(state.block_count() <= 3);
  }
}

TEST_CASE("general algorithm reduces to the paintbox instance") {
  Rng rng(17);
  const auto half = testutil::half_half();
  const auto cutter = [&](const LabelSet& block, Rng& r) { return rho_nu_sample(half, block, r); };
  const auto mu = LabelMeasure::uniform(2);

  const auto states = enumerate_partitions(3, 2);
  const auto start = P({{1, 2}, {3}});
  std::vector<double> probs;
  for (const auto& pi : states) probs.push_back(cp_prob(start, pi, half, 2));
  std::map<SetPartition, std::size_t> counts;
  const std::size_t draws = 100000;
  for (std::size_t i = 0; i < draws; ++i) ++counts[general_cp_sample(start, cutter, mu, rng)];
  CHECK(testutil::tv_distance(counts, draws, states, probs) < 0.01);
}

TEST_CASE("general algorithm degenerate regimes") {
  Rng rng(23);
  const auto keep_whole = [](const LabelSet& block, Rng&) {
    return SetPartition::one_block(block);
  };

  // A point-mass label measure pastes everything.
  const auto point = LabelMeasure::of_atoms({{1, 1.0}});
  const auto from = P({{1, 4}, {2, 6}, {3}});
  for (int i = 0; i < 20; ++i) {
    CHECK(general_cp_sample(from, keep_whole, point, rng) ==
          SetPartition::one_block(from.ground()));
  }

  // Whole-block cuts with distinct labels reproduce the input exactly;
  // distinctness holds precisely when the block count is preserved.
  const auto mu = LabelMeasure::uniform(4);
  std::size_t preserved = 0;
  const std::size_t draws = 20000;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto out = general_cp_sample(from, keep_whole, mu, rng);
    if (out.block_count() == from.block_count()) {
      ++preserved;
      CHECK(out == from);
    }
  }
  // P(all three labels distinct) = 4!/1! / 4^3 = 24/64.
  CHECK(static_cast<double>(preserved) / draws == doctest::Approx(24.0 / 64.0).epsilon(0.05));
}

TEST_CASE("transition matrices are stochastic") {
  const auto half3 = MixtureMeasure::dirac(S({0.5, 0.5, 0.0}));
  const std::vector<MixtureMeasure> nus2{testutil::half_half(), two_atom(),
                                         MixtureMeasure::symmetric_dirichlet(2, 1.0)};
  const std::vector<MixtureMeasure> nus3{half3, MixtureMeasure::symmetric_dirichlet(3, 1.0)};
  for (int n = 1; n <= 5; ++n) {
    for (const auto& nu : nus2) CHECK(cp_matrix(n, 2, nu).max_row_sum_error() < 1e-9);
    for (const auto& nu : nus3) CHECK(cp_matrix(n, 3, nu).max_row_sum_error() < 1e-9);
  }

  const auto m1 = cp_matrix(1, 2, testutil::half_half());
  CHECK(m1.size() == 1);
  CHECK(m1.probs(0, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(cp_matrix(11, 2, testutil::half_half()), std::invalid_argument);
}

TEST_CASE("kernel is exchangeable and consistent") {
  const auto nu = two_atom();
  for (int n = 2; n <= 4; ++n) {
    const auto states = enumerate_partitions(n, 2);
    const auto perms = all_permutations(range_set(n));
    for (const auto& from : states) {
      for (const auto& to : states) {
        const double base = cp_prob(from, to, nu, 2);
        for (const auto& sigma : perms) {
          CHECK(std::abs(cp_prob(from.relabeled(sigma), to.relabeled(sigma), nu, 2) - base) <=
                1e-12);
        }
      }
    }
  }

  for (int n = 1; n <= 4; ++n) {
    const auto states = enumerate_partitions(n, 2);
    for (const auto& from : states) {
      for (const auto& lifted_from : partition_fiber(from, 2)) {
        for (const auto& to : states) {
          double lifted_total = 0.0;
          for (const auto& lifted_to : partition_fiber(to, 2)) {
            lifted_total += cp_prob(lifted_from, lifted_to, nu, 2);
          }
          CHECK(lifted_total == doctest::Approx(cp_prob(from, to, nu, 2)).epsilon(1e-9));
        }
      }
    }
  }
}
