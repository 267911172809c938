#include "cpab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace cpab {

namespace {
constexpr double kEdgeFloor = 1e-14;

std::vector<bool> reachable(const Eigen::MatrixXd& m, bool reverse) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  seen[0] = true;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < n; ++v) {
      const double w = reverse ? m(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u))
                               : m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (w > kEdgeFloor && !seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  return seen;
}

long graph_period(const Eigen::MatrixXd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<long> level(n, -1);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < n; ++v) {
      if (m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > kEdgeFloor &&
          level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  long g = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > kEdgeFloor) {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return g;
}

double residual_l1(const Eigen::MatrixXd& m, const Eigen::VectorXd& x) {
  return (m.transpose() * x - x).lpNorm<1>();
}

std::string partition_text(const SetPartition& p) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < p.blocks()[i].size(); ++j) {
      if (j) os << ",";
      os << p.blocks()[i][j];
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string tree_text(const FragmentationTree& t) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < t.vertex_count(); ++i) {
    if (i) os << ",";
    os << "[";
    for (std::size_t j = 0; j < t.vertices()[i].size(); ++j) {
      if (j) os << ",";
      os << t.vertices()[i][j];
    }
    os << "]";
  }
  os << "}";
  return os.str();
}

std::string perm_text(const std::map<Label, Label>& perm) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (const auto& [a, b] : perm) {
    if (!first) os << " ";
    first = false;
    os << a << "->" << b;
  }
  os << ")";
  return os.str();
}

void note_violation(PropertyReport& r, double err, const std::string& witness) {
  if (err > r.max_violation) {
    r.max_violation = err;
    if (err > r.tolerance) r.counterexample = witness;
  }
}
}  // namespace

Eigen::VectorXd stationary(const Eigen::MatrixXd& transition) {
  const Eigen::Index n = transition.rows();
  if (n == 0 || transition.cols() != n) {
    throw std::invalid_argument("stationary: matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(transition.row(i).sum() - 1.0) > 1e-9 || transition.row(i).minCoeff() < -1e-12) {
      throw std::invalid_argument("stationary: matrix is not row-stochastic");
    }
  }
  const std::vector<bool> fwd = reachable(transition, false);
  const std::vector<bool> bwd = reachable(transition, true);
  if (std::find(fwd.begin(), fwd.end(), false) != fwd.end() ||
      std::find(bwd.begin(), bwd.end(), false) != bwd.end()) {
    throw std::runtime_error("stationary: premise failed, matrix is not irreducible");
  }
  const long period = graph_period(transition);
  if (period != 1) {
    throw std::runtime_error("stationary: premise failed, matrix is periodic (period " +
                             std::to_string(period) + ")");
  }

  Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);

  auto finalize = [&](Eigen::VectorXd v) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v(i) < 0.0 && v(i) > -1e-9) v(i) = 0.0;
    }
    const double total = v.sum();
    if (total > 0.0) v /= total;
    return v;
  };

  x = finalize(x);
  if (!x.allFinite() || x.minCoeff() < 0.0 || residual_l1(transition, x) > 1e-10) {
    // Power-iteration fallback.
    x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (std::size_t iter = 0; iter < 1'000'000; ++iter) {
      Eigen::VectorXd next = transition.transpose() * x;
      next /= next.sum();
      const double delta = (next - x).lpNorm<1>();
      x = std::move(next);
      if (delta <= 1e-12) break;
    }
    x = finalize(x);
  }
  if (!x.allFinite() || x.minCoeff() < 0.0 || residual_l1(transition, x) > 1e-10) {
    throw std::runtime_error("stationary: solver failed to reach the residual tolerance");
  }
  return x;
}

SetPartition meet(const SetPartition& a, const SetPartition& b) {
  if (a.ground() != b.ground()) throw std::invalid_argument("meet: ground sets differ");
  std::vector<LabelSet> blocks;
  for (const auto& ba : a.blocks()) {
    for (const auto& bb : b.blocks()) {
      LabelSet cut = intersect(ba, bb);
      if (!cut.empty()) blocks.push_back(std::move(cut));
    }
  }
  return SetPartition::of_blocks(std::move(blocks));
}

double alpha_permanent(const Eigen::MatrixXd& a, double alpha, int size_cap) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || n == 0) throw std::invalid_argument("alpha_permanent: square matrix required");
  if (n > size_cap) throw std::invalid_argument("alpha_permanent: size cap exceeded");

  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<bool> visited(static_cast<std::size_t>(n));
  double total = 0.0;
  do {
    double prod = 1.0;
    for (Eigen::Index i = 0; i < n && prod != 0.0; ++i) {
      prod *= a(i, sigma[static_cast<std::size_t>(i)]);
    }
    if (prod == 0.0) continue;
    std::fill(visited.begin(), visited.end(), false);
    int cycles = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (visited[i]) continue;
      ++cycles;
      for (std::size_t j = i; !visited[j]; j = static_cast<std::size_t>(sigma[j])) visited[j] = true;
    }
    total += prod * std::pow(alpha, cycles);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

Eigen::MatrixXd partition_boolean_matrix(const SetPartition& p, PartitionMatrixConvention c) {
  const auto n = static_cast<Eigen::Index>(p.ground().size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (c == PartitionMatrixConvention::equivalence) {
    for (const auto& block : p.blocks()) {
      for (Label x : block) {
        for (Label y : block) {
          const auto i = std::lower_bound(p.ground().begin(), p.ground().end(), x) -
                         p.ground().begin();
          const auto j = std::lower_bound(p.ground().begin(), p.ground().end(), y) -
                         p.ground().begin();
          m(i, j) = 1.0;
        }
      }
    }
  } else {
    for (std::size_t b = 0; b < p.block_count(); ++b) {
      for (Label x : p.blocks()[b]) {
        const auto i = std::lower_bound(p.ground().begin(), p.ground().end(), x) -
                       p.ground().begin();
        m(i, static_cast<Eigen::Index>(b)) = 1.0;
      }
    }
  }
  return m;
}

double ab2_alpha_prob(const FragmentationTree& from, const FragmentationTree& to, double alpha,
                      PartitionMatrixConvention c) {
  if (from.ground() != to.ground()) throw std::invalid_argument("ab2_alpha_prob: grounds differ");
  if (!(alpha > 0.0)) throw std::invalid_argument("ab2_alpha_prob: alpha must be positive");
  if (from.degree() > 2 || to.degree() > 2) {
    throw std::invalid_argument("ab2_alpha_prob: both trees must be binary");
  }
  double q = 1.0;
  for (std::size_t v = 0; v < to.vertex_count(); ++v) {
    const LabelSet& b = to.vertices()[v];
    if (b.size() < 2) continue;
    const SetPartition prior = from.restrict_to(b).root_partition();
    const SetPartition split = to.child_partition(v);
    const Eigen::MatrixXd mb = partition_boolean_matrix(prior, c);
    const Eigen::MatrixXd mm = partition_boolean_matrix(meet(prior, split), c);
    const double numer = 2.0 * alpha_permanent(mm, alpha / 2.0);
    const double denom = alpha_permanent(mb, alpha) - 2.0 * alpha_permanent(mb, alpha / 2.0);
    if (!(denom > 0.0)) {
      throw std::domain_error(
          "ab2_alpha_prob: non-positive denominator; the partition matrix convention does not "
          "normalize");
    }
    q *= numer / denom;
  }
  return q;
}

Suite suite_from_name(std::string_view name) {
  if (name == "row_sums") return Suite::row_sums;
  if (name == "exchangeability") return Suite::exchangeability;
  if (name == "consistency") return Suite::consistency;
  if (name == "stationarity") return Suite::stationarity;
  if (name == "recursion_equiv") return Suite::recursion_equiv;
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::row_sums: return "row_sums";
    case Suite::exchangeability: return "exchangeability";
    case Suite::consistency: return "consistency";
    case Suite::stationarity: return "stationarity";
    case Suite::recursion_equiv: return "recursion_equiv";
  }
  throw std::logic_error("unreachable");
}

PropertyReport check_row_sums(int n, int k, const MixtureMeasure& nu) {
  PropertyReport r;
  r.property = "row_sums";
  r.n = n;
  r.k = k;
  r.tolerance = 1e-9;
  const auto pm = cp_matrix(n, k, nu);
  note_violation(r, pm.max_row_sum_error(), "partition kernel row");
  const auto tm = ab_matrix(n, cp_ab_kernel(nu, k));
  note_violation(r, tm.max_row_sum_error(), "tree kernel row");
  r.pass = r.max_violation <= r.tolerance;
  return r;
}

PropertyReport check_kernel_exchangeability(int n, std::size_t max_blocks,
                                            const PartitionKernelFamily& family, double tol) {
  PropertyReport r;
  r.property = "kernel_exchangeability";
  r.n = n;
  r.k = static_cast<int>(max_blocks);
  r.tolerance = tol;
  const auto states = enumerate_partitions(n, max_blocks);
  const auto perms = all_permutations(range_set(n));
  for (const auto& from : states) {
    for (const auto& to : states) {
      const double base = family.prob(from, to);
      for (const auto& sigma : perms) {
        const double image = family.prob(from.relabeled(sigma), to.relabeled(sigma));
        note_violation(r, std::abs(base - image),
                       partition_text(from) + " -> " + partition_text(to) + " under " +
                           perm_text(sigma));
      }
    }
  }
  r.pass = r.max_violation <= r.tolerance;
  return r;
}

PropertyReport check_exchangeability(int n, int k, const MixtureMeasure& nu) {
  PropertyReport r = check_kernel_exchangeability(n, static_cast<std::size_t>(k),
                                                  cp_kernel(nu, k), 1e-12);
  r.property = "exchangeability";
  const ABKernel kernel = cp_ab_kernel(nu, k);
  const auto trees = enumerate_trees(n, static_cast<std::size_t>(k));
  const auto perms = all_permutations(range_set(n));
  for (const auto& from : trees) {
    for (const auto& to : trees) {
      const double base = ab_prob(from, to, kernel);
      for (const auto& sigma : perms) {
        const double image = ab_prob(from.relabeled(sigma), to.relabeled(sigma), kernel);
        note_violation(r, std::abs(base - image),
                       tree_text(from) + " -> " + tree_text(to) + " under " + perm_text(sigma));
      }
    }
  }
  r.pass = r.max_violation <= r.tolerance;
  return r;
}

PropertyReport check_consistency(int n, int k, const MixtureMeasure& nu) {
  PropertyReport r;
  r.property = "consistency";
  r.n = n;
  r.k = k;
  r.tolerance = 1e-9;
  const auto max_blocks = static_cast<std::size_t>(k);

  const auto partitions = enumerate_partitions(n, max_blocks);
  std::vector<std::vector<SetPartition>> partition_fibers;
  partition_fibers.reserve(partitions.size());
  for (const auto& p : partitions) partition_fibers.push_back(partition_fiber(p, max_blocks));
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    for (const auto& lifted_from : partition_fibers[i]) {
      for (std::size_t j = 0; j < partitions.size(); ++j) {
        double lifted_total = 0.0;
        for (const auto& lifted_to : partition_fibers[j]) {
          lifted_total += cp_prob(lifted_from, lifted_to, nu, k);
        }
        const double base = cp_prob(partitions[i], partitions[j], nu, k);
        note_violation(r, std::abs(lifted_total - base),
                       "kernel level: " + partition_text(lifted_from) + " -> fiber of " +
                           partition_text(partitions[j]));
      }
    }
  }

  const ABKernel kernel = cp_ab_kernel(nu, k);
  const auto trees = enumerate_trees(n, max_blocks);
  std::vector<std::vector<FragmentationTree>> fibers;
  fibers.reserve(trees.size());
  for (const auto& t : trees) fibers.push_back(tree_fiber(t, max_blocks));
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (const auto& lifted_from : fibers[i]) {
      for (std::size_t j = 0; j < trees.size(); ++j) {
        double lifted_total = 0.0;
        for (const auto& lifted_to : fibers[j]) {
          lifted_total += ab_prob(lifted_from, lifted_to, kernel);
        }
        const double base = ab_prob(trees[i], trees[j], kernel);
        note_violation(r, std::abs(lifted_total - base),
                       "tree level: " + tree_text(lifted_from) + " -> fiber of " +
                           tree_text(trees[j]));
      }
    }
  }
  r.pass = r.max_violation <= r.tolerance;
  return r;
}

PropertyReport check_stationarity(int n, int k, const MixtureMeasure& nu) {
  PropertyReport r;
  r.property = "stationarity";
  r.n = n;
  r.k = k;
  r.tolerance = 1e-9;
  const auto m = ab_matrix(n, cp_ab_kernel(nu, k));
  const Eigen::VectorXd rho = stationary(m);

  const double residual = (m.probs.transpose() * rho - rho).lpNorm<1>();
  if (residual > 1e-10) {
    r.max_violation = std::max(r.max_violation, residual);
    r.counterexample = "fixed-point residual exceeds 1e-10";
  }
  for (const auto& sigma : all_permutations(range_set(n))) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::size_t j = m.index_of(m.states[i].relabeled(sigma));
      note_violation(r, std::abs(rho(static_cast<Eigen::Index>(j)) -
                                 rho(static_cast<Eigen::Index>(i))),
                     "pushforward by " + perm_text(sigma) + " moves mass at state " +
                         std::to_string(i));
    }
  }
  r.pass = r.max_violation <= r.tolerance && residual <= 1e-10;
  return r;
}

PropertyReport check_recursion_equiv(int n, int k, const MixtureMeasure& nu) {
  PropertyReport r;
  r.property = "recursion_equiv";
  r.n = n;
  r.k = k;
  r.tolerance = 1e-12;
  const ABKernel kernel = cp_ab_kernel(nu, k);
  const auto trees = enumerate_trees(n, static_cast<std::size_t>(k));
  for (const auto& from : trees) {
    for (const auto& to : trees) {
      const double flat = ab_prob(from, to, kernel);
      const double recursive = ab_prob_recursive(from, to, kernel);
      note_violation(r, std::abs(flat - recursive),
                     tree_text(from) + " -> " + tree_text(to));
    }
  }
  r.pass = r.max_violation <= r.tolerance;
  return r;
}

PropertyReport run_suite(Suite s, int n, int k, const MixtureMeasure& nu) {
  switch (s) {
    case Suite::row_sums: return check_row_sums(n, k, nu);
    case Suite::exchangeability: return check_exchangeability(n, k, nu);
    case Suite::consistency: return check_consistency(n, k, nu);
    case Suite::stationarity: return check_stationarity(n, k, nu);
    case Suite::recursion_equiv: return check_recursion_equiv(n, k, nu);
  }
  throw std::logic_error("unreachable");
}

Ab2CrossCheck ab2_cross_check(int n, double alpha) {
  Ab2CrossCheck out;
  out.n = n;
  out.alpha = alpha;
  const ABKernel kernel = cp_ab_kernel(MixtureMeasure::symmetric_dirichlet(2, alpha / 2.0), 2);
  const auto trees = enumerate_trees(n, 2);
  for (const auto& from : trees) {
    for (const auto& to : trees) {
      const double closed = ab2_alpha_prob(from, to, alpha);
      const double reference = ab_prob(from, to, kernel);
      out.max_abs_diff = std::max(out.max_abs_diff, std::abs(closed - reference));
    }
  }
  out.equivalence_evaluated = true;
  try {
    ab2_alpha_prob(trees.front(), trees.front(), alpha, PartitionMatrixConvention::incidence);
    out.incidence_note = "incidence convention evaluated without error";
  } catch (const std::exception& e) {
    out.incidence_note = std::string("incidence convention rejected: ") + e.what();
  }
  return out;
}

std::string report_text(const PropertyReport& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " " << r.property << " (n=" << r.n << ", k=" << r.k
     << "): max violation " << r.max_violation << " at tolerance " << r.tolerance;
  if (!r.pass && !r.counterexample.empty()) os << "; counterexample: " << r.counterexample;
  return os.str();
}

}  // namespace cpab
