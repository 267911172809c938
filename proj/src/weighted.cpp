#include "cpab/weighted.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cpab {

namespace {
double stay_prob(const MixtureMeasure& nu, int k, const SetPartition& pi, const LabelSet& b) {
  return cp_prob(pi, SetPartition::one_block(b), nu, k);
}

std::string format_length(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}
}  // namespace

double WeightedTree::length_of(const LabelSet& vertex) const {
  auto it = lengths.find(vertex);
  return it == lengths.end() ? 0.0 : it->second;
}

void WeightedTree::validate() const {
  for (const auto& [vertex, len] : lengths) {
    if (!std::isfinite(len) || len < 0.0) {
      throw std::invalid_argument("edge lengths must be finite and non-negative");
    }
    bool found = false;
    for (const auto& v : tree.vertices()) {
      if (v == vertex) {
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("edge length attached to a non-vertex");
  }
}

WeightedTree weighted_sample(const WeightedTree& from, const MixtureMeasure& nu, int k,
                             double theta, Rng& rng, EdgeRateConvention convention,
                             std::size_t reject_cap) {
  if (!(theta > 0.0)) throw std::invalid_argument("weighted_sample: theta must be positive");
  if (nu.is_degenerate()) {
    throw std::domain_error("weighted_sample: degenerate nu gives zero exponential rates");
  }
  const ABKernel kernel = cp_ab_kernel(nu, k);
  WeightedTree out(ab_sample(from.tree, kernel, rng, reject_cap));
  for (std::size_t v = 0; v < out.tree.vertex_count(); ++v) {
    const LabelSet& b = out.tree.vertices()[v];
    if (b.size() < 2) continue;
    const SetPartition pi = convention == EdgeRateConvention::next_tree
                                ? out.tree.child_partition(v)
                                : from.tree.restrict_to(b).root_partition();
    const double rate = theta * (1.0 - stay_prob(nu, k, pi, b));
    if (!(rate > 0.0)) throw std::domain_error("weighted_sample: vanishing edge rate");
    out.lengths[b] = rng.exponential(rate);
  }
  return out;
}

double weighted_log_density(const WeightedTree& from, const WeightedTree& to,
                            const MixtureMeasure& nu, int k, double theta,
                            EdgeRateConvention convention) {
  if (!(theta > 0.0)) throw std::invalid_argument("weighted_log_density: theta must be positive");
  if (from.tree.ground() != to.tree.ground()) {
    throw std::invalid_argument("weighted_log_density: ground sets differ");
  }
  double log_density = 0.0;
  for (std::size_t v = 0; v < to.tree.vertex_count(); ++v) {
    const LabelSet& b = to.tree.vertices()[v];
    if (b.size() < 2) continue;
    const SetPartition prior = from.tree.restrict_to(b).root_partition();
    const SetPartition split = to.tree.child_partition(v);
    const double p = cp_prob(prior, split, nu, k);
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    const SetPartition& rate_arg = convention == EdgeRateConvention::next_tree ? split : prior;
    const double q = 1.0 - stay_prob(nu, k, rate_arg, b);
    log_density += std::log(theta) + std::log(p) - theta * to.length_of(b) * q;
  }
  return log_density;
}

WeightedTree weighted_restrict(const WeightedTree& t, const LabelSet& s) {
  WeightedTree out(t.tree.restrict_to(s));
  for (std::size_t v = 0; v < t.tree.vertex_count(); ++v) {
    const LabelSet cut = intersect(t.tree.vertices()[v], s);
    if (cut.empty()) continue;
    const double len = t.length_of(t.tree.vertices()[v]);
    if (len != 0.0) out.lengths[cut] += len;
  }
  return out;
}

std::string to_newick(const WeightedTree& t) {
  std::function<std::string(std::size_t)> render = [&](std::size_t v) -> std::string {
    const LabelSet& vertex = t.tree.vertices()[v];
    std::string body;
    if (t.tree.is_leaf(v)) {
      body = std::to_string(vertex.front());
    } else {
      body = "(";
      const auto& kids = t.tree.children_of(v);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) body += ",";
        body += render(kids[i]);
      }
      body += ")";
    }
    return body + ":" + format_length(t.length_of(vertex));
  };
  return render(0) + ";";
}

}  // namespace cpab
