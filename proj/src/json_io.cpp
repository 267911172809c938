#include "cpab/json_io.hpp"

#include <stdexcept>

namespace cpab {

using nlohmann::json;

json partition_to_json(const SetPartition& p) {
  json out = json::array();
  for (const auto& b : p.blocks()) out.push_back(b);
  return out;
}

SetPartition partition_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("partition JSON must be an array of blocks");
  std::vector<LabelSet> blocks;
  for (const auto& b : j) blocks.push_back(b.get<LabelSet>());
  return SetPartition::of_blocks(std::move(blocks));
}

json tree_to_json(const FragmentationTree& t) {
  json out = json::array();
  for (const auto& v : t.vertices()) out.push_back(v);
  return out;
}

FragmentationTree tree_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("tree JSON must be an array of vertices");
  std::vector<LabelSet> vertices;
  for (const auto& v : j) vertices.push_back(v.get<LabelSet>());
  return FragmentationTree::from_vertices(std::move(vertices));
}

namespace {
json mass_node_to_json(const MassNode& n) {
  json out;
  out["mass"] = n.mass;
  out["children"] = json::array();
  for (const auto& c : n.children) out["children"].push_back(mass_node_to_json(c));
  return out;
}

MassNode mass_node_from_json(const json& j) {
  MassNode n;
  n.mass = j.at("mass").get<double>();
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) n.children.push_back(mass_node_from_json(c));
  }
  return n;
}
}  // namespace

json mass_to_json(const MassFragmentation& m) { return mass_node_to_json(m.root()); }

MassFragmentation mass_from_json(const json& j) {
  return MassFragmentation::of_root(mass_node_from_json(j));
}

json weighted_to_json(const WeightedTree& w) {
  json out;
  out["vertices"] = tree_to_json(w.tree);
  json lengths = json::array();
  for (const auto& v : w.tree.vertices()) lengths.push_back(w.length_of(v));
  out["lengths"] = std::move(lengths);
  return out;
}

WeightedTree weighted_from_json(const json& j) {
  WeightedTree w(tree_from_json(j.at("vertices")));
  const auto& lengths = j.at("lengths");
  if (lengths.size() != w.tree.vertex_count()) {
    throw std::invalid_argument("weighted tree JSON: one length per vertex required");
  }
  for (std::size_t i = 0; i < w.tree.vertex_count(); ++i) {
    const double len = lengths[i].get<double>();
    if (len != 0.0) w.lengths[w.tree.vertices()[i]] = len;
  }
  w.validate();
  return w;
}

json nu_to_json(const MixtureMeasure& nu) {
  json out;
  if (nu.is_finite()) {
    out["type"] = "finite";
    json atoms = json::array();
    for (const auto& [s, w] : nu.finite_support().atoms) {
      atoms.push_back(json{{"s", s.masses()}, {"w", w}});
    }
    out["atoms"] = std::move(atoms);
  } else {
    out["type"] = "dirichlet";
    out["k"] = nu.dirichlet().k;
    out["beta"] = nu.dirichlet().beta;
  }
  return out;
}

MixtureMeasure nu_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "finite") {
    std::vector<std::pair<RankedMassPartition, double>> atoms;
    for (const auto& a : j.at("atoms")) {
      atoms.emplace_back(RankedMassPartition::simplex(a.at("s").get<std::vector<double>>()),
                         a.at("w").get<double>());
    }
    return MixtureMeasure::finite(std::move(atoms));
  }
  if (type == "dirichlet") {
    return MixtureMeasure::symmetric_dirichlet(j.at("k").get<int>(), j.at("beta").get<double>());
  }
  throw std::invalid_argument("nu JSON: type must be 'finite' or 'dirichlet'");
}

namespace {
template <typename State, typename Encoder>
json matrix_json(const StochasticMatrix<State>& m, Encoder encode) {
  json out;
  json states = json::array();
  for (const auto& s : m.states) states.push_back(encode(s));
  out["states"] = std::move(states);
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.probs.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.probs.cols(); ++j) row.push_back(m.probs(i, j));
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}
}  // namespace

json matrix_to_json(const StochasticMatrix<SetPartition>& m) {
  return matrix_json(m, partition_to_json);
}

json matrix_to_json(const StochasticMatrix<FragmentationTree>& m) {
  return matrix_json(m, tree_to_json);
}

json report_to_json(const PropertyReport& r) {
  return json{{"property", r.property},
              {"n", r.n},
              {"k", r.k},
              {"tolerance", r.tolerance},
              {"max_violation", r.max_violation},
              {"counterexample", r.counterexample},
              {"pass", r.pass}};
}

json cross_check_to_json(const Ab2CrossCheck& c) {
  return json{{"n", c.n},
              {"alpha", c.alpha},
              {"equivalence_evaluated", c.equivalence_evaluated},
              {"max_abs_diff", c.max_abs_diff},
              {"incidence_note", c.incidence_note}};
}

}  // namespace cpab
