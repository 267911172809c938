#pragma once

// JSON encodings used by the CLI and file formats.
//
//   partition: array of blocks in canonical order, e.g. [[1,2],[3]]
//   tree:      array of vertex arrays sorted by (size desc, least element)
//   mass tree: {"mass": m, "children": [...]}
//   weighted:  {"vertices": [...], "lengths": [...]} (parallel arrays)
//   nu:        {"type":"finite","atoms":[{"s":[...],"w":...},...]}
//              or {"type":"dirichlet","k":K,"beta":B}
//   matrix:    {"states": [...], "rows": [[...]]}

#include <json.hpp>

#include "cpab/analysis.hpp"
#include "cpab/fragmentation_tree.hpp"
#include "cpab/mass.hpp"
#include "cpab/paintbox.hpp"
#include "cpab/set_partition.hpp"
#include "cpab/stochastic_matrix.hpp"
#include "cpab/weighted.hpp"

namespace cpab {

nlohmann::json partition_to_json(const SetPartition& p);
SetPartition partition_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const FragmentationTree& t);
FragmentationTree tree_from_json(const nlohmann::json& j);

nlohmann::json mass_to_json(const MassFragmentation& m);
MassFragmentation mass_from_json(const nlohmann::json& j);

nlohmann::json weighted_to_json(const WeightedTree& w);
WeightedTree weighted_from_json(const nlohmann::json& j);

nlohmann::json nu_to_json(const MixtureMeasure& nu);
MixtureMeasure nu_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const StochasticMatrix<SetPartition>& m);
nlohmann::json matrix_to_json(const StochasticMatrix<FragmentationTree>& m);

nlohmann::json report_to_json(const PropertyReport& r);
nlohmann::json cross_check_to_json(const Ab2CrossCheck& c);

}  // namespace cpab
