#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "depnet/graph.hpp"

namespace depnet {

// GEXF 1.2-draft subset: directed graph, string node attribute `type` naming
// the node class, float edge weights. Node ids are the node keys; display
// names travel as labels.
void write_gexf(std::ostream& out, const DependencyGraph& graph);

// Inverse of write_gexf; also reads third-party files following the same
// conventions. Requires `defaultedgetype="directed"`. Edges without a weight
// default to 1.0 with a warning; unknown node attributes are ignored with a
// warning.
DependencyGraph read_gexf(std::istream& in, std::vector<std::string>* warnings = nullptr);

}  // namespace depnet
