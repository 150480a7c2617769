#pragma once

#include <string>

#include "ggmeval/graph.hpp"

namespace ggm {

// One graph per line: {"n": int, "edges": [[i,j],...],
//  "node_feats": [c,...]?, "edge_feats": [[i,j,c],...]?}
// Indices are 0-based; field order is fixed. The set schema is the smallest
// one covering the categories present in the file.
GraphSet load_graphset(const std::string& path);
void save_graphset(const GraphSet& s, const std::string& path);

}  // namespace ggm
