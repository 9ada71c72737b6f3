#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ldp/graph/dag.hpp"

namespace ldp::graph {

// Text format, one item per line:
//   parent child      directed edge
//   #exposure NAME    required, once
//   #outcome NAME     required, once
//   #node NAME        declares a node (fixes its position; needed for isolated nodes)
// Blank lines and any other line starting with '#' are ignored. Nodes are numbered in
// order of first appearance.
Dag read_edge_list(std::istream& in);
Dag read_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const Dag& g);
std::string to_edge_list(const Dag& g);

}  // namespace ldp::graph
