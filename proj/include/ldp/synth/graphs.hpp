#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ldp/graph/dag.hpp"

namespace ldp::synth {

/// Identifiers accepted by named_graph, in a fixed order.
const std::vector<std::string>& named_graph_ids();

/// Built-in benchmark graphs. Exposure is "X", outcome is "Y". Throws std::invalid_argument
/// on an unknown id.
graph::Dag named_graph(std::string_view id);

/// Ten-node shape with k copies of every candidate partition (8k candidates). Copies of a
/// partition are named Z<p>_<i> and share their namesake's edges to X and Y.
graph::Dag scaling_graph(std::size_t k);

}  // namespace ldp::synth
