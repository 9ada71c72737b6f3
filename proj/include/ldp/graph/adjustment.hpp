#pragma once

#include <string>
#include <vector>

#include "ldp/graph/dag.hpp"

namespace ldp::graph {

/// Backdoor criterion for the graph's exposure/outcome pair: `adjustment` holds no
/// descendant of the exposure and blocks every path that enters the exposure.
bool is_valid_adjustment_set(const Dag& g, std::span<const NodeId> adjustment);
bool is_valid_adjustment_set(const Dag& g, const std::vector<std::string>& adjustment);

}  // namespace ldp::graph
