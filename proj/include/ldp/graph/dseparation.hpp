#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ldp/graph/dag.hpp"

namespace ldp::graph {

/// True iff every path between `a` and `b` is blocked by `cond`.
///
/// Runs the two-phase reachability procedure (ancestors of `cond`, then a traversal over
/// (node, direction) states) so the cost is linear in the graph size. Throws GraphError when
/// a == b, when a or b lies in `cond`, or on an unknown node.
bool d_separated(const Dag& g, NodeId a, NodeId b, std::span<const NodeId> cond);
bool d_separated(const Dag& g, const std::string& a, const std::string& b,
                 const std::vector<std::string>& cond);

/// Nodes d-connected to `a` given `cond` (a and cond members excluded).
std::vector<bool> d_connected_from(const Dag& g, NodeId a, std::span<const NodeId> cond);

using Path = std::vector<NodeId>;

inline constexpr std::size_t kDefaultPathEnumerationLimit = 24;

/// Every simple undirected path between `a` and `b` that contains no collider, i.e. every
/// path that is active given the empty set. Output is in lexicographic order of node-id
/// sequences. Exponential in general, so refuses graphs with more than `max_nodes` nodes.
std::vector<Path> enumerate_active_paths(const Dag& g, NodeId a, NodeId b,
                                         std::size_t max_nodes = kDefaultPathEnumerationLimit);

}  // namespace ldp::graph
