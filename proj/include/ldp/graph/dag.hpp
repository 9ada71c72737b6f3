#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ldp::graph {

using NodeId = std::size_t;

// Sorted ascending by NodeId (i.e. by insertion order of the graph definition), no duplicates.
using NodeSet = std::vector<NodeId>;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Edge {
    std::string parent;
    std::string child;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed acyclic graph over named variables with a designated exposure and outcome.
///
/// Node ids are positions in the node list passed at construction, so every set-valued
/// query returns nodes in definition order. Instances are immutable once built.
class Dag {
public:
    Dag(std::vector<std::string> nodes, const std::vector<Edge>& edges, std::string_view exposure,
        std::string_view outcome);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(NodeId v) const;
    NodeId id(std::string_view name) const;
    std::optional<NodeId> find(std::string_view name) const;

    NodeId exposure() const { return exposure_; }
    NodeId outcome() const { return outcome_; }

    std::span<const NodeId> parents(NodeId v) const;
    std::span<const NodeId> children(NodeId v) const;
    bool has_edge(NodeId parent, NodeId child) const;
    std::size_t edge_count() const;
    std::vector<Edge> edges() const;

    const std::vector<NodeId>& topological_order() const { return topo_; }

    /// Every node other than the exposure and outcome, in definition order.
    NodeSet candidates() const;

    /// Proper ancestors / descendants (v itself excluded).
    NodeSet ancestors(NodeId v) const;
    NodeSet descendants(NodeId v) const;
    NodeSet ancestors(std::string_view v) const { return ancestors(id(v)); }
    NodeSet descendants(std::string_view v) const { return descendants(id(v)); }

    /// Copy of this graph with every edge leaving `v` removed.
    Dag without_out_edges(NodeId v) const;

    NodeSet ids(std::span<const std::string> names) const;
    std::vector<std::string> names_of(std::span<const NodeId> ids) const;

private:
    Dag() = default;
    void finalize();

    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<NodeId> topo_;
    NodeId exposure_ = 0;
    NodeId outcome_ = 0;
};

/// Nodes reachable from `start` following edges forward (children) or backward (parents),
/// never entering a node whose `blocked` flag is set. `start` is excluded from the result
/// unless it is reachable through a cycle, which cannot happen in a Dag.
std::vector<bool> reach(const Dag& g, NodeId start, bool forward, const std::vector<bool>& blocked);

NodeSet to_node_set(const std::vector<bool>& mask);

}  // namespace ldp::graph
