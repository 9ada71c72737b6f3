#include "ldp/graph/dag.hpp"

#include <algorithm>
#include <queue>

namespace ldp::graph {

Dag::Dag(std::vector<std::string> nodes, const std::vector<Edge>& edges, std::string_view exposure,
         std::string_view outcome)
    : names_(std::move(nodes)) {
    for (NodeId v = 0; v < names_.size(); ++v) {
        if (names_[v].empty()) throw GraphError("empty node name");
        if (!index_.emplace(names_[v], v).second) throw GraphError("duplicate node name: " + names_[v]);
    }
    parents_.resize(names_.size());
    children_.resize(names_.size());
    for (const auto& e : edges) {
        const NodeId p = id(e.parent);
        const NodeId c = id(e.child);
        if (p == c) throw GraphError("self loop on " + e.parent);
        if (std::find(children_[p].begin(), children_[p].end(), c) != children_[p].end()) continue;
        children_[p].push_back(c);
        parents_[c].push_back(p);
    }
    exposure_ = id(exposure);
    outcome_ = id(outcome);
    if (exposure_ == outcome_) throw GraphError("exposure and outcome must differ");
    finalize();
    if (reach(*this, outcome_, true, std::vector<bool>(size(), false))[exposure_])
        throw GraphError("outcome must not be an ancestor of the exposure");
}

void Dag::finalize() {
    for (auto& p : parents_) std::sort(p.begin(), p.end());
    for (auto& c : children_) std::sort(c.begin(), c.end());

    // Kahn's algorithm, smallest id first so the order is canonical.
    std::vector<std::size_t> indegree(size());
    for (NodeId v = 0; v < size(); ++v) indegree[v] = parents_[v].size();
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (NodeId v = 0; v < size(); ++v)
        if (indegree[v] == 0) ready.push(v);
    topo_.clear();
    while (!ready.empty()) {
        const NodeId v = ready.top();
        ready.pop();
        topo_.push_back(v);
        for (NodeId c : children_[v])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (topo_.size() != size()) throw GraphError("graph contains a directed cycle");
}

const std::string& Dag::name(NodeId v) const {
    if (v >= size()) throw GraphError("node id out of range: " + std::to_string(v));
    return names_[v];
}

NodeId Dag::id(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw GraphError("unknown node: " + std::string(name));
}

std::optional<NodeId> Dag::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const NodeId> Dag::parents(NodeId v) const {
    name(v);
    return parents_[v];
}

std::span<const NodeId> Dag::children(NodeId v) const {
    name(v);
    return children_[v];
}

bool Dag::has_edge(NodeId parent, NodeId child) const {
    const auto& c = children_.at(parent);
    return std::binary_search(c.begin(), c.end(), child);
}

std::size_t Dag::edge_count() const {
    std::size_t n = 0;
    for (const auto& c : children_) n += c.size();
    return n;
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (NodeId p = 0; p < size(); ++p)
        for (NodeId c : children_[p]) out.push_back({names_[p], names_[c]});
    return out;
}

NodeSet Dag::candidates() const {
    NodeSet out;
    for (NodeId v = 0; v < size(); ++v)
        if (v != exposure_ && v != outcome_) out.push_back(v);
    return out;
}

NodeSet Dag::ancestors(NodeId v) const {
    name(v);
    return to_node_set(reach(*this, v, false, std::vector<bool>(size(), false)));
}

NodeSet Dag::descendants(NodeId v) const {
    name(v);
    return to_node_set(reach(*this, v, true, std::vector<bool>(size(), false)));
}

Dag Dag::without_out_edges(NodeId v) const {
    name(v);
    Dag out = *this;
    for (NodeId c : out.children_[v]) {
        auto& p = out.parents_[c];
        p.erase(std::remove(p.begin(), p.end(), v), p.end());
    }
    out.children_[v].clear();
    out.finalize();
    return out;
}

NodeSet Dag::ids(std::span<const std::string> names) const {
    NodeSet out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(id(n));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> Dag::names_of(std::span<const NodeId> ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (NodeId v : ids) out.push_back(name(v));
    return out;
}

std::vector<bool> reach(const Dag& g, NodeId start, bool forward, const std::vector<bool>& blocked) {
    std::vector<bool> seen(g.size(), false);
    std::vector<NodeId> stack{start};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : forward ? g.children(v) : g.parents(v)) {
            if (seen[w] || blocked[w]) continue;
            seen[w] = true;
            stack.push_back(w);
        }
    }
    return seen;
}

NodeSet to_node_set(const std::vector<bool>& mask) {
    NodeSet out;
    for (NodeId v = 0; v < mask.size(); ++v)
        if (mask[v]) out.push_back(v);
    return out;
}

}  // namespace ldp::graph
