#include "ldp/graph/dseparation.hpp"

#include <algorithm>

namespace ldp::graph {

namespace {

enum class Arrival : unsigned char { FromChild = 0, FromParent = 1 };

void check_query(const Dag& g, NodeId a, NodeId b, std::span<const NodeId> cond) {
    g.name(a);
    g.name(b);
    if (a == b) throw GraphError("d-separation query needs two distinct nodes");
    for (NodeId c : cond) {
        g.name(c);
        if (c == a || c == b) throw GraphError("query endpoint " + g.name(c) + " is in the conditioning set");
    }
}

}  // namespace

std::vector<bool> d_connected_from(const Dag& g, NodeId a, std::span<const NodeId> cond) {
    const std::size_t n = g.size();
    std::vector<bool> in_cond(n, false);
    for (NodeId c : cond) in_cond[c] = true;

    // Phase 1: cond and its ancestors; a collider is open iff it is in this set.
    std::vector<bool> opens_collider = in_cond;
    std::vector<NodeId> stack(cond.begin(), cond.end());
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId p : g.parents(v)) {
            if (opens_collider[p]) continue;
            opens_collider[p] = true;
            stack.push_back(p);
        }
    }

    // Phase 2: traverse (node, arrival direction) states starting upward from a.
    std::vector<bool> visited(2 * n, false);
    std::vector<bool> reachable(n, false);
    std::vector<std::pair<NodeId, Arrival>> frontier{{a, Arrival::FromChild}};
    while (!frontier.empty()) {
        const auto [v, dir] = frontier.back();
        frontier.pop_back();
        const std::size_t key = 2 * v + static_cast<std::size_t>(dir);
        if (visited[key]) continue;
        visited[key] = true;
        if (!in_cond[v]) reachable[v] = true;

        if (dir == Arrival::FromChild) {
            if (in_cond[v]) continue;
            for (NodeId p : g.parents(v)) frontier.emplace_back(p, Arrival::FromChild);
            for (NodeId c : g.children(v)) frontier.emplace_back(c, Arrival::FromParent);
        } else {
            if (!in_cond[v])
                for (NodeId c : g.children(v)) frontier.emplace_back(c, Arrival::FromParent);
            if (opens_collider[v])
                for (NodeId p : g.parents(v)) frontier.emplace_back(p, Arrival::FromChild);
        }
    }
    reachable[a] = false;
    return reachable;
}

bool d_separated(const Dag& g, NodeId a, NodeId b, std::span<const NodeId> cond) {
    check_query(g, a, b, cond);
    return !d_connected_from(g, a, cond)[b];
}

bool d_separated(const Dag& g, const std::string& a, const std::string& b,
                 const std::vector<std::string>& cond) {
    std::vector<NodeId> ids;
    ids.reserve(cond.size());
    for (const auto& c : cond) ids.push_back(g.id(c));
    return d_separated(g, g.id(a), g.id(b), ids);
}

std::vector<Path> enumerate_active_paths(const Dag& g, NodeId a, NodeId b, std::size_t max_nodes) {
    g.name(a);
    g.name(b);
    if (a == b) throw GraphError("path enumeration needs two distinct nodes");
    if (g.size() > max_nodes)
        throw GraphError("path enumeration refused: " + std::to_string(g.size()) + " nodes exceeds limit of " +
                         std::to_string(max_nodes));

    // Undirected neighbours in ascending id order, so a depth-first walk emits paths in
    // lexicographic order.
    std::vector<std::vector<NodeId>> nbrs(g.size());
    for (NodeId v = 0; v < g.size(); ++v) {
        auto& nv = nbrs[v];
        nv.assign(g.parents(v).begin(), g.parents(v).end());
        nv.insert(nv.end(), g.children(v).begin(), g.children(v).end());
        std::sort(nv.begin(), nv.end());
    }

    std::vector<Path> out;
    Path path{a};
    std::vector<bool> on_path(g.size(), false);
    on_path[a] = true;

    // A path stays collider-free as long as no interior node has both neighbours as parents.
    auto extend = [&](auto&& self) -> void {
        const NodeId v = path.back();
        for (NodeId w : nbrs[v]) {
            if (on_path[w]) continue;
            if (path.size() >= 2) {
                const NodeId u = path[path.size() - 2];
                if (g.has_edge(u, v) && g.has_edge(w, v)) continue;
            }
            path.push_back(w);
            if (w == b) {
                out.push_back(path);
            } else {
                on_path[w] = true;
                self(self);
                on_path[w] = false;
            }
            path.pop_back();
        }
    };
    extend(extend);
    return out;
}

}  // namespace ldp::graph
