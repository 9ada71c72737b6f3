#include "ldp/graph/adjustment.hpp"

#include <algorithm>

#include "ldp/graph/dseparation.hpp"

namespace ldp::graph {

bool is_valid_adjustment_set(const Dag& g, std::span<const NodeId> adjustment) {
    const NodeId x = g.exposure();
    const NodeId y = g.outcome();
    for (NodeId v : adjustment) {
        g.name(v);
        if (v == x || v == y) throw GraphError("adjustment set may not contain the exposure or outcome");
    }
    const auto desc = reach(g, x, true, std::vector<bool>(g.size(), false));
    if (std::any_of(adjustment.begin(), adjustment.end(), [&](NodeId v) { return desc[v]; })) return false;
    return d_separated(g.without_out_edges(x), x, y, adjustment);
}

bool is_valid_adjustment_set(const Dag& g, const std::vector<std::string>& adjustment) {
    const auto ids = g.ids(adjustment);
    return is_valid_adjustment_set(g, std::span<const NodeId>(ids));
}

}  // namespace ldp::graph
