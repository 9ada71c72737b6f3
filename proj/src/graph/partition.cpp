#include "ldp/graph/partition.hpp"

#include <stdexcept>

namespace ldp::graph {

namespace {

constexpr std::array<std::string_view, 11> kLabelNames{"Z1", "Z2", "Z3",    "Z4",  "Z5",
                                                       "Z6", "Z7", "Z8",    "ZPost", "Z57",
                                                       "NotIdentifiable"};

using L = PartitionLabel;
using Cell = std::optional<PartitionLabel>;

// Rows: type relative to Y. Columns: type relative to X.
const std::array<std::array<Cell, 6>, 6> kGrid{{
    {L::Z8, L::Z5, L::Z7, L::Z5, L::Z5, L::Z7},
    {L::Z4, L::Z1, L::Z3, L::Z1, L::Z1, L::Z3},
    {L::Z6, std::nullopt, L::Z2, L::Z2, std::nullopt, L::Z2},
    {L::Z4, L::Z1, L::Z2, L::Z2, L::Z1, L::Z2},
    {L::Z4, L::Z1, L::Z3, L::Z1, L::Z1, L::Z3},
    {L::Z6, std::nullopt, L::Z2, L::Z2, std::nullopt, L::Z2},
}};

std::vector<bool> only(std::size_t n, std::initializer_list<NodeId> nodes) {
    std::vector<bool> mask(n, false);
    for (NodeId v : nodes) mask[v] = true;
    return mask;
}

PathType classify_against(const Dag& g, NodeId z, NodeId target, NodeId other) {
    const std::size_t n = g.size();
    const auto without_other = only(n, {other});
    const bool into_target = reach(g, z, true, without_other)[target];
    const bool from_target = reach(g, target, true, without_other)[z];

    // A fork z <- ... <- S -> ... -> target exists iff some S is an ancestor of z avoiding
    // the target and an ancestor of the target avoiding z. Where the two directed paths
    // meet last, they split into a simple fork.
    const auto up_from_z = reach(g, z, false, only(n, {target, other}));
    const auto up_from_target = reach(g, target, false, only(n, {z, other}));
    bool fork = false;
    for (NodeId s = 0; s < n && !fork; ++s) fork = up_from_z[s] && up_from_target[s];

    if (into_target && from_target) throw GraphError("cycle through " + g.name(z));
    if (into_target) return fork ? PathType::Type5 : PathType::Type2;
    if (from_target) return fork ? PathType::Type6 : PathType::Type3;
    return fork ? PathType::Type4 : PathType::Type1;
}

}  // namespace

std::string_view to_string(PartitionLabel label) { return kLabelNames.at(static_cast<std::size_t>(label)); }

std::string_view to_string(PathType type) {
    static constexpr std::array<std::string_view, 6> names{"Type1", "Type2", "Type3", "Type4", "Type5", "Type6"};
    return names.at(static_cast<std::size_t>(type) - 1);
}

PartitionLabel parse_label(std::string_view text) {
    for (std::size_t i = 0; i < kLabelNames.size(); ++i)
        if (kLabelNames[i] == text) return static_cast<PartitionLabel>(i);
    throw std::invalid_argument("unknown partition label: " + std::string(text));
}

bool is_ground_truth_label(PartitionLabel label) {
    return static_cast<int>(label) <= static_cast<int>(PartitionLabel::Z8);
}

PathTypePair classify_path_types(const Dag& g, NodeId z) {
    g.name(z);
    if (z == g.exposure() || z == g.outcome())
        throw GraphError("cannot classify the exposure or outcome: " + g.name(z));
    return {classify_against(g, z, g.exposure(), g.outcome()), classify_against(g, z, g.outcome(), g.exposure())};
}

PathTypePair classify_path_types(const Dag& g, std::string_view z) { return classify_path_types(g, g.id(z)); }

std::optional<PartitionLabel> partition_cell(PathTypePair pair) {
    return kGrid[static_cast<std::size_t>(pair.rel_y) - 1][static_cast<std::size_t>(pair.rel_x) - 1];
}

LabelMap ground_truth_partition(const Dag& g) {
    LabelMap out;
    for (NodeId z : g.candidates()) {
        const auto pair = classify_path_types(g, z);
        const auto cell = partition_cell(pair);
        if (!cell)
            throw GraphError("node " + g.name(z) + " classified into impossible cell (" +
                             std::string(to_string(pair.rel_x)) + ", " + std::string(to_string(pair.rel_y)) + ")");
        out.emplace(g.name(z), *cell);
    }
    return out;
}

}  // namespace ldp::graph
