#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ldp/graph/dag.hpp"

namespace ldp::graph {

enum class PathType { Type1 = 1, Type2, Type3, Type4, Type5, Type6 };

struct PathTypePair {
    PathType rel_x;
    PathType rel_y;

    friend bool operator==(const PathTypePair&, const PathTypePair&) = default;
};

enum class PartitionLabel { Z1, Z2, Z3, Z4, Z5, Z6, Z7, Z8, ZPost, Z57, NotIdentifiable };

inline constexpr std::array kAllLabels{
    PartitionLabel::Z1, PartitionLabel::Z2,    PartitionLabel::Z3,  PartitionLabel::Z4,
    PartitionLabel::Z5, PartitionLabel::Z6,    PartitionLabel::Z7,  PartitionLabel::Z8,
    PartitionLabel::ZPost, PartitionLabel::Z57, PartitionLabel::NotIdentifiable};

std::string_view to_string(PartitionLabel label);
std::string_view to_string(PathType type);
/// Throws std::invalid_argument on an unknown label string.
PartitionLabel parse_label(std::string_view text);

/// Ground-truth labels use Z1..Z8 only.
bool is_ground_truth_label(PartitionLabel label);

/// Per-node label map keyed by node name.
using LabelMap = std::map<std::string, PartitionLabel>;

/// Kinds of active (collider-free) paths between `z` and the exposure (resp. outcome), the
/// other endpoint removed from the graph. Decided by reachability rather than enumeration.
PathTypePair classify_path_types(const Dag& g, NodeId z);
PathTypePair classify_path_types(const Dag& g, std::string_view z);

/// Grid lookup from (type wrt X, type wrt Y). Returns nullopt for the impossible cells.
std::optional<PartitionLabel> partition_cell(PathTypePair pair);

/// Label for every candidate node. Throws GraphError if a node lands in an impossible cell.
LabelMap ground_truth_partition(const Dag& g);

}  // namespace ldp::graph
