#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ldp/graph/dag.hpp"

namespace testkit {

struct RandomDagOptions {
    std::size_t min_nodes = 5;
    std::size_t max_nodes = 12;
    double edge_prob = 0.3;
    // Adds root nodes A4 -> Y and A5 -> X so an observed Z4 and a usable Z5 always exist.
    bool anchor = false;
    // Redraw until X is an ancestor of Y.
    bool require_effect = false;
};

// Erdos-Renyi DAG over a random topological order with X before Y. Redrawn until X and Y
// are d-connected given the empty set.
ldp::graph::Dag random_dag(std::mt19937_64& rng, const RandomDagOptions& opt);

// At least one Z4, at least one Z5, and every Z1 marginally independent of some Z5.
bool satisfies_c1_c2(const ldp::graph::Dag& g, const std::vector<std::string>& observed);

}  // namespace testkit
