#include "ldp/synth/graphs.hpp"

#include <stdexcept>

namespace ldp::synth {

namespace {

using graph::Dag;
using graph::Edge;
using Nodes = std::vector<std::string>;
using Edges = std::vector<Edge>;

const Nodes kTenNodes{"X", "Y", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8"};

Edges ten_node_edges(bool direct) {
    Edges e{{"Z1", "X"}, {"Z1", "Y"}, {"X", "Z2"}, {"Y", "Z2"}, {"X", "Z3"}, {"Z3", "Y"},
            {"Z4", "Y"}, {"Z5", "X"}, {"Y", "Z6"}, {"X", "Z7"}};
    if (direct) e.insert(e.begin(), {"X", "Y"});
    return e;
}

Dag ten_node(bool direct) { return Dag(kTenNodes, ten_node_edges(direct), "X", "Y"); }

Dag m_structure() {
    Nodes nodes = kTenNodes;
    nodes.insert(nodes.end(), {"M1", "M2", "M3"});
    Edges e = ten_node_edges(true);
    e.insert(e.end(), {{"M1", "X"}, {"M2", "Y"}, {"M1", "M3"}, {"M2", "M3"}});
    return Dag(nodes, e, "X", "Y");
}

Dag butterfly() {
    Nodes nodes = kTenNodes;
    nodes.insert(nodes.end(), {"B1", "B2", "B3"});
    Edges e = ten_node_edges(true);
    e.insert(e.end(), {{"B1", "X"}, {"B2", "Y"}, {"B1", "B3"}, {"B2", "B3"}, {"B3", "X"}, {"B3", "Y"}});
    return Dag(nodes, e, "X", "Y");
}

Dag seventeen_node() {
    Nodes nodes{"X", "Y", "Z1", "Z2", "Z3_1", "Z3_2", "Z4", "Z5", "Z6", "Z7", "Z8",
                "M1", "M2", "M3", "B1", "B2", "B3"};
    Edges e{{"X", "Y"},     {"Z1", "X"},   {"Z1", "Y"},   {"X", "Z2"},   {"Y", "Z2"},
            {"X", "Z3_1"},  {"Z3_1", "Z3_2"}, {"Z3_2", "Y"}, {"Z4", "Y"},  {"Z5", "X"},
            {"Y", "Z6"},    {"X", "Z7"},   {"M1", "X"},   {"M2", "Y"},   {"M1", "M3"},
            {"M2", "M3"},   {"B1", "X"},   {"B2", "Y"},   {"B1", "B3"},  {"B2", "B3"},
            {"B3", "X"},    {"B3", "Y"}};
    return Dag(nodes, e, "X", "Y");
}

Dag complex_backdoor() {
    Nodes nodes{"X",    "Y",    "Z1_1", "Z1_2", "Z1_3", "Z1_4", "Z1_5", "Z1_6",
                "Z2_1", "Z2_2", "Z3",   "Z4",   "Z5",   "Z6",   "Z7",   "Z8"};
    Edges e{{"X", "Y"},       {"Z1_1", "X"},    {"Z1_1", "Y"},    {"Z1_2", "X"},    {"Z1_3", "Y"},
            {"Z1_4", "Z1_2"}, {"Z1_4", "Z1_3"}, {"Z1_5", "Z1_2"}, {"Z1_5", "Z1_4"}, {"Z1_6", "Z1_3"},
            {"Z1_6", "Z1_4"}, {"Z1_5", "Z2_2"}, {"Z1_6", "Z2_2"}, {"X", "Z2_1"},    {"Y", "Z2_1"},
            {"X", "Z3"},      {"Z3", "Y"},      {"Z4", "Y"},      {"Z4", "Z1_3"},   {"Z5", "X"},
            {"Z5", "Z1_2"},   {"Y", "Z6"},      {"X", "Z7"}};
    return Dag(nodes, e, "X", "Y");
}

Dag latent_18() {
    Nodes nodes{"X",  "Y",  "Z1",  "B1",  "B2",  "B3",  "M1", "M2", "M3",
                "Z2", "Z3", "Z4a", "Z4b", "Z5a", "Z5b", "Z6", "Z7", "Z8"};
    Edges e{{"X", "Y"},    {"Z1", "X"},   {"Z1", "Y"},    {"B1", "X"},    {"B2", "Y"},  {"B1", "B3"},
            {"B2", "B3"},  {"B3", "X"},   {"B3", "Y"},    {"M1", "X"},    {"M2", "Y"},  {"M1", "M3"},
            {"M2", "M3"},  {"X", "Z2"},   {"Y", "Z2"},    {"Z6", "Z2"},   {"X", "Z3"},  {"Z3", "Y"},
            {"Z4a", "Y"},  {"Z4a", "Z4b"}, {"Z5a", "X"},  {"Z5a", "Z5b"}, {"Y", "Z6"},  {"X", "Z7"}};
    return Dag(nodes, e, "X", "Y");
}

}  // namespace

const std::vector<std::string>& named_graph_ids() {
    static const std::vector<std::string> ids{"ten_node",       "ten_node_no_direct", "m_structure_13", "butterfly_13",
                                              "seventeen_node", "complex_backdoor",   "latent_18"};
    return ids;
}

Dag named_graph(std::string_view id) {
    if (id == "ten_node") return ten_node(true);
    if (id == "ten_node_no_direct") return ten_node(false);
    if (id == "m_structure_13") return m_structure();
    if (id == "butterfly_13") return butterfly();
    if (id == "seventeen_node") return seventeen_node();
    if (id == "complex_backdoor") return complex_backdoor();
    if (id == "latent_18") return latent_18();
    throw std::invalid_argument("unknown graph id: " + std::string(id));
}

Dag scaling_graph(std::size_t k) {
    if (k == 0) throw std::invalid_argument("scaling graph needs k >= 1");
    Nodes nodes{"X", "Y"};
    Edges e{{"X", "Y"}};
    for (int p = 1; p <= 8; ++p) {
        for (std::size_t i = 0; i < k; ++i) {
            const std::string z = "Z" + std::to_string(p) + "_" + std::to_string(i + 1);
            nodes.push_back(z);
            switch (p) {
                case 1: e.insert(e.end(), {{z, "X"}, {z, "Y"}}); break;
                case 2: e.insert(e.end(), {{"X", z}, {"Y", z}}); break;
                case 3: e.insert(e.end(), {{"X", z}, {z, "Y"}}); break;
                case 4: e.push_back({z, "Y"}); break;
                case 5: e.push_back({z, "X"}); break;
                case 6: e.push_back({"Y", z}); break;
                case 7: e.push_back({"X", z}); break;
                default: break;
            }
        }
    }
    return Dag(nodes, e, "X", "Y");
}

}  // namespace ldp::synth
