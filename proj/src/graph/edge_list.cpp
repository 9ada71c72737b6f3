#include "ldp/graph/edge_list.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace ldp::graph {

Dag read_edge_list(std::istream& in) {
    std::vector<std::string> nodes;
    std::unordered_map<std::string, bool> known;
    std::vector<Edge> edges;
    std::optional<std::string> exposure, outcome;

    auto declare = [&](const std::string& name) {
        if (known.emplace(name, true).second) nodes.push_back(name);
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::string first, second, extra;
        if (!(fields >> first)) continue;
        const auto where = " (line " + std::to_string(lineno) + ")";
        if (first.front() == '#') {
            if (first != "#exposure" && first != "#outcome" && first != "#node") continue;
            if (!(fields >> second) || (fields >> extra)) throw GraphError("malformed directive" + where);
            if (first == "#node") {
                declare(second);
                continue;
            }
            auto& slot = first == "#exposure" ? exposure : outcome;
            if (slot) throw GraphError("duplicate " + first + where);
            slot = second;
            continue;
        }
        if (!(fields >> second) || (fields >> extra)) throw GraphError("expected 'parent child'" + where);
        declare(first);
        declare(second);
        edges.push_back({first, second});
    }
    if (!exposure || !outcome) throw GraphError("edge list needs #exposure and #outcome");
    return Dag(std::move(nodes), edges, *exposure, *outcome);
}

Dag read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open " + path.string());
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Dag& g) {
    out << "#exposure " << g.name(g.exposure()) << '\n';
    out << "#outcome " << g.name(g.outcome()) << '\n';
    for (const auto& name : g.names()) out << "#node " << name << '\n';
    for (const auto& e : g.edges()) out << e.parent << ' ' << e.child << '\n';
}

std::string to_edge_list(const Dag& g) {
    std::ostringstream out;
    write_edge_list(out, g);
    return out.str();
}

}  // namespace ldp::graph
