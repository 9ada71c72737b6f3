#include "ldp/synth/scm.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "ldp/synth/graphs.hpp"

namespace ldp::synth {

namespace {

constexpr std::array<std::string_view, 3> kMechanismNames{"linear", "quadratic", "cube_root"};
constexpr std::array<std::string_view, 5> kNoiseNames{"bernoulli", "hypergeometric", "gaussian", "uniform",
                                                      "exponential"};

template <typename E, std::size_t N>
E parse_enum(const std::array<std::string_view, N>& names, std::string_view text, const char* what) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == text) return static_cast<E>(i);
    throw std::invalid_argument(std::string("unknown ") + what + ": " + std::string(text));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

int hypergeometric(std::mt19937_64& rng, const Noise& n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int got = 0;
    for (int i = 0; i < n.draws; ++i)
        if (u(rng) * (n.population - i) < n.successes - got) ++got;
    return got;
}

double draw_noise(std::mt19937_64& rng, const Noise& n) {
    switch (n.kind) {
        case NoiseKind::Bernoulli: return std::bernoulli_distribution(n.p)(rng) ? 1.0 : 0.0;
        case NoiseKind::Hypergeometric: return hypergeometric(rng, n);
        case NoiseKind::Gaussian: return std::normal_distribution<double>(0.0, n.sigma)(rng);
        case NoiseKind::Uniform: return std::uniform_real_distribution<double>(n.low, n.high)(rng);
        case NoiseKind::Exponential: return std::exponential_distribution<double>(n.lambda)(rng);
    }
    return 0.0;
}

double apply(Mechanism m, double c, double s) {
    switch (m) {
        case Mechanism::Linear: return c * s;
        case Mechanism::Quadratic: return c * s * s;
        case Mechanism::CubeRoot: return c * std::cbrt(s);
    }
    return 0.0;
}

struct Process {
    const char* id;
    Mechanism mechanism;
    NoiseKind noise;
};

const std::vector<Process>& processes() {
    static const std::vector<Process> list{
        {"linear_bernoulli", Mechanism::Linear, NoiseKind::Bernoulli},
        {"linear_hypergeometric", Mechanism::Linear, NoiseKind::Hypergeometric},
        {"quadratic_bernoulli", Mechanism::Quadratic, NoiseKind::Bernoulli},
        {"quadratic_hypergeometric", Mechanism::Quadratic, NoiseKind::Hypergeometric},
        {"cube_root_bernoulli", Mechanism::CubeRoot, NoiseKind::Bernoulli},
        {"cube_root_hypergeometric", Mechanism::CubeRoot, NoiseKind::Hypergeometric},
        {"linear_gaussian", Mechanism::Linear, NoiseKind::Gaussian},
        {"linear_uniform", Mechanism::Linear, NoiseKind::Uniform},
        {"linear_exponential", Mechanism::Linear, NoiseKind::Exponential},
        {"linear_gaussian_ate", Mechanism::Linear, NoiseKind::Gaussian},
    };
    return list;
}

// Discrete coefficients per (graph, process).
std::optional<double> discrete_coefficient(std::string_view graph_id, std::string_view process_id) {
    struct Row {
        const char* graph;
        const char* process;
        double c;
    };
    static const Row rows[] = {
        {"ten_node", "linear_bernoulli", 0.3},
        {"ten_node", "linear_hypergeometric", 0.3},
        {"ten_node", "quadratic_bernoulli", -1.4},
        {"ten_node", "quadratic_hypergeometric", 0.4},
        {"ten_node", "cube_root_bernoulli", 1.2},
        {"ten_node", "cube_root_hypergeometric", 0.7},
        {"ten_node_no_direct", "linear_bernoulli", 0.45},
        {"ten_node_no_direct", "linear_hypergeometric", 0.45},
        {"ten_node_no_direct", "quadratic_bernoulli", -1.4},
        {"ten_node_no_direct", "quadratic_hypergeometric", 0.4},
        {"ten_node_no_direct", "cube_root_bernoulli", 1.2},
        {"ten_node_no_direct", "cube_root_hypergeometric", 0.7},
        {"m_structure_13", "linear_bernoulli", 1.5},
        {"m_structure_13", "quadratic_hypergeometric", 1.5},
        {"butterfly_13", "linear_bernoulli", 1.9},
        {"butterfly_13", "quadratic_hypergeometric", 2.8},
        {"latent_18", "linear_bernoulli", 1.3},
    };
    for (const auto& r : rows)
        if (graph_id == r.graph && process_id == r.process) return r.c;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Mechanism m) { return kMechanismNames.at(static_cast<std::size_t>(m)); }
std::string_view to_string(NoiseKind k) { return kNoiseNames.at(static_cast<std::size_t>(k)); }

std::uint64_t stream_seed(std::uint64_t seed, std::string_view key) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : key) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h ^ splitmix64(seed));
}

void Noise::validate() const {
    auto bad = [](const std::string& msg) { throw std::invalid_argument("invalid noise: " + msg); };
    switch (kind) {
        case NoiseKind::Bernoulli:
            if (!(p >= 0.0 && p <= 1.0)) bad("Bernoulli p must lie in [0, 1]");
            break;
        case NoiseKind::Hypergeometric:
            if (population <= 0 || successes < 0 || successes > population || draws < 0 || draws > population)
                bad("hypergeometric needs 0 <= successes, draws <= population");
            break;
        case NoiseKind::Gaussian:
            if (!(sigma > 0.0)) bad("Gaussian sigma must be positive");
            break;
        case NoiseKind::Uniform:
            if (!(low < high)) bad("uniform needs low < high");
            break;
        case NoiseKind::Exponential:
            if (!(lambda > 0.0)) bad("exponential lambda must be positive");
            break;
    }
}

void ScmSpec::validate() const {
    for (const auto& name : dag.names()) {
        auto it = equations.find(name);
        if (it == equations.end()) throw std::invalid_argument("no structural equation for node " + name);
        it->second.noise.validate();
        if (it->second.noise.discrete() != discretize)
            throw std::invalid_argument("node " + name + ": discrete noise requires discretize, continuous forbids it");
        for (const auto& [parent, w] : it->second.weights) {
            (void)w;
            const auto p = dag.find(parent);
            if (!p || !dag.has_edge(*p, dag.id(name)))
                throw std::invalid_argument("weight given for non-edge " + parent + " -> " + name);
        }
    }
    if (equations.size() != dag.size()) throw std::invalid_argument("structural equation for unknown node");
    if (random_weights && !(random_weights->first < random_weights->second))
        throw std::invalid_argument("random weight range must be non-empty");
}

double ScmSpec::edge_weight(const std::string& parent, const std::string& child, std::uint64_t seed) const {
    const auto& eq = equations.at(child);
    if (auto it = eq.weights.find(parent); it != eq.weights.end()) return it->second;
    if (!random_weights) return 1.0;
    const double u = unit_interval(stream_seed(seed, "edge:" + parent + "->" + child));
    return random_weights->first + u * (random_weights->second - random_weights->first);
}

const std::vector<std::string>& process_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& p : processes()) out.emplace_back(p.id);
        return out;
    }();
    return ids;
}

ScmSpec preset(std::string_view graph_id, std::string_view process_id) {
    const Process* proc = nullptr;
    for (const auto& p : processes())
        if (process_id == p.id) proc = &p;
    if (!proc) throw std::invalid_argument("unknown process id: " + std::string(process_id));

    ScmSpec spec{std::string(graph_id) + "/" + std::string(process_id), named_graph(graph_id), {}, false, {}};
    Equation eq;
    eq.mechanism = proc->mechanism;
    eq.noise.kind = proc->noise;
    if (eq.noise.discrete()) {
        const auto c = discrete_coefficient(graph_id, process_id);
        if (!c)
            throw std::invalid_argument("process " + std::string(process_id) + " is not defined for graph " +
                                        std::string(graph_id));
        eq.coefficient = *c;
        spec.discretize = true;
    } else if (process_id == "linear_gaussian_ate") {
        if (graph_id != "ten_node")
            throw std::invalid_argument("process linear_gaussian_ate is only defined for graph ten_node");
    } else {
        spec.random_weights = std::pair{1.0, 3.0};
    }
    for (const auto& name : spec.dag.names()) spec.equations[name] = eq;
    if (process_id == "linear_gaussian_ate") spec.equations["Y"].weights["X"] = 2.75;
    spec.validate();
    return spec;
}

std::vector<std::pair<std::string, std::string>> preset_pairs() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& g : named_graph_ids())
        for (const auto& p : process_ids()) {
            const bool continuous = p == "linear_gaussian" || p == "linear_uniform" || p == "linear_exponential";
            if (continuous || discrete_coefficient(g, p) || (g == "ten_node" && p == "linear_gaussian_ate"))
                out.emplace_back(g, p);
        }
    return out;
}

data::Dataset sample(const ScmSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample size must be at least 1");
    spec.validate();
    const auto& g = spec.dag;
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd values(rows, static_cast<Eigen::Index>(g.size()));
    for (graph::NodeId v : g.topological_order()) {
        const auto& name = g.name(v);
        const auto& eq = spec.equations.at(name);
        std::vector<std::pair<Eigen::Index, double>> parents;
        std::vector<graph::NodeId> pa(g.parents(v).begin(), g.parents(v).end());
        // sum in name order so the result does not depend on node ids
        std::sort(pa.begin(), pa.end(), [&](auto a, auto b) { return g.name(a) < g.name(b); });
        for (graph::NodeId p : pa)
            parents.emplace_back(static_cast<Eigen::Index>(p), spec.edge_weight(g.name(p), name, seed));

        std::mt19937_64 rng(stream_seed(seed, "node:" + name));
        auto col = values.col(static_cast<Eigen::Index>(v));
        for (Eigen::Index i = 0; i < rows; ++i) {
            double value = 0.0;
            if (!parents.empty()) {
                double s = 0.0;
                for (const auto& [p, w] : parents) s += w * values(i, p);
                value = apply(eq.mechanism, eq.coefficient, s);
                if (spec.discretize) value = std::floor(value);
            }
            col[i] = value + draw_noise(rng, eq.noise);
        }
    }
    data::Dataset out(g.names(), std::move(values), spec.discretize);
    out.seed = seed;
    out.provenance = spec.id;
    return out;
}

double linear_total_effect(const ScmSpec& spec, std::uint64_t seed) {
    if (spec.discretize) throw std::logic_error("total effect is only defined for undiscretized specs");
    const auto& g = spec.dag;
    // effect[v] = total effect of the exposure on v, accumulated in topological order.
    std::vector<double> effect(g.size(), 0.0);
    effect[g.exposure()] = 1.0;
    for (graph::NodeId v : g.topological_order()) {
        if (v == g.exposure()) continue;
        const auto& eq = spec.equations.at(g.name(v));
        if (eq.mechanism != Mechanism::Linear && !g.parents(v).empty())
            throw std::logic_error("total effect needs linear mechanisms");
        double e = 0.0;
        for (graph::NodeId p : g.parents(v)) e += spec.edge_weight(g.name(p), g.name(v), seed) * effect[p];
        effect[v] = eq.coefficient * e;
    }
    return effect[g.outcome()];
}

nlohmann::ordered_json to_json(const ScmSpec& spec) {
    using J = nlohmann::ordered_json;
    J graph;
    graph["exposure"] = spec.dag.name(spec.dag.exposure());
    graph["outcome"] = spec.dag.name(spec.dag.outcome());
    graph["nodes"] = spec.dag.names();
    J edges = J::array();
    for (const auto& e : spec.dag.edges()) edges.push_back({e.parent, e.child});
    graph["edges"] = edges;

    J eqs = J::object();
    for (const auto& name : spec.dag.names()) {
        const auto& eq = spec.equations.at(name);
        J noise;
        noise["kind"] = std::string(to_string(eq.noise.kind));
        switch (eq.noise.kind) {
            case NoiseKind::Bernoulli: noise["p"] = eq.noise.p; break;
            case NoiseKind::Hypergeometric:
                noise["population"] = eq.noise.population;
                noise["successes"] = eq.noise.successes;
                noise["draws"] = eq.noise.draws;
                break;
            case NoiseKind::Gaussian: noise["sigma"] = eq.noise.sigma; break;
            case NoiseKind::Uniform:
                noise["low"] = eq.noise.low;
                noise["high"] = eq.noise.high;
                break;
            case NoiseKind::Exponential: noise["lambda"] = eq.noise.lambda; break;
        }
        J e;
        e["mechanism"] = std::string(to_string(eq.mechanism));
        e["coefficient"] = eq.coefficient;
        e["noise"] = noise;
        if (!eq.weights.empty()) e["weights"] = eq.weights;
        eqs[name] = e;
    }

    J out;
    out["schema_version"] = 1;
    out["id"] = spec.id;
    out["graph"] = graph;
    out["discretize"] = spec.discretize;
    out["random_weights"] = spec.random_weights ? J{spec.random_weights->first, spec.random_weights->second} : J(nullptr);
    out["equations"] = eqs;
    return out;
}

ScmSpec scm_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != 1) throw std::invalid_argument("unsupported schema_version");
        const auto& gj = j.at("graph");
        std::vector<graph::Edge> edges;
        for (const auto& e : gj.at("edges")) edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
        ScmSpec spec{j.at("id").get<std::string>(),
                     graph::Dag(gj.at("nodes").get<std::vector<std::string>>(), edges,
                                gj.at("exposure").get<std::string>(), gj.at("outcome").get<std::string>()),
                     {},
                     j.at("discretize").get<bool>(),
                     {}};
        if (const auto& rw = j.at("random_weights"); !rw.is_null())
            spec.random_weights = std::pair{rw.at(0).get<double>(), rw.at(1).get<double>()};
        for (const auto& [name, ej] : j.at("equations").items()) {
            Equation eq;
            eq.mechanism = parse_enum<Mechanism>(kMechanismNames, ej.at("mechanism").get<std::string>(), "mechanism");
            eq.coefficient = ej.at("coefficient").get<double>();
            const auto& nj = ej.at("noise");
            eq.noise.kind = parse_enum<NoiseKind>(kNoiseNames, nj.at("kind").get<std::string>(), "noise kind");
            eq.noise.p = nj.value("p", eq.noise.p);
            eq.noise.population = nj.value("population", eq.noise.population);
            eq.noise.successes = nj.value("successes", eq.noise.successes);
            eq.noise.draws = nj.value("draws", eq.noise.draws);
            eq.noise.sigma = nj.value("sigma", eq.noise.sigma);
            eq.noise.low = nj.value("low", eq.noise.low);
            eq.noise.high = nj.value("high", eq.noise.high);
            eq.noise.lambda = nj.value("lambda", eq.noise.lambda);
            if (ej.contains("weights")) eq.weights = ej.at("weights").get<std::map<std::string, double>>();
            spec.equations[name] = eq;
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed SCM spec: ") + e.what());
    }
}

ScmSpec load_scm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
    }
    return scm_from_json(j);
}

}  // namespace ldp::synth
