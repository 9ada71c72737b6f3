#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ldp/data/dataset.hpp"
#include "ldp/graph/dag.hpp"

namespace ldp::synth {

enum class Mechanism { Linear, Quadratic, CubeRoot };
enum class NoiseKind { Bernoulli, Hypergeometric, Gaussian, Uniform, Exponential };

struct Noise {
    NoiseKind kind = NoiseKind::Gaussian;
    double p = 0.5;          // Bernoulli
    int population = 20;     // Hypergeometric
    int successes = 7;
    int draws = 5;
    double sigma = 1.0;      // Gaussian, mean 0
    double low = 0.0;        // Uniform [low, high)
    double high = 1.0;
    double lambda = 1.0;     // Exponential

    bool discrete() const { return kind == NoiseKind::Bernoulli || kind == NoiseKind::Hypergeometric; }
    void validate() const;
};

/// V = f(c * g(sum_p w_p * Pa_p)) + noise, with g the mechanism, and f = floor when the
/// spec is discretized. Parents missing from `weights` use the spec-wide weight rule.
struct Equation {
    Mechanism mechanism = Mechanism::Linear;
    double coefficient = 1.0;
    Noise noise;
    std::map<std::string, double> weights;
};

struct ScmSpec {
    std::string id;
    graph::Dag dag;
    std::map<std::string, Equation> equations;  // one per node
    bool discretize = false;
    /// When set, every edge without an explicit weight gets a weight drawn uniformly from
    /// [first, second) per sampling seed. Otherwise such edges weigh 1.
    std::optional<std::pair<double, double>> random_weights;

    void validate() const;
    /// Weight of parent -> child under `seed`.
    double edge_weight(const std::string& parent, const std::string& child, std::uint64_t seed) const;
};

std::string_view to_string(Mechanism m);
std::string_view to_string(NoiseKind k);

/// Process presets, each defined for a subset of the named graphs.
const std::vector<std::string>& process_ids();
/// Throws std::invalid_argument if the process is unknown or not defined for the graph.
ScmSpec preset(std::string_view graph_id, std::string_view process_id);
/// (graph id, process id) pairs with a preset, in a fixed order.
std::vector<std::pair<std::string, std::string>> preset_pairs();

/// Seeded draw of n rows, nodes evaluated in topological order. Each node has its own
/// random stream keyed by (seed, node name).
data::Dataset sample(const ScmSpec& spec, std::size_t n, std::uint64_t seed);

/// Sum over directed exposure-to-outcome paths of the product of edge effects. Only
/// meaningful for undiscretized linear specs; throws std::logic_error otherwise.
double linear_total_effect(const ScmSpec& spec, std::uint64_t seed);

nlohmann::ordered_json to_json(const ScmSpec& spec);
ScmSpec scm_from_json(const nlohmann::json& j);
ScmSpec load_scm(const std::filesystem::path& path);

/// 64-bit FNV-1a followed by a splitmix64 finalizer; stable across platforms.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view key);

}  // namespace ldp::synth
