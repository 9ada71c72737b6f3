#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldp/core/ldp.hpp"
#include "ldp/eval/metrics.hpp"

namespace ldp::experiment {

enum class TestKind { Oracle, FisherZ, ChiSquare };

std::string_view to_string(TestKind t);
TestKind parse_test_kind(std::string_view text);

struct ExperimentConfig {
    std::string graph_id;
    std::string process_id;  // unused by the oracle
    std::size_t n = 10000;   // unused by the oracle
    std::size_t replicates = 1;
    double alpha = 0.01;
    TestKind test = TestKind::Oracle;
    std::vector<std::string> hidden;
    std::uint64_t seed = 0;
    Criterion criterion = Criterion::CommonCause;

    void validate() const;
};

inline constexpr int kConfigSchemaVersion = 1;

/// Requires "schema_version": 1; rejects unknown keys. LDP_SEED, when set in the
/// environment, replaces the seed.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ExperimentConfig& config);

struct ReplicateResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    LdpResult ldp;
    std::vector<std::string> selected;
    eval::ReplicateMetrics metrics;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ReplicateResult> replicates;  // by replicate index
    eval::MetricsReport report;
};

/// Seed of replicate i: config.seed + i.
ReplicateResult run_replicate(const ExperimentConfig& config, std::size_t index);

/// Replicates spread over `workers` threads (0 = hardware concurrency). Each replicate owns
/// its tester and random streams, so results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 0);

/// One row per replicate plus an "aggregate" row; runtimes are written as NA unless
/// `with_timing` is set, so output is byte-stable by default.
void write_experiment_csv(std::ostream& out, const ExperimentResult& result, bool with_timing);

struct ScalingRow {
    std::size_t k = 0;
    std::size_t candidates = 0;
    std::size_t tests_executed = 0;
    double runtime_ms = 0.0;
};

/// Oracle LDP over scaling_graph(k) for k = 1..max_k (1 <= max_k <= 10).
std::vector<ScalingRow> run_scaling(std::size_t max_k);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows, bool with_timing);

}  // namespace ldp::experiment
