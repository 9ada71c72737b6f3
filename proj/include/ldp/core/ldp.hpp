#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ldp/ci/tester.hpp"
#include "ldp/graph/partition.hpp"

namespace ldp {

using graph::LabelMap;
using graph::PartitionLabel;

struct StepRecord {
    int step;
    std::string variable;
    ci::CiQuery query;
    ci::CiOutcome outcome;
    bool cached;
};

struct LdpResult {
    std::vector<std::string> candidates;  // input order
    LabelMap labels;
    std::optional<std::vector<std::string>> vas;
    bool z5_criterion_passed = false;
    ci::TestCounters counters;
    std::vector<StepRecord> step_trace;
    std::vector<std::string> warnings;

    /// Candidates carrying `label`, in input order.
    std::vector<std::string> members(PartitionLabel label) const;
};

/// Local Discovery by Partitioning over `candidates` for the pair (x, y).
///
/// Queries go through a private cache in front of `tester`, so `counters.executed` counts
/// distinct queries. Significance levels belong to the tester.
LdpResult run_ldp(ci::CiTester& tester, const std::vector<std::string>& candidates, const std::string& x,
                  const std::string& y);

enum class Criterion { CommonCause, DisjunctiveCause, Outcome };

std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view text);

/// CommonCause: Z1. DisjunctiveCause: Z1, Z4, Z5. Outcome: Z1, Z4. Input order.
std::vector<std::string> select_covariates(const LdpResult& result, Criterion criterion);

/// {labels, vas, z5_criterion, tests_executed, cache_hits, warnings}
nlohmann::ordered_json to_json(const LdpResult& result);

}  // namespace ldp
