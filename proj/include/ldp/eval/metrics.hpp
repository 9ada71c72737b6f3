#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ldp/data/dataset.hpp"
#include "ldp/graph/partition.hpp"

namespace ldp::eval {

/// Fraction of keys whose predicted label agrees with the truth. Superset labels count as
/// agreement: ZPost for Z2/Z3/Z6, Z57 for Z5/Z7. Throws std::invalid_argument if the key
/// sets differ or are empty.
double partition_accuracy(const graph::LabelMap& pred, const graph::LabelMap& truth);

/// True iff `pred` counts as correct for `truth` under partition_accuracy.
bool label_matches(graph::PartitionLabel pred, graph::PartitionLabel truth);

/// (precision, recall) of `adjustment` against the truth's Z1 members. An empty side scores
/// 1 when the other side is empty too, else 0.
std::pair<double, double> z1_precision_recall(const std::vector<std::string>& adjustment, const graph::LabelMap& truth);

/// Coefficient of x in the least-squares fit of y on x, the adjustment set and an intercept.
/// Throws std::runtime_error when the design matrix is rank deficient.
double ate_estimate(const data::Dataset& data, const std::string& x, const std::string& y,
                    const std::vector<std::string>& adjustment);

struct Interval {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Mean with normal-approximation 95% interval (mean +- 1.96 * sd / sqrt(n)).
Interval mean_ci(const std::vector<double>& values);

struct ReplicateMetrics {
    double accuracy = 0.0;
    double z1_precision = 0.0;
    double z1_recall = 0.0;
    bool vas_valid = false;
    bool z5_passed = false;
    std::optional<double> ate;
    std::optional<double> ate_true;  // per replicate, weights may be random
    double tests = 0.0;
    double runtime_ms = 0.0;
};

struct MetricsReport {
    Interval partition_accuracy;
    Interval z1_precision;
    Interval z1_recall;
    Interval vas_valid_fraction;
    Interval z5_pass_fraction;
    std::optional<Interval> ate;
    std::optional<Interval> ate_mse;
    Interval tests;
    Interval runtime_ms;
    std::size_t replicates = 0;
};

/// Throws std::invalid_argument on an empty input. ATE summaries cover the replicates that
/// carry an estimate (and, for the MSE, a true value).
MetricsReport aggregate(const std::vector<ReplicateMetrics>& replicates);

nlohmann::ordered_json to_json(const MetricsReport& report);

}  // namespace ldp::eval
