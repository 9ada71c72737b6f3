#include "ldp/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldp::eval {

using graph::PartitionLabel;

bool label_matches(PartitionLabel pred, PartitionLabel truth) {
    if (pred == truth) return true;
    if (pred == PartitionLabel::ZPost)
        return truth == PartitionLabel::Z2 || truth == PartitionLabel::Z3 || truth == PartitionLabel::Z6;
    if (pred == PartitionLabel::Z57) return truth == PartitionLabel::Z5 || truth == PartitionLabel::Z7;
    return false;
}

double partition_accuracy(const graph::LabelMap& pred, const graph::LabelMap& truth) {
    if (truth.empty()) throw std::invalid_argument("partition accuracy needs at least one variable");
    if (pred.size() != truth.size()) throw std::invalid_argument("predicted and true label maps have different keys");
    std::size_t hits = 0;
    for (const auto& [name, t] : truth) {
        auto it = pred.find(name);
        if (it == pred.end()) throw std::invalid_argument("no predicted label for " + name);
        hits += label_matches(it->second, t) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::pair<double, double> z1_precision_recall(const std::vector<std::string>& adjustment, const graph::LabelMap& truth) {
    std::size_t true_z1 = 0;
    for (const auto& [name, label] : truth) true_z1 += label == PartitionLabel::Z1 ? 1 : 0;
    std::size_t overlap = 0;
    for (const auto& a : adjustment)
        if (auto it = truth.find(a); it != truth.end() && it->second == PartitionLabel::Z1) ++overlap;
    auto ratio = [](std::size_t num, std::size_t den, std::size_t other) {
        if (den == 0) return other == 0 ? 1.0 : 0.0;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    return {ratio(overlap, adjustment.size(), true_z1), ratio(overlap, true_z1, adjustment.size())};
}

double ate_estimate(const data::Dataset& data, const std::string& x, const std::string& y,
                    const std::vector<std::string>& adjustment) {
    const auto n = static_cast<Eigen::Index>(data.rows());
    const auto p = static_cast<Eigen::Index>(adjustment.size() + 2);
    if (n < p) throw std::runtime_error("not enough rows for the regression");
    Eigen::MatrixXd design(n, p);
    design.col(0).setOnes();
    design.col(1) = data.column(x);
    for (std::size_t j = 0; j < adjustment.size(); ++j) {
        if (adjustment[j] == x || adjustment[j] == y)
            throw std::invalid_argument("adjustment set may not contain the exposure or outcome");
        design.col(static_cast<Eigen::Index>(j) + 2) = data.column(adjustment[j]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    // the default threshold lets exact duplicates through on roundoff
    qr.setThreshold(1e-10);
    if (qr.rank() < p) throw std::runtime_error("rank-deficient design matrix in ATE regression");
    const Eigen::VectorXd beta = qr.solve(data.column(y));
    return beta[1];
}

Interval mean_ci(const std::vector<double>& values) {
    Interval out;
    out.count = values.size();
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    double half = 0.0;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        half = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
    }
    out.lo = out.mean - half;
    out.hi = out.mean + half;
    return out;
}

MetricsReport aggregate(const std::vector<ReplicateMetrics>& replicates) {
    if (replicates.empty()) throw std::invalid_argument("aggregate needs at least one replicate");
    std::vector<double> acc, prec, rec, valid, z5, tests, runtime, ate, sq;
    for (const auto& r : replicates) {
        acc.push_back(r.accuracy);
        prec.push_back(r.z1_precision);
        rec.push_back(r.z1_recall);
        valid.push_back(r.vas_valid ? 1.0 : 0.0);
        z5.push_back(r.z5_passed ? 1.0 : 0.0);
        tests.push_back(r.tests);
        runtime.push_back(r.runtime_ms);
        if (r.ate) {
            ate.push_back(*r.ate);
            if (r.ate_true) sq.push_back((*r.ate - *r.ate_true) * (*r.ate - *r.ate_true));
        }
    }
    // Fractions keep their interval inside [0, 1].
    auto fraction = [](const std::vector<double>& v) {
        Interval i = mean_ci(v);
        i.lo = std::max(0.0, i.lo);
        i.hi = std::min(1.0, i.hi);
        return i;
    };
    MetricsReport out;
    out.replicates = replicates.size();
    out.partition_accuracy = fraction(acc);
    out.z1_precision = fraction(prec);
    out.z1_recall = fraction(rec);
    out.vas_valid_fraction = fraction(valid);
    out.z5_pass_fraction = fraction(z5);
    out.tests = mean_ci(tests);
    out.runtime_ms = mean_ci(runtime);
    if (!ate.empty()) out.ate = mean_ci(ate);
    if (!sq.empty()) out.ate_mse = mean_ci(sq);
    return out;
}

nlohmann::ordered_json to_json(const MetricsReport& report) {
    auto interval = [](const Interval& i) {
        nlohmann::ordered_json j;
        j["mean"] = i.mean;
        j["ci95"] = {i.lo, i.hi};
        j["n"] = i.count;
        return j;
    };
    nlohmann::ordered_json out;
    out["replicates"] = report.replicates;
    out["partition_accuracy"] = interval(report.partition_accuracy);
    out["z1_precision"] = interval(report.z1_precision);
    out["z1_recall"] = interval(report.z1_recall);
    out["vas_valid_fraction"] = interval(report.vas_valid_fraction);
    out["z5_pass_fraction"] = interval(report.z5_pass_fraction);
    out["ate"] = report.ate ? interval(*report.ate) : nlohmann::ordered_json(nullptr);
    out["ate_mse"] = report.ate_mse ? interval(*report.ate_mse) : nlohmann::ordered_json(nullptr);
    out["tests"] = interval(report.tests);
    out["runtime_ms"] = interval(report.runtime_ms);
    return out;
}

}  // namespace ldp::eval
