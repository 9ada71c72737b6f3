#include "ldp/core/ldp.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace ldp {

namespace {

using Names = std::vector<std::string>;

bool contains(const Names& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

Names minus(const Names& v, const Names& drop) {
    Names out;
    for (const auto& s : v)
        if (!contains(drop, s)) out.push_back(s);
    return out;
}

class Session {
public:
    Session(ci::CiTester& inner, LdpResult& result) : cache_(inner), result_(result) {}

    bool ind(int step, const std::string& var, const std::string& a, const std::string& b, Names cond = {}) {
        ci::CiQuery q(a, b, std::move(cond));
        const bool cached = cache_.contains(q);
        auto outcome = cache_.test(q);
        result_.step_trace.push_back({step, var, q, outcome, cached});
        return outcome.independent;
    }

    ci::TestCounters counters() const { return cache_.counters(); }

private:
    ci::CachedTester cache_;
    LdpResult& result_;
};

}  // namespace

std::vector<std::string> LdpResult::members(PartitionLabel label) const {
    Names out;
    for (const auto& c : candidates)
        if (auto it = labels.find(c); it != labels.end() && it->second == label) out.push_back(c);
    return out;
}

LdpResult run_ldp(ci::CiTester& tester, const std::vector<std::string>& candidates, const std::string& x,
                  const std::string& y) {
    if (x == y) throw std::invalid_argument("exposure and outcome must differ");
    {
        std::unordered_set<std::string> seen;
        for (const auto& c : candidates) {
            if (c == x || c == y) throw std::invalid_argument("candidate list contains the exposure or outcome: " + c);
            if (!seen.insert(c).second) throw std::invalid_argument("duplicate candidate: " + c);
        }
    }

    LdpResult result;
    result.candidates = candidates;
    Session s(tester, result);
    auto label = [&](const std::string& z, PartitionLabel l) { result.labels[z] = l; };

    // Steps 1-3. Both marginals are always computed (they are reused later); the second
    // conjunct of Steps 2 and 3 is evaluated whenever that step is reached.
    Names z8, z4, z57;
    for (const auto& z : candidates) {
        const bool ind_x = s.ind(1, z, x, z);
        const bool ind_y = s.ind(1, z, y, z);
        if (ind_x && ind_y) {
            z8.push_back(z);
            continue;
        }
        const bool ind_x_given_y = s.ind(2, z, x, z, {y});
        if (ind_x && !ind_x_given_y) {
            z4.push_back(z);
            continue;
        }
        const bool ind_y_given_x = s.ind(3, z, y, z, {x});
        if (!ind_y && ind_y_given_x) z57.push_back(z);
    }
    for (const auto& z : z8) label(z, PartitionLabel::Z8);
    for (const auto& z : z4) label(z, PartitionLabel::Z4);
    Names rest = minus(minus(minus(candidates, z4), z57), z8);

    // Step 4.
    Names post;
    if (!z4.empty()) {
        for (const auto& z : rest) {
            for (const auto& w : z4) {
                if (!s.ind(4, z, z, w) || s.ind(4, z, z, w, {x, y})) {
                    post.push_back(z);
                    break;
                }
            }
        }
    } else {
        result.warnings.push_back("no Z4 discovered: C1 unverifiable, Step 4 skipped");
    }
    rest = minus(rest, post);

    // Step 5, conditioning on a snapshot of the remaining candidates.
    Names mix;
    const Names snapshot = rest;
    for (const auto& z : snapshot) {
        if (s.ind(5, z, y, z)) continue;
        Names cond{x};
        for (const auto& w : snapshot)
            if (w != z) cond.push_back(w);
        if (s.ind(5, z, y, z, std::move(cond))) mix.push_back(z);
    }
    rest = minus(rest, mix);

    // Step 6. The first witness found for a candidate is promoted to Z15; every Mix
    // member is still tested against it.
    Names z1, z15, z1_from_mix;
    mix.insert(mix.end(), z57.begin(), z57.end());
    if (!mix.empty() && !rest.empty()) {
        for (const auto& z : rest) {
            std::optional<std::string> witness;
            for (const auto& m : mix) {
                const bool marginal = s.ind(6, z, m, z);
                const bool given_x = s.ind(6, z, m, z, {x});
                if (marginal && !given_x && !witness) witness = m;
            }
            if (witness) {
                z1.push_back(z);
                if (!contains(z15, *witness)) z15.push_back(*witness);
            } else {
                post.push_back(z);
            }
        }
        for (const auto& m : mix) {
            if (contains(z15, m)) continue;
            bool found = false;
            for (const auto& q : z15) {
                if (s.ind(6, m, q, m)) {
                    found = true;
                    break;
                }
            }
            if (contains(z57, m)) continue;  // resolved below
            if (found) {
                z1_from_mix.push_back(m);
            } else {
                post.push_back(m);
            }
        }
    }
    const bool z7_known = !z15.empty() || !z1.empty();
    for (const auto& z : z57)
        if (!contains(z15, z)) label(z, z7_known ? PartitionLabel::Z7 : PartitionLabel::Z57);

    // Step 7. Members of Z15 and the Z1 found among Mix are split against the Z1 found in
    // the first loop of Step 6; those marginals are all cached.
    Names z5;
    if (!z15.empty() && !z1.empty()) {
        const Names known_z1 = z1;
        Names pending = z15;
        pending.insert(pending.end(), z1_from_mix.begin(), z1_from_mix.end());
        for (const auto& q : pending) {
            bool dependent = false;
            for (const auto& w : known_z1) {
                if (!s.ind(7, q, q, w)) {
                    dependent = true;
                    break;
                }
            }
            if (dependent) {
                z1.push_back(q);
            } else {
                z5.push_back(q);
            }
        }
    } else {
        z1.insert(z1.end(), z1_from_mix.begin(), z1_from_mix.end());
    }
    for (const auto& z : z1) label(z, PartitionLabel::Z1);
    for (const auto& z : z5) label(z, PartitionLabel::Z5);
    for (const auto& z : post) label(z, PartitionLabel::ZPost);
    for (const auto& z : candidates)
        if (!result.labels.count(z)) label(z, PartitionLabel::NotIdentifiable);

    // Step 8.
    const Names z1_ordered = result.members(PartitionLabel::Z1);
    const Names z5_ordered = result.members(PartitionLabel::Z5);
    if (z5_ordered.empty()) {
        result.warnings.push_back("no Z5 discovered: C2 unverifiable, VAS not identifiable");
    } else {
        Names cond{x};
        cond.insert(cond.end(), z1_ordered.begin(), z1_ordered.end());
        for (const auto& w : z5_ordered) {
            if (s.ind(8, w, w, y, cond)) {
                result.z5_criterion_passed = true;
                break;
            }
        }
        if (!result.z5_criterion_passed)
            result.warnings.push_back("Z5 criterion failed: no Z5 is independent of Y given X and Z1; VAS not identifiable");
    }
    if (result.z5_criterion_passed) result.vas = z1_ordered;
    result.counters = s.counters();
    return result;
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::CommonCause: return "common_cause";
        case Criterion::DisjunctiveCause: return "disjunctive_cause";
        case Criterion::Outcome: return "outcome";
    }
    return "?";
}

Criterion parse_criterion(std::string_view text) {
    for (auto c : {Criterion::CommonCause, Criterion::DisjunctiveCause, Criterion::Outcome})
        if (to_string(c) == text) return c;
    throw std::invalid_argument("unknown selection criterion: " + std::string(text));
}

std::vector<std::string> select_covariates(const LdpResult& result, Criterion criterion) {
    std::vector<PartitionLabel> keep{PartitionLabel::Z1};
    if (criterion != Criterion::CommonCause) keep.push_back(PartitionLabel::Z4);
    if (criterion == Criterion::DisjunctiveCause) keep.push_back(PartitionLabel::Z5);
    Names out;
    for (const auto& c : result.candidates) {
        auto it = result.labels.find(c);
        if (it != result.labels.end() && std::find(keep.begin(), keep.end(), it->second) != keep.end())
            out.push_back(c);
    }
    return out;
}

nlohmann::ordered_json to_json(const LdpResult& result) {
    nlohmann::ordered_json labels = nlohmann::ordered_json::object();
    for (const auto& c : result.candidates) labels[c] = std::string(graph::to_string(result.labels.at(c)));
    nlohmann::ordered_json out;
    out["labels"] = labels;
    out["vas"] = result.vas ? nlohmann::ordered_json(*result.vas) : nlohmann::ordered_json(nullptr);
    out["z5_criterion"] = result.z5_criterion_passed;
    out["tests_executed"] = result.counters.executed;
    out["cache_hits"] = result.counters.cache_hits;
    out["warnings"] = result.warnings;
    return out;
}

}  // namespace ldp
