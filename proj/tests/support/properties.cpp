#include "properties.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/distributions/binomial.hpp>

#include "brute.hpp"
#include "ldp/ci/tester.hpp"
#include "ldp/core/ldp.hpp"
#include "ldp/graph/adjustment.hpp"
#include "ldp/graph/dseparation.hpp"
#include "ldp/graph/edge_list.hpp"
#include "ldp/graph/partition.hpp"
#include "random_dag.hpp"

namespace testkit {

using ldp::graph::Dag;
using ldp::graph::NodeId;
using ldp::graph::PartitionLabel;

namespace {

void fail(PropertyResult& r, const std::string& what) {
    if (r.violations++ == 0) r.first_failure = what;
}

RandomDagOptions small(std::size_t trial, bool anchor = false, bool effect = false) {
    RandomDagOptions o;
    o.min_nodes = 4;
    o.max_nodes = 12;
    o.edge_prob = trial % 2 ? 0.3 : 0.2;
    o.anchor = anchor;
    o.require_effect = effect;
    return o;
}

std::vector<std::string> candidate_names(const Dag& g) { return g.names_of(g.candidates()); }

std::string describe(const Dag& g) {
    std::string s = ldp::graph::to_edge_list(g);
    std::replace(s.begin(), s.end(), '\n', ';');
    return s;
}

struct BinomialBand {
    double lo, hi;
};

BinomialBand band(std::size_t trials, double alpha) {
    boost::math::binomial_distribution<> d(static_cast<double>(trials), alpha);
    return {boost::math::quantile(d, 0.005), boost::math::quantile(boost::math::complement(d, 0.005))};
}

}  // namespace

PropertyResult check_dsep_against_enumeration(std::size_t trials, std::uint64_t seed) {
    PropertyResult r{"d-separation equals path enumeration"};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        const Dag g = random_dag(rng, small(t));
        const brute::Adj adj(g);
        std::uniform_int_distribution<NodeId> pick(0, g.size() - 1);
        NodeId a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        std::vector<NodeId> cond;
        std::bernoulli_distribution take(0.3);
        for (NodeId v = 0; v < g.size(); ++v)
            if (v != a && v != b && take(rng)) cond.push_back(v);
        const bool fast = ldp::graph::d_separated(g, a, b, cond);
        if (fast != brute::d_separated(adj, a, b, cond)) {
            fail(r, g.name(a) + " vs " + g.name(b) + " in " + describe(g));
        }
        r.qualifying += fast ? 1 : 0;
    }
    r.note = std::to_string(r.qualifying) + " separated queries";
    return r;
}

PropertyResult check_active_paths_against_enumeration(std::size_t trials, std::uint64_t seed) {
    PropertyResult r{"active-path enumeration equals brute force"};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        const Dag g = random_dag(rng, small(t));
        const brute::Adj adj(g);
        std::uniform_int_distribution<NodeId> pick(0, g.size() - 1);
        NodeId a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        const auto fast = ldp::graph::enumerate_active_paths(g, a, b);
        const auto slow = brute::collider_free_paths(adj, a, b);
        if (fast != slow) fail(r, g.name(a) + " to " + g.name(b) + " in " + describe(g));
    }
    return r;
}

PropertyResult check_partition_exhaustive(std::size_t trials, std::uint64_t seed) {
    PropertyResult r{"every candidate lands in a permitted grid cell"};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        const Dag g = random_dag(rng, small(t));
        const brute::Adj adj(g);
        ldp::graph::LabelMap truth;
        try {
            truth = ldp::graph::ground_truth_partition(g);
        } catch (const std::exception& e) {
            fail(r, std::string(e.what()) + " in " + describe(g));
            continue;
        }
        for (NodeId z : g.candidates()) {
            const auto expected = brute::label(adj, z);
            const auto types = ldp::graph::classify_path_types(g, z);
            const int tx = brute::path_type(adj, z, adj.x, adj.y);
            const int ty = brute::path_type(adj, z, adj.y, adj.x);
            if (!expected || static_cast<int>(types.rel_x) != tx || static_cast<int>(types.rel_y) != ty ||
                std::string(ldp::graph::to_string(truth.at(g.name(z)))) != *expected) {
                fail(r, g.name(z) + " in " + describe(g));
                break;
            }
        }
    }
    return r;
}

PropertyResult check_true_z1_valid(std::size_t trials, std::uint64_t seed) {
    PropertyResult r{"true Z1 is a valid adjustment set"};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        const Dag g = random_dag(rng, small(t));
        const brute::Adj adj(g);
        const auto truth = ldp::graph::ground_truth_partition(g);
        std::vector<NodeId> z1;
        for (NodeId z : g.candidates())
            if (truth.at(g.name(z)) == PartitionLabel::Z1) z1.push_back(z);
        r.qualifying += z1.empty() ? 0 : 1;
        const bool fast = ldp::graph::is_valid_adjustment_set(g, z1);
        const bool slow = brute::valid_adjustment(adj, z1);
        if (!fast || !slow) fail(r, describe(g));
    }
    r.note = std::to_string(r.qualifying) + " graphs with non-empty Z1";
    return r;
}

PropertyResult check_test_budget(std::size_t trials, std::uint64_t seed) {
    PropertyResult r{"executed tests <= 3|Z|^2 for |Z| >= 2"};
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        RandomDagOptions o;
        o.min_nodes = 3 + (t * 80) / trials;
        o.max_nodes = o.min_nodes;
        o.edge_prob = std::min(0.3, 3.0 / static_cast<double>(o.min_nodes));
        const Dag g = random_dag(rng, o);
        ldp::ci::OracleTester oracle(g);
        const auto cands = candidate_names(g);
        const auto res = ldp::run_ldp(oracle, cands, "X", "Y");
        const double z = static_cast<double>(cands.size());
        if (cands.size() < 2) continue;
        const double ratio = static_cast<double>(res.counters.executed) / (z * z);
        worst = std::max(worst, ratio);
        if (ratio > 3.0) fail(r, std::to_string(res.counters.executed) + " tests for |Z|=" + std::to_string(cands.size()));
    }
    std::ostringstream os;
    os << "|Z| in [2, 80], worst tests/|Z|^2 = " << worst;
    r.note = os.str();
    return r;
}

namespace {

// Anchored small DAGs satisfying C1 and C2 on the full candidate set.
template <class F>
PropertyResult over_identifiable(std::string name, std::size_t trials, std::uint64_t seed, bool effect, F&& check) {
    PropertyResult r{std::move(name)};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        Dag g = random_dag(rng, small(t, true, effect));
        auto cands = candidate_names(g);
        while (!satisfies_c1_c2(g, cands)) {
            g = random_dag(rng, small(t, true, effect));
            cands = candidate_names(g);
        }
        ++r.qualifying;
        ldp::ci::OracleTester oracle(g);
        const auto res = ldp::run_ldp(oracle, cands, "X", "Y");
        if (auto msg = check(g, res); !msg.empty()) fail(r, msg + " in " + describe(g));
    }
    return r;
}

}  // namespace

PropertyResult check_no_exposure_descendant_in_z1(std::size_t trials, std::uint64_t seed) {
    return over_identifiable("no descendant of X labeled Z1 under C1+C2", trials, seed, false,
                             [](const Dag& g, const ldp::LdpResult& res) -> std::string {
                                 const auto desc = brute::descendants(brute::Adj(g), g.exposure());
                                 for (const auto& z : res.members(PartitionLabel::Z1))
                                     if (desc.count(g.id(z))) return z + " labeled Z1";
                                 if (res.vas && !brute::valid_adjustment(brute::Adj(g), g.ids(*res.vas)))
                                     return "invalid adjustment set";
                                 return {};
                             });
}

PropertyResult check_backdoor_paths_covered(std::size_t trials, std::uint64_t seed, bool require_effect) {
    std::size_t mediated_misses = 0;
    auto r = over_identifiable(
        "every open backdoor path free of X's descendants holds a labeled Z1 under C1+C2", trials, seed,
        require_effect, [&](const Dag& g, const ldp::LdpResult& res) -> std::string {
            const brute::Adj adj(g);
            const auto desc = brute::descendants(adj, adj.x);
            std::set<NodeId> z1;
            for (const auto& z : res.members(PartitionLabel::Z1)) z1.insert(g.id(z));
            bool missed_mediated = false;
            for (const auto& p : brute::collider_free_paths(adj, adj.x, adj.y)) {
                if (!adj.edge[p[1]][p[0]]) continue;
                const auto inner = std::vector<NodeId>(p.begin() + 1, p.end() - 1);
                if (std::any_of(inner.begin(), inner.end(), [&](NodeId v) { return z1.count(v) > 0; })) continue;
                if (std::any_of(inner.begin(), inner.end(), [&](NodeId v) { return desc.count(v) > 0; })) {
                    missed_mediated = true;
                    continue;
                }
                return "uncovered backdoor path through " + g.name(p[1]);
            }
            mediated_misses += missed_mediated ? 1 : 0;
            return {};
        });
    r.note = std::to_string(mediated_misses) + " graphs miss a backdoor path that runs through a descendant of X";
    return r;
}

namespace {

template <class F>
PropertyResult over_latent(std::string name, std::size_t trials, std::uint64_t seed, F&& check) {
    PropertyResult r{std::move(name)};
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution hide(0.25);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        const Dag g = random_dag(rng, small(t, t % 4 != 0, t % 2 == 0));
        std::vector<std::string> observed;
        for (const auto& z : candidate_names(g))
            if (!hide(rng)) observed.push_back(z);
        ldp::ci::OracleTester oracle(g);
        const auto res = ldp::run_ldp(oracle, observed, "X", "Y");
        if (auto msg = check(g, res, r); !msg.empty()) fail(r, msg + " in " + describe(g));
    }
    return r;
}

}  // namespace

PropertyResult check_z5_criterion_sound(std::size_t trials, std::uint64_t seed) {
    auto r = over_latent("Z5 criterion pass implies a valid set under latents", trials, seed,
                         [](const Dag& g, const ldp::LdpResult& res, PropertyResult& acc) -> std::string {
                             if (!res.z5_criterion_passed) return {};
                             ++acc.qualifying;
                             if (!res.vas) return "criterion passed without a set";
                             if (!ldp::graph::is_valid_adjustment_set(g, *res.vas) ||
                                 !brute::valid_adjustment(brute::Adj(g), g.ids(*res.vas)))
                                 return "invalid set after a passed criterion";
                             return {};
                         });
    r.note = std::to_string(r.qualifying) + " runs passed the criterion";
    return r;
}

PropertyResult check_z4_z8_robust(std::size_t trials, std::uint64_t seed) {
    auto r = over_latent("Z4 and Z8 labels match the full graph under latents", trials, seed,
                         [](const Dag& g, const ldp::LdpResult& res, PropertyResult& acc) -> std::string {
                             const auto truth = ldp::graph::ground_truth_partition(g);
                             for (auto l : {PartitionLabel::Z4, PartitionLabel::Z8})
                                 for (const auto& z : res.members(l)) {
                                     ++acc.qualifying;
                                     if (truth.at(z) != l) return z + " mislabeled " + std::string(to_string(l));
                                 }
                             return {};
                         });
    r.note = std::to_string(r.qualifying) + " Z4/Z8 labels checked";
    return r;
}

PropertyResult check_cache_transparent(std::size_t trials, std::uint64_t seed) {
    PropertyResult r{"cache returns the wrapped tester's answers"};
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        const Dag g = random_dag(rng, small(t));
        ldp::ci::OracleTester direct(g);
        ldp::ci::OracleTester inner(g);
        ldp::ci::CachedTester cached(inner);
        std::uniform_int_distribution<NodeId> pick(0, g.size() - 1);
        std::bernoulli_distribution take(0.3);
        std::vector<ldp::ci::CiQuery> pool;
        for (int i = 0; i < 10; ++i) {
            NodeId a = pick(rng), b = pick(rng);
            while (b == a) b = pick(rng);
            std::vector<std::string> cond;
            for (NodeId v = 0; v < g.size(); ++v)
                if (v != a && v != b && take(rng)) cond.push_back(g.name(v));
            // alternate the argument order so symmetric repeats are exercised
            if (i % 2) pool.emplace_back(g.name(b), g.name(a), cond);
            else pool.emplace_back(g.name(a), g.name(b), cond);
        }
        std::set<std::string> distinct;
        std::uniform_int_distribution<std::size_t> which(0, pool.size() - 1);
        for (int i = 0; i < 40; ++i) {
            const auto& q = pool[which(rng)];
            distinct.insert(q.to_string());
            if (cached.test(q).independent != direct.test(q).independent) fail(r, q.to_string());
        }
        const auto c = cached.counters();
        if (c.executed != distinct.size() || c.total() != 40 || inner.counters().executed != distinct.size())
            fail(r, "counter mismatch in " + describe(g));
    }
    return r;
}

PropertyResult check_fisher_z_type1(std::size_t trials, std::uint64_t seed, double alpha) {
    PropertyResult r{"Fisher-z type-I rate"};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    const Eigen::Index n = 500;
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        Eigen::MatrixXd m(n, 3);
        for (Eigen::Index i = 0; i < n; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = z(rng);
        ldp::data::Dataset d({"a", "b", "c"}, m);
        const auto o = ldp::ci::fisher_z_test(d, {"a", "b", {"c"}}, alpha);
        if (!o.independent) ++r.qualifying;
    }
    const auto b = band(trials, alpha);
    const double k = static_cast<double>(r.qualifying);
    if (k < b.lo || k > b.hi) fail(r, "rejections outside band");
    std::ostringstream os;
    os << r.qualifying << "/" << trials << " rejections at alpha=" << alpha << ", 99% band [" << b.lo << ", " << b.hi << "]";
    r.note = os.str();
    return r;
}

PropertyResult check_chi_square_type1(std::size_t trials, std::uint64_t seed, double alpha) {
    PropertyResult r{"chi-square type-I rate"};
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<int> three(0, 2);
    const Eigen::Index n = 500;
    for (std::size_t t = 0; t < trials; ++t, ++r.trials) {
        Eigen::MatrixXd m(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, 0) = coin(rng);
            m(i, 1) = coin(rng);
            m(i, 2) = three(rng);
        }
        ldp::data::Dataset d({"a", "b", "c"}, m, true);
        const auto o = ldp::ci::chi_square_test(d, {"a", "b", {"c"}}, alpha);
        if (!o.independent) ++r.qualifying;
    }
    const auto b = band(trials, alpha);
    const double k = static_cast<double>(r.qualifying);
    if (k < b.lo || k > b.hi) fail(r, "rejections outside band");
    std::ostringstream os;
    os << r.qualifying << "/" << trials << " rejections at alpha=" << alpha << ", 99% band [" << b.lo << ", " << b.hi << "]";
    r.note = os.str();
    return r;
}

}  // namespace testkit
