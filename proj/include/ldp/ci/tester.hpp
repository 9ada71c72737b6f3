#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "ldp/ci/query.hpp"
#include "ldp/data/dataset.hpp"
#include "ldp/graph/dag.hpp"

namespace ldp::ci {

/// Answers conditional-independence queries. Implementations count every query they
/// evaluate in `counters().executed`.
class CiTester {
public:
    virtual ~CiTester() = default;

    CiOutcome test(const CiQuery& q);
    virtual TestCounters counters() const;
    virtual std::string name() const = 0;

protected:
    virtual CiOutcome evaluate(const CiQuery& q) = 0;

private:
    mutable std::mutex count_mutex_;
    std::size_t executed_ = 0;
};

/// Exact answers from d-separation in a known graph.
class OracleTester final : public CiTester {
public:
    explicit OracleTester(graph::Dag g) : g_(std::move(g)) {}
    std::string name() const override { return "oracle"; }
    const graph::Dag& graph() const { return g_; }

protected:
    CiOutcome evaluate(const CiQuery& q) override;

private:
    graph::Dag g_;
};

/// Partial-correlation test with Fisher's z-transform.
class FisherZTester final : public CiTester {
public:
    FisherZTester(const data::Dataset& data, double alpha);
    std::string name() const override { return "fisher_z"; }
    double alpha() const { return alpha_; }

protected:
    CiOutcome evaluate(const CiQuery& q) override;

private:
    std::vector<std::string> columns_;
    std::unordered_map<std::string, Eigen::Index> index_;
    Eigen::MatrixXd corr_;
    std::size_t n_;
    double alpha_;
};

/// Pearson chi-square test summed over strata of the conditioning variables.
class ChiSquareTester final : public CiTester {
public:
    ChiSquareTester(const data::Dataset& data, double alpha);
    std::string name() const override { return "chi_square"; }
    double alpha() const { return alpha_; }

protected:
    CiOutcome evaluate(const CiQuery& q) override;

private:
    std::size_t column(const std::string& name) const;

    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::uint32_t>> codes_;  // per column, dense level code per row
    std::vector<std::uint32_t> levels_;
    std::size_t n_;
    double alpha_;
};

/// Memoizes another tester on canonical queries. `executed` counts only queries forwarded
/// to the wrapped tester; repeats are `cache_hits`. Safe for concurrent use.
class CachedTester final : public CiTester {
public:
    explicit CachedTester(std::shared_ptr<CiTester> inner);
    /// Non-owning wrap; `inner` must outlive this object.
    explicit CachedTester(CiTester& inner);

    TestCounters counters() const override;
    std::string name() const override { return inner_->name(); }
    bool contains(const CiQuery& q) const;

protected:
    CiOutcome evaluate(const CiQuery& q) override;

private:
    std::shared_ptr<CiTester> inner_;
    mutable std::mutex mutex_;
    std::unordered_map<CiQuery, CiOutcome, CiQueryHash> cache_;
    std::size_t executed_ = 0;
    std::size_t hits_ = 0;
};

/// Two-sided p-value of the Fisher z statistic for a given partial correlation.
CiOutcome fisher_z_from_correlation(double partial_corr, std::size_t n, std::size_t cond_size, double alpha);

CiOutcome oracle_test(const graph::Dag& g, const CiQuery& q);
CiOutcome fisher_z_test(const data::Dataset& data, const CiQuery& q, double alpha);
CiOutcome chi_square_test(const data::Dataset& data, const CiQuery& q, double alpha);

}  // namespace ldp::ci
