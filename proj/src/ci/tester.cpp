#include "ldp/ci/tester.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "ldp/graph/dseparation.hpp"

namespace ldp::ci {

namespace {

constexpr double kMaxAbsCorrelation = 1.0 - 1e-7;
constexpr std::size_t kMinStratumCount = 10;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

CiOutcome inconclusive() {
    CiOutcome out;
    out.independent = false;
    out.inconclusive = true;
    return out;
}

}  // namespace

CiOutcome CiTester::test(const CiQuery& q) {
    {
        std::lock_guard lock(count_mutex_);
        ++executed_;
    }
    return evaluate(q);
}

TestCounters CiTester::counters() const {
    std::lock_guard lock(count_mutex_);
    return {executed_, 0};
}

CiOutcome OracleTester::evaluate(const CiQuery& q) { return oracle_test(g_, q); }

CiOutcome oracle_test(const graph::Dag& g, const CiQuery& q) {
    CiOutcome out;
    out.independent = graph::d_separated(g, q.a(), q.b(), q.cond());
    return out;
}

FisherZTester::FisherZTester(const data::Dataset& data, double alpha)
    : columns_(data.columns()), n_(data.rows()), alpha_(alpha) {
    check_alpha(alpha);
    for (std::size_t j = 0; j < columns_.size(); ++j) index_.emplace(columns_[j], static_cast<Eigen::Index>(j));
    if (n_ < 2) throw data::DataError("Fisher-z test needs at least two rows");
    const Eigen::MatrixXd centered = data.values().rowwise() - data.values().colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    corr_ = cov;
    for (Eigen::Index i = 0; i < corr_.rows(); ++i)
        for (Eigen::Index j = 0; j < corr_.cols(); ++j)
            corr_(i, j) = (sd[i] > 0 && sd[j] > 0) ? cov(i, j) / (sd[i] * sd[j]) : std::nan("");
}

CiOutcome fisher_z_from_correlation(double partial_corr, std::size_t n, std::size_t cond_size, double alpha) {
    if (n <= cond_size + 3)
        throw data::DataError("Fisher-z test needs more than |cond| + 3 samples (n=" + std::to_string(n) + ")");
    const double r = std::clamp(partial_corr, -kMaxAbsCorrelation, kMaxAbsCorrelation);
    const double z = std::atanh(r);
    const double stat = std::sqrt(static_cast<double>(n - cond_size - 3)) * std::abs(z);
    CiOutcome out;
    out.statistic = stat;
    out.p_value = std::clamp(std::erfc(stat / std::sqrt(2.0)), 0.0, 1.0);
    out.independent = *out.p_value > alpha;
    return out;
}

CiOutcome FisherZTester::evaluate(const CiQuery& q) {
    std::vector<Eigen::Index> idx;
    for (const auto* name : {&q.a(), &q.b()}) {
        auto it = index_.find(*name);
        if (it == index_.end()) throw data::DataError("unknown column: " + *name);
        idx.push_back(it->second);
    }
    for (const auto& c : q.cond()) {
        auto it = index_.find(c);
        if (it == index_.end()) throw data::DataError("unknown column: " + c);
        idx.push_back(it->second);
    }
    if (n_ <= q.cond().size() + 3)
        throw data::DataError("Fisher-z test needs more than |cond| + 3 samples (n=" + std::to_string(n_) + ")");

    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = corr_(idx[i], idx[j]);
    if (!sub.allFinite()) return inconclusive();

    double rho = sub(0, 1);
    if (k > 2) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (!lu.isInvertible()) return inconclusive();
        const Eigen::MatrixXd prec = lu.inverse();
        const double denom = std::sqrt(prec(0, 0) * prec(1, 1));
        if (!(denom > 0) || !std::isfinite(denom)) return inconclusive();
        rho = -prec(0, 1) / denom;
    }
    if (!std::isfinite(rho)) return inconclusive();
    return fisher_z_from_correlation(rho, n_, q.cond().size(), alpha_);
}

ChiSquareTester::ChiSquareTester(const data::Dataset& data, double alpha) : n_(data.rows()), alpha_(alpha) {
    check_alpha(alpha);
    codes_.resize(data.cols());
    levels_.resize(data.cols());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        index_.emplace(data.columns()[j], j);
        if (!data.integer_valued(j)) continue;  // rejected lazily, only if queried
        const auto col = data.values().col(static_cast<Eigen::Index>(j));
        std::vector<double> distinct(col.data(), col.data() + col.size());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        auto& codes = codes_[j];
        codes.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            codes[i] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), col[static_cast<Eigen::Index>(i)]) -
                                                  distinct.begin());
        levels_[j] = static_cast<std::uint32_t>(distinct.size());
    }
}

std::size_t ChiSquareTester::column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw data::DataError("unknown column: " + name);
    if (codes_[it->second].size() != n_ || n_ == 0)
        throw data::DataError("chi-square test needs integer-valued column: " + name);
    return it->second;
}

CiOutcome ChiSquareTester::evaluate(const CiQuery& q) {
    const auto& a = codes_[column(q.a())];
    const auto& b = codes_[column(q.b())];
    const std::uint32_t la = levels_[column(q.a())];
    const std::uint32_t lb = levels_[column(q.b())];

    // Dense stratum id per row, re-densified after each conditioning column so ids stay < n.
    std::vector<std::uint64_t> stratum(n_, 0);
    std::uint64_t n_strata = 1;
    std::vector<std::uint32_t> remap;
    for (const auto& c : q.cond()) {
        const std::size_t j = column(c);
        const std::uint64_t lc = levels_[j];
        remap.assign(n_strata * lc, UINT32_MAX);
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            auto& slot = remap[stratum[i] * lc + codes_[j][i]];
            if (slot == UINT32_MAX) slot = next++;
            stratum[i] = slot;
        }
        n_strata = next;
    }

    // Bucket rows by stratum.
    std::vector<std::size_t> start(n_strata + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) ++start[stratum[i] + 1];
    std::partial_sum(start.begin(), start.end(), start.begin());
    std::vector<std::size_t> order(n_);
    {
        auto fill = start;
        for (std::size_t i = 0; i < n_; ++i) order[fill[stratum[i]]++] = i;
    }

    double stat = 0.0;
    double dof = 0.0;
    std::size_t usable = 0;
    std::vector<double> table(static_cast<std::size_t>(la) * lb);
    std::vector<double> row(la), col(lb);
    std::vector<std::uint32_t> row_map(la), col_map(lb);
    for (std::uint64_t s = 0; s < n_strata; ++s) {
        const std::size_t total = start[s + 1] - start[s];
        if (total < kMinStratumCount) continue;
        std::fill(row.begin(), row.end(), 0.0);
        std::fill(col.begin(), col.end(), 0.0);
        for (std::size_t k = start[s]; k < start[s + 1]; ++k) {
            row[a[order[k]]] += 1;
            col[b[order[k]]] += 1;
        }
        const double n = static_cast<double>(total);
        double row_min = n, col_min = n;
        for (double r : row)
            if (r > 0) row_min = std::min(row_min, r);
        for (double c : col)
            if (c > 0) col_min = std::min(col_min, c);

        // Levels whose smallest expected cell falls below 1 are pooled into one bucket per margin.
        auto build_map = [n](const std::vector<double>& margin, double other_min, std::vector<std::uint32_t>& map) {
            std::uint32_t next = 0;
            bool pooled = false;
            for (std::size_t i = 0; i < margin.size(); ++i) {
                if (margin[i] == 0) {
                    map[i] = UINT32_MAX;
                } else if (margin[i] * other_min / n < 1.0) {
                    map[i] = UINT32_MAX - 1;
                    pooled = true;
                } else {
                    map[i] = next++;
                }
            }
            if (pooled)
                for (auto& m : map)
                    if (m == UINT32_MAX - 1) m = next;
            return next + (pooled ? 1u : 0u);
        };
        const std::uint32_t r = build_map(row, col_min, row_map);
        const std::uint32_t c = build_map(col, row_min, col_map);
        if (r < 2 || c < 2) continue;

        std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(r) * c, 0.0);
        std::vector<double> rt(r, 0.0), ct(c, 0.0);
        for (std::size_t k = start[s]; k < start[s + 1]; ++k) {
            const auto i = row_map[a[order[k]]];
            const auto j = col_map[b[order[k]]];
            table[static_cast<std::size_t>(i) * c + j] += 1;
            rt[i] += 1;
            ct[j] += 1;
        }
        for (std::uint32_t i = 0; i < r; ++i)
            for (std::uint32_t j = 0; j < c; ++j) {
                const double e = rt[i] * ct[j] / n;
                const double d = table[static_cast<std::size_t>(i) * c + j] - e;
                stat += d * d / e;
            }
        dof += static_cast<double>((r - 1) * (c - 1));
        ++usable;
    }
    if (usable == 0) return inconclusive();

    CiOutcome out;
    out.statistic = stat;
    out.p_value = std::clamp(boost::math::gamma_q(dof / 2.0, stat / 2.0), 0.0, 1.0);
    out.independent = *out.p_value > alpha_;
    return out;
}

CachedTester::CachedTester(std::shared_ptr<CiTester> inner) : inner_(std::move(inner)) {
    if (!inner_) throw std::invalid_argument("cached tester needs a tester to wrap");
}

CachedTester::CachedTester(CiTester& inner) : inner_(std::shared_ptr<CiTester>(), &inner) {}

TestCounters CachedTester::counters() const {
    std::lock_guard lock(mutex_);
    return {executed_, hits_};
}

bool CachedTester::contains(const CiQuery& q) const {
    std::lock_guard lock(mutex_);
    return cache_.count(q) != 0;
}

CiOutcome CachedTester::evaluate(const CiQuery& q) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(q); it != cache_.end()) {
            ++hits_;
            return it->second;
        }
    }
    // Evaluated outside the lock; a concurrent duplicate may run twice but only one is counted.
    CiOutcome out = inner_->test(q);
    std::lock_guard lock(mutex_);
    if (auto [it, inserted] = cache_.emplace(q, out); !inserted) {
        ++hits_;
        return it->second;
    }
    ++executed_;
    return out;
}

CiOutcome fisher_z_test(const data::Dataset& data, const CiQuery& q, double alpha) {
    return FisherZTester(data, alpha).test(q);
}

CiOutcome chi_square_test(const data::Dataset& data, const CiQuery& q, double alpha) {
    return ChiSquareTester(data, alpha).test(q);
}

}  // namespace ldp::ci
