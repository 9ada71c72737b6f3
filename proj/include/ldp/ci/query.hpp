#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ldp::ci {

/// Independence statement a ⊥ b | cond, stored canonically: a < b and cond sorted, so
/// symmetric queries compare and hash equal.
class CiQuery {
public:
    CiQuery(std::string a, std::string b, std::vector<std::string> cond = {});

    const std::string& a() const { return a_; }
    const std::string& b() const { return b_; }
    const std::vector<std::string>& cond() const { return cond_; }

    std::string to_string() const;

    friend bool operator==(const CiQuery&, const CiQuery&) = default;

private:
    std::string a_;
    std::string b_;
    std::vector<std::string> cond_;
};

struct CiQueryHash {
    std::size_t operator()(const CiQuery& q) const noexcept;
};

struct CiOutcome {
    bool independent = false;
    std::optional<double> p_value;
    std::optional<double> statistic;
    bool inconclusive = false;
};

struct TestCounters {
    std::size_t executed = 0;
    std::size_t cache_hits = 0;

    std::size_t total() const { return executed + cache_hits; }
};

}  // namespace ldp::ci
