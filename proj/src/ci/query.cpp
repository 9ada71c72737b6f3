#include "ldp/ci/query.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ldp::ci {

CiQuery::CiQuery(std::string a, std::string b, std::vector<std::string> cond)
    : a_(std::move(a)), b_(std::move(b)), cond_(std::move(cond)) {
    if (a_ == b_) throw std::invalid_argument("independence query needs two distinct variables: " + a_);
    if (b_ < a_) std::swap(a_, b_);
    std::sort(cond_.begin(), cond_.end());
    cond_.erase(std::unique(cond_.begin(), cond_.end()), cond_.end());
    for (const auto& c : cond_)
        if (c == a_ || c == b_) throw std::invalid_argument("query variable " + c + " is also conditioned on");
}

std::string CiQuery::to_string() const {
    std::string out = a_ + " _||_ " + b_;
    if (cond_.empty()) return out;
    out += " | {";
    for (std::size_t i = 0; i < cond_.size(); ++i) out += (i ? ", " : "") + cond_[i];
    return out + "}";
}

std::size_t CiQueryHash::operator()(const CiQuery& q) const noexcept {
    std::hash<std::string> h;
    std::size_t seed = h(q.a());
    auto mix = [&seed](std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); };
    mix(h(q.b()));
    for (const auto& c : q.cond()) mix(h(c));
    return seed;
}

}  // namespace ldp::ci
