#pragma once

#include "tiepart/problem_state.hpp"

#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

/// Propagator defined by a callback; used to build ad hoc constraints.
class Lambda final : public tiepart::Propagator {
public:
    Lambda(std::vector<int> scope, std::function<bool(tiepart::ProblemState&)> fn) :
        scope_(std::move(scope)), fn_(std::move(fn))
    {
    }
    std::vector<int> scope() const override { return scope_; }
    bool propagate(tiepart::ProblemState& s) override { return fn_(s); }
    std::string name() const override { return "lambda"; }

private:
    std::vector<int> scope_;
    std::function<bool(tiepart::ProblemState&)> fn_;
};

/// Fails once every variable in scope is bound and pred rejects the values.
inline std::shared_ptr<Lambda> reject_when_bound(std::vector<int> scope, std::function<bool(const std::vector<int>&)> ok)
{
    auto vars = scope;
    return std::make_shared<Lambda>(std::move(scope), [vars, ok](tiepart::ProblemState& s) {
        std::vector<int> vals;
        for (int v : vars) {
            if (!s.domain(v).is_singleton())
                return true;
            vals.push_back(s.domain(v).value());
        }
        return ok(vals);
    });
}

inline std::vector<int> iota(int n)
{
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

inline int uniform(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace testing_support
