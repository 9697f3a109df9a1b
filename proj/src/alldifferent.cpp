#include "tiepart/alldifferent.hpp"

#include <algorithm>
#include <stdexcept>

namespace tiepart {

namespace {

constexpr int unmatched = -1;

// Bipartite variable/value graph with a maximum matching and the residual
// digraph used to classify edges.
class ValueGraph {
public:
    explicit ValueGraph(std::span<const Domain> domains) :
        nvars_(static_cast<int>(domains.size()))
    {
        int lo = 0, hi = -1;
        bool first = true;
        for (const auto& d : domains) {
            if (d.empty())
                continue;
            lo = first ? d.min() : std::min(lo, d.min());
            hi = first ? d.max() : std::max(hi, d.max());
            first = false;
        }
        offset_ = lo;
        std::vector<int> index_of(static_cast<std::size_t>(std::max(0, hi - lo + 1)), -1);
        for (const auto& d : domains)
            d.for_each([&](int v) { index_of[static_cast<std::size_t>(v - lo)] = 0; });
        for (std::size_t i = 0; i < index_of.size(); ++i)
            if (index_of[i] == 0) {
                index_of[i] = static_cast<int>(values_.size());
                values_.push_back(static_cast<int>(i) + lo);
            }
        adj_.resize(static_cast<std::size_t>(nvars_));
        for (int x = 0; x < nvars_; ++x)
            domains[static_cast<std::size_t>(x)].for_each(
                [&](int v) { adj_[static_cast<std::size_t>(x)].push_back(index_of[static_cast<std::size_t>(v - lo)]); });
        value_index_ = std::move(index_of);
        var_match_.assign(static_cast<std::size_t>(nvars_), unmatched);
        val_match_.assign(values_.size(), unmatched);
    }

    int value_of(int idx) const { return values_[static_cast<std::size_t>(idx)]; }

    int index_of(int value) const
    {
        const int rel = value - offset_;
        if (rel < 0 || rel >= static_cast<int>(value_index_.size()))
            return -1;
        return value_index_[static_cast<std::size_t>(rel)];
    }

    /// Seeds the matching with still-valid pairs from a previous call.
    void seed(std::span<const int> previous_values)
    {
        for (int x = 0; x < nvars_ && x < static_cast<int>(previous_values.size()); ++x) {
            const int vi = index_of(previous_values[static_cast<std::size_t>(x)]);
            if (vi < 0 || val_match_[static_cast<std::size_t>(vi)] != unmatched)
                continue;
            const auto& a = adj_[static_cast<std::size_t>(x)];
            if (std::find(a.begin(), a.end(), vi) == a.end())
                continue;
            var_match_[static_cast<std::size_t>(x)] = vi;
            val_match_[static_cast<std::size_t>(vi)] = x;
        }
    }

    bool complete_matching()
    {
        std::vector<int> stamp(values_.size(), -1);
        for (int x = 0; x < nvars_; ++x) {
            if (var_match_[static_cast<std::size_t>(x)] != unmatched)
                continue;
            if (!augment(x, x, stamp))
                return false;
        }
        return true;
    }

    std::vector<int> matched_values() const
    {
        std::vector<int> out(static_cast<std::size_t>(nvars_));
        for (int x = 0; x < nvars_; ++x)
            out[static_cast<std::size_t>(x)] = value_of(var_match_[static_cast<std::size_t>(x)]);
        return out;
    }

    /// Calls drop(var, value) for every edge in no maximum matching. Requires
    /// a matching that covers every variable.
    template <typename F>
    void for_each_unsupported(F&& drop)
    {
        const int nvals = static_cast<int>(values_.size());
        const int nodes = nvars_ + nvals;
        // Residual digraph: matched edges var -> value, other edges value -> var.
        std::vector<std::vector<int>> out(static_cast<std::size_t>(nodes));
        for (int x = 0; x < nvars_; ++x)
            for (int vi : adj_[static_cast<std::size_t>(x)]) {
                if (var_match_[static_cast<std::size_t>(x)] == vi)
                    out[static_cast<std::size_t>(x)].push_back(nvars_ + vi);
                else
                    out[static_cast<std::size_t>(nvars_ + vi)].push_back(x);
            }

        std::vector<char> reached(static_cast<std::size_t>(nodes), 0);
        std::vector<int> stack;
        for (int vi = 0; vi < nvals; ++vi)
            if (val_match_[static_cast<std::size_t>(vi)] == unmatched) {
                reached[static_cast<std::size_t>(nvars_ + vi)] = 1;
                stack.push_back(nvars_ + vi);
            }
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : out[static_cast<std::size_t>(u)])
                if (!reached[static_cast<std::size_t>(w)]) {
                    reached[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }

        const auto component = strongly_connected_components(out);
        for (int x = 0; x < nvars_; ++x)
            for (int vi : adj_[static_cast<std::size_t>(x)]) {
                if (var_match_[static_cast<std::size_t>(x)] == vi)
                    continue;
                const int vnode = nvars_ + vi;
                if (reached[static_cast<std::size_t>(vnode)])
                    continue;
                if (component[static_cast<std::size_t>(x)] == component[static_cast<std::size_t>(vnode)])
                    continue;
                drop(x, value_of(vi));
            }
    }

private:
    bool augment(int x, int round, std::vector<int>& stamp)
    {
        for (int vi : adj_[static_cast<std::size_t>(x)]) {
            if (stamp[static_cast<std::size_t>(vi)] == round)
                continue;
            stamp[static_cast<std::size_t>(vi)] = round;
            const int owner = val_match_[static_cast<std::size_t>(vi)];
            if (owner == unmatched || augment(owner, round, stamp)) {
                var_match_[static_cast<std::size_t>(x)] = vi;
                val_match_[static_cast<std::size_t>(vi)] = x;
                return true;
            }
        }
        return false;
    }

    static std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& out)
    {
        // Iterative Tarjan.
        const int n = static_cast<int>(out.size());
        std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
        std::vector<int> comp(static_cast<std::size_t>(n), -1);
        std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
        std::vector<int> scc_stack;
        std::vector<std::pair<int, std::size_t>> call;
        int counter = 0, ncomp = 0;
        for (int root = 0; root < n; ++root) {
            if (index[static_cast<std::size_t>(root)] != -1)
                continue;
            call.emplace_back(root, 0);
            while (!call.empty()) {
                auto& [u, next] = call.back();
                const auto su = static_cast<std::size_t>(u);
                if (next == 0 && index[su] == -1) {
                    index[su] = low[su] = counter++;
                    scc_stack.push_back(u);
                    on_stack[su] = 1;
                }
                if (next < out[su].size()) {
                    const int w = out[su][next++];
                    const auto sw = static_cast<std::size_t>(w);
                    if (index[sw] == -1)
                        call.emplace_back(w, 0);
                    else if (on_stack[sw])
                        low[su] = std::min(low[su], index[sw]);
                    continue;
                }
                if (low[su] == index[su]) {
                    int w;
                    do {
                        w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        comp[static_cast<std::size_t>(w)] = ncomp;
                    } while (w != u);
                    ++ncomp;
                }
                const int finished = u;
                call.pop_back();
                if (!call.empty()) {
                    const auto sp = static_cast<std::size_t>(call.back().first);
                    low[sp] = std::min(low[sp], low[static_cast<std::size_t>(finished)]);
                }
            }
        }
        return comp;
    }

    int nvars_;
    int offset_ = 0;
    std::vector<int> values_;
    std::vector<int> value_index_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> var_match_;
    std::vector<int> val_match_;
};

} // namespace

std::optional<std::vector<Domain>> alldifferent_filter(std::span<const Domain> domains)
{
    if (domains.empty())
        throw std::invalid_argument("alldifferent_filter(): no variables");
    for (const auto& d : domains)
        if (d.empty())
            return std::nullopt;

    ValueGraph graph(domains);
    if (!graph.complete_matching())
        return std::nullopt;

    std::vector<Domain> result(domains.begin(), domains.end());
    graph.for_each_unsupported([&](int x, int v) { result[static_cast<std::size_t>(x)].remove(v); });
    return result;
}

AllDifferent::AllDifferent(std::vector<int> vars) :
    vars_(std::move(vars))
{
    if (vars_.empty())
        throw std::invalid_argument("AllDifferent: empty scope");
}

bool AllDifferent::propagate(ProblemState& state)
{
    std::vector<Domain> doms;
    doms.reserve(vars_.size());
    for (int v : vars_) {
        if (state.domain(v).empty())
            return false;
        doms.push_back(state.domain(v));
    }

    ValueGraph graph(doms);
    graph.seed(cached_);
    if (!graph.complete_matching()) {
        cached_.clear();
        return false;
    }
    cached_ = graph.matched_values();

    bool ok = true;
    graph.for_each_unsupported([&](int x, int v) { ok = state.remove(vars_[static_cast<std::size_t>(x)], v) && ok; });
    return ok;
}

PairwiseNotEqual::PairwiseNotEqual(std::vector<int> vars) :
    vars_(std::move(vars))
{
}

bool PairwiseNotEqual::propagate(ProblemState& state)
{
    for (int x : vars_) {
        const auto& dx = state.domain(x);
        if (dx.empty())
            return false;
        if (!dx.is_singleton())
            continue;
        const int value = dx.value();
        for (int y : vars_)
            if (y != x && !state.remove(y, value))
                return false;
    }
    return true;
}

} // namespace tiepart
