#include "tiepart/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace tiepart {

const char* to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::dfs: return "dfs";
    case Strategy::lds: return "lds";
    case Strategy::dds: return "dds";
    }
    return "?";
}

VariableSelector fixed_order(std::vector<int> order)
{
    return [order = std::move(order)](const ProblemState&, std::span<const char> eligible) -> std::optional<int> {
        for (int v : order)
            if (eligible[static_cast<std::size_t>(v)])
                return v;
        return std::nullopt;
    };
}

VariableSelector smallest_domain_first()
{
    return [](const ProblemState& state, std::span<const char> eligible) -> std::optional<int> {
        std::optional<int> best;
        std::size_t best_size = 0;
        for (std::size_t v = 0; v < eligible.size(); ++v) {
            if (!eligible[v])
                continue;
            const std::size_t s = state.domain(static_cast<int>(v)).size();
            if (!best || s < best_size) {
                best = static_cast<int>(v);
                best_size = s;
            }
        }
        return best;
    };
}

ValueRanker prefer_smaller_values()
{
    return [](const ProblemState& state, int var) {
        std::vector<RankedValue> out;
        state.domain(var).for_each([&](int v) { out.push_back({v, -static_cast<double>(v)}); });
        return out;
    };
}

ValueRanker all_values_tied()
{
    return [](const ProblemState& state, int var) {
        std::vector<RankedValue> out;
        state.domain(var).for_each([&](int v) { out.push_back({v, 0.0}); });
        return out;
    };
}

namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { proceed, solved, stopped };

class Searcher {
public:
    Searcher(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits) :
        state_(state), model_(model), mode_(mode), limits_(limits), branched_(state.num_vars(), 0),
        eligible_(state.num_vars(), 0), start_(Clock::now())
    {
        if (!model_.select_var || !model_.rank_values)
            throw std::invalid_argument("SearchModel needs a variable selector and a value ranker");
    }

    SearchStats run(Strategy strategy, int max_iterations)
    {
        if (max_iterations < 0)
            throw std::invalid_argument("iteration bound must be non-negative");
        strategy_ = strategy;

        if (state_.failed() || state_.propagate_fixpoint().failed()) {
            stats_.fails = 1;
            return finish();
        }
        if (state_.all_bound()) {
            record_leaf(state_.assignment(), true);
            return finish();
        }

        if (strategy == Strategy::dfs) {
            iteration_ = 0;
            main_node(0, 0);
            return finish();
        }
        // DDS iteration n+1 would repeat the whole tree.
        const int last = strategy == Strategy::dds ? std::min<int>(max_iterations, static_cast<int>(state_.num_vars()))
                                                   : max_iterations;
        for (int it = 0; it <= last; ++it) {
            iteration_ = it;
            cut_by_budget_ = false;
            const auto verdict = main_node(0, 0);
            if (verdict != Verdict::proceed || !cut_by_budget_)
                break;
        }
        return finish();
    }

    SearchStats run_subproblem()
    {
        strategy_ = Strategy::dfs;
        if (state_.failed() || state_.propagate_fixpoint().failed()) {
            stats_.fails = 1;
            return finish();
        }
        if (state_.all_bound()) {
            record_leaf(state_.assignment(), true);
            return finish();
        }
        sub_node(0);
        return finish();
    }

private:
    SearchStats finish()
    {
        stats_.elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
        return stats_;
    }

    bool out_of_limits()
    {
        if (stats_.limit_reached)
            return true;
        if (limits_.max_fails && stats_.fails >= *limits_.max_fails)
            stats_.limit_reached = true;
        else if (limits_.max_time && Clock::now() - start_ >= *limits_.max_time)
            stats_.limit_reached = true;
        else if (limits_.stop.stop_requested())
            stats_.limit_reached = true;
        return stats_.limit_reached;
    }

    // Sum of (|D|-1) over variables still to be branched in the main tree:
    // an upper bound on the discrepancy the rest of the path can add.
    int remaining_slack(int except) const
    {
        int slack = 0;
        for (std::size_t v = 0; v < branched_.size(); ++v) {
            if (branched_[v] || static_cast<int>(v) == except)
                continue;
            slack += static_cast<int>(state_.domain(static_cast<int>(v)).size()) - 1;
        }
        return slack;
    }

    // Whether a branch of weight w at main-tree depth `depth` may be taken.
    bool admits(int depth, int used, int w, int slack)
    {
        switch (strategy_) {
        case Strategy::dfs: return true;
        case Strategy::lds:
            if (used + w > iteration_) {
                cut_by_budget_ = true;
                return false;
            }
            return used + w + slack >= iteration_;
        case Strategy::dds:
            if (depth < iteration_ - 1)
                return true;
            if (depth == iteration_ - 1) {
                if (w == 0)
                    cut_by_budget_ = true;
                return w > 0;
            }
            if (w > 0) {
                cut_by_budget_ = true;
                return false;
            }
            return true;
        }
        return false;
    }

    // Whether a path that finished its main-tree part after `levels`
    // decisions with total weight `used` belongs to the current iteration.
    bool in_iteration(int levels, int used) const
    {
        switch (strategy_) {
        case Strategy::dfs: return true;
        case Strategy::lds: return used == iteration_;
        case Strategy::dds: return iteration_ == 0 || levels >= iteration_;
        }
        return false;
    }

    void record_leaf(std::vector<int> values, bool solution)
    {
        ++stats_.leaves;
        if (solution && !stats_.found) {
            stats_.found = true;
            stats_.solution = values;
            stats_.solution_discrepancy = path_.total;
        }
        if (model_.on_leaf)
            model_.on_leaf(LeafEvent{std::move(values), path_, solution});
    }

    bool others_bound(int var) const
    {
        for (std::size_t v = 0; v < state_.num_vars(); ++v)
            if (static_cast<int>(v) != var && !state_.domain(static_cast<int>(v)).is_singleton())
                return false;
        return true;
    }

    std::vector<int> leaf_values(int var, int value) const
    {
        std::vector<int> out(state_.num_vars());
        for (std::size_t v = 0; v < out.size(); ++v)
            out[v] = static_cast<int>(v) == var ? value : state_.domain(static_cast<int>(v)).value();
        return out;
    }

    BranchList branches_for(int var, BranchMode mode) const
    {
        const auto ranked = model_.rank_values(state_, var);
        const auto groups = group_ties(ranked, model_.equivalence_pct);
        auto branches = make_branches(mode, groups);
        return branches;
    }

    Verdict main_node(int depth, int used)
    {
        if (out_of_limits())
            return Verdict::stopped;

        for (std::size_t v = 0; v < eligible_.size(); ++v)
            eligible_[v] = !branched_[v] && !state_.domain(static_cast<int>(v)).is_singleton();
        const auto var = model_.select_var(state_, eligible_);
        if (!var) {
            // Every variable has been branched on: the remainder is a sub-problem.
            if (!in_iteration(depth, used))
                return Verdict::proceed;
            return sub_node(used);
        }

        const auto branches = branches_for(*var, mode_);
        const int slack = remaining_slack(*var);
        branched_[static_cast<std::size_t>(*var)] = 1;
        Verdict verdict = Verdict::proceed;
        for (const auto& b : branches) {
            if (!admits(depth, used, b.discrepancy, slack))
                continue;
            verdict = apply(*var, b, depth, used, true);
            if (verdict != Verdict::proceed)
                break;
        }
        branched_[static_cast<std::size_t>(*var)] = 0;
        return verdict;
    }

    Verdict sub_node(int used)
    {
        if (out_of_limits())
            return Verdict::stopped;

        for (std::size_t v = 0; v < eligible_.size(); ++v)
            eligible_[v] = !state_.domain(static_cast<int>(v)).is_singleton();
        const auto var = model_.select_var(state_, eligible_);
        if (!var)
            throw std::logic_error("variable selector returned no variable inside a sub-problem");

        for (const auto& b : branches_for(*var, BranchMode::labelling)) {
            const Branch inner{b.allowed, 0};
            const auto verdict = apply(*var, inner, -1, used, false);
            if (verdict != Verdict::proceed)
                return verdict;
        }
        return Verdict::proceed;
    }

    Verdict apply(int var, const Branch& b, int depth, int used, bool main_tree)
    {
        const int total = used + b.discrepancy;
        const int levels = main_tree ? depth + 1 : std::numeric_limits<int>::max();
        const bool leaf = b.allowed.size() == 1 && others_bound(var);
        std::vector<int> values;
        if (leaf)
            values = leaf_values(var, b.allowed.front());

        state_.push_level();
        path_.per_depth.push_back(b.discrepancy);
        path_.total += b.discrepancy;
        ++stats_.nodes;

        Verdict verdict = Verdict::proceed;
        const auto result = state_.restrict(var, b.allowed);
        if (result.failed()) {
            ++stats_.fails;
            if (leaf && in_iteration(levels, total))
                record_leaf(std::move(values), false);
        }
        else if (state_.all_bound()) {
            if (in_iteration(levels, total)) {
                record_leaf(state_.assignment(), true);
                if (model_.stop_on_solution)
                    verdict = Verdict::solved;
            }
        }
        else if (!main_tree)
            verdict = sub_node(used);
        else if (strategy_ != Strategy::lds || total + remaining_slack(-1) >= iteration_)
            verdict = main_node(depth + 1, total);

        path_.total -= b.discrepancy;
        path_.per_depth.pop_back();
        state_.pop_level();
        if (verdict == Verdict::proceed && out_of_limits())
            verdict = Verdict::stopped;
        return verdict;
    }

    ProblemState& state_;
    const SearchModel& model_;
    BranchMode mode_;
    const SearchLimits& limits_;
    Strategy strategy_ = Strategy::dfs;
    int iteration_ = 0;
    bool cut_by_budget_ = false;
    std::vector<char> branched_;
    std::vector<char> eligible_;
    DiscrepancyPath path_;
    SearchStats stats_;
    Clock::time_point start_;
};

} // namespace

SearchStats search(ProblemState& state, const SearchModel& model, BranchMode mode, Strategy strategy,
                   const SearchLimits& limits, int max_iterations)
{
    Searcher searcher(state, model, mode, limits);
    return searcher.run(strategy, max_iterations);
}

SearchStats dfs(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits)
{
    return search(state, model, mode, Strategy::dfs, limits);
}

SearchStats lds(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits,
                int max_discrepancy)
{
    return search(state, model, mode, Strategy::lds, limits, max_discrepancy);
}

SearchStats dds(ProblemState& state, const SearchModel& model, BranchMode mode, const SearchLimits& limits,
                int max_depth_iterations)
{
    return search(state, model, mode, Strategy::dds, limits, max_depth_iterations);
}

SearchStats solve_subproblem(ProblemState& state, const SearchModel& model, const SearchLimits& limits)
{
    Searcher searcher(state, model, BranchMode::labelling, limits);
    return searcher.run_subproblem();
}

} // namespace tiepart
