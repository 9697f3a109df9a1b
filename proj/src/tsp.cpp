#include "tiepart/tsp.hpp"

#include "tiepart/alldifferent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tiepart::tsp {

long long tour_cost(const TspInstance& instance, const std::vector<int>& successor)
{
    long long total = 0;
    for (int i = 0; i < instance.n; ++i)
        total += instance.at(i, successor[static_cast<std::size_t>(i)]);
    return total;
}

std::vector<int> tour_from_successors(const std::vector<int>& successor)
{
    std::vector<int> tour;
    if (successor.empty())
        return tour;
    int city = 0;
    do {
        tour.push_back(city);
        city = successor[static_cast<std::size_t>(city)];
    } while (city != 0 && tour.size() <= successor.size());
    return tour;
}

NoSubtour::NoSubtour(int n) :
    n_(n)
{
}

std::vector<int> NoSubtour::scope() const
{
    std::vector<int> vars(static_cast<std::size_t>(n_));
    std::iota(vars.begin(), vars.end(), 0);
    return vars;
}

bool NoSubtour::propagate(ProblemState& state)
{
    const auto n = static_cast<std::size_t>(n_);
    std::vector<int> succ(n, -1), pred(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& d = state.domain(static_cast<int>(i));
        if (d.empty())
            return false;
        if (!d.is_singleton())
            continue;
        const int j = d.value();
        if (pred[static_cast<std::size_t>(j)] != -1)
            return false;
        succ[i] = j;
        pred[static_cast<std::size_t>(j)] = static_cast<int>(i);
    }

    std::vector<char> on_chain(n, 0);
    for (std::size_t head = 0; head < n; ++head) {
        if (pred[head] != -1)
            continue;
        std::size_t tail = head;
        std::size_t edges = 0;
        on_chain[head] = 1;
        while (succ[tail] != -1) {
            tail = static_cast<std::size_t>(succ[tail]);
            on_chain[tail] = 1;
            ++edges;
        }
        if (edges >= 1 && edges + 1 < n && !state.remove(static_cast<int>(tail), static_cast<int>(head)))
            return false;
    }

    // Cities not reached from a chain head sit on cycles of bound arcs.
    std::size_t cyclic = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!on_chain[i])
            ++cyclic;
    if (cyclic == 0)
        return true;
    if (cyclic < n)
        return false;
    // Every city is bound: accept only a single Hamiltonian cycle.
    std::size_t len = 0;
    std::size_t city = 0;
    do {
        city = static_cast<std::size_t>(succ[city]);
        ++len;
    } while (city != 0 && len <= n);
    return len == n;
}

SquareMatrix relaxation_costs(const TspInstance& instance, const ProblemState& state)
{
    const auto n = static_cast<std::size_t>(instance.n);
    SquareMatrix cost(n, forbidden_arc);
    for (std::size_t i = 0; i < n; ++i)
        state.domain(static_cast<int>(i)).for_each(
            [&](int j) { cost(i, static_cast<std::size_t>(j)) = static_cast<double>(instance.at(static_cast<int>(i), j)); });
    return cost;
}

AssignmentBound::AssignmentBound(const TspInstance& instance, long long threshold, bool filter_arcs) :
    instance_(instance), threshold_(threshold), filter_arcs_(filter_arcs)
{
}

std::vector<int> AssignmentBound::scope() const
{
    std::vector<int> vars(static_cast<std::size_t>(instance_.n));
    std::iota(vars.begin(), vars.end(), 0);
    return vars;
}

bool AssignmentBound::propagate(ProblemState& state)
{
    const auto ap = solve_assignment(relaxation_costs(instance_, state));
    if (!ap)
        return false;
    const auto limit = static_cast<double>(threshold_);
    if (ap->lower_bound > limit)
        return false;
    if (!filter_arcs_)
        return true;
    // Any tour using arc (i,j) costs at least lower_bound + reduced_cost(i,j).
    for (int i = 0; i < instance_.n; ++i) {
        for (int j : state.domain(i).values()) {
            if (ap->lower_bound + ap->reduced_cost(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) > limit &&
                !state.remove(i, j))
                return false;
        }
    }
    return true;
}

std::vector<RankedValue> reduced_cost_ranks(const ProblemState& state, const ApSolution& ap, int var)
{
    std::vector<RankedValue> out;
    state.domain(var).for_each([&](int j) {
        out.push_back({j, -ap.reduced_cost(static_cast<std::size_t>(var), static_cast<std::size_t>(j))});
    });
    return out;
}

ValueRanker reduced_cost_ranker(const TspInstance& instance)
{
    return [&instance](const ProblemState& state, int var) {
        const auto ap = solve_assignment(relaxation_costs(instance, state));
        if (!ap) {
            // Unreachable at a propagated node; fall back to plain cost order.
            std::vector<RankedValue> out;
            state.domain(var).for_each([&](int j) { out.push_back({j, -static_cast<double>(instance.at(var, j))}); });
            return out;
        }
        return reduced_cost_ranks(state, *ap, var);
    };
}

VariableSelector chain_order()
{
    return [](const ProblemState& state, std::span<const char> eligible) -> std::optional<int> {
        const std::size_t n = state.num_vars();
        if (n == 0)
            return std::nullopt;
        std::size_t city = 0;
        for (std::size_t steps = 0; steps < n && state.domain(static_cast<int>(city)).is_singleton(); ++steps)
            city = static_cast<std::size_t>(state.domain(static_cast<int>(city)).value());
        if (eligible[city])
            return static_cast<int>(city);
        std::optional<int> best;
        for (std::size_t v = 0; v < n; ++v)
            if (eligible[v] && (!best || state.domain(static_cast<int>(v)).size() < state.domain(*best).size()))
                best = static_cast<int>(v);
        return best;
    };
}

ProblemState successor_model(const TspInstance& instance)
{
    std::vector<Domain> doms;
    for (int i = 0; i < instance.n; ++i) {
        std::vector<int> vals;
        for (int j = 0; j < instance.n; ++j)
            if (j != i)
                vals.push_back(j);
        doms.emplace_back(vals);
    }
    if (instance.n == 1)
        doms.front() = Domain{0};
    ProblemState state(std::move(doms));
    std::vector<int> vars(static_cast<std::size_t>(instance.n));
    std::iota(vars.begin(), vars.end(), 0);
    state.add_propagator(std::make_shared<AllDifferent>(vars));
    state.add_propagator(std::make_shared<NoSubtour>(instance.n));
    return state;
}

TspRun solve_tsp(const TspInstance& instance, BranchMode mode, Strategy strategy, long long stop_at,
                 const SearchLimits& limits, const TspOptions& options)
{
    instance.validate();
    auto state = successor_model(instance);
    state.add_propagator(std::make_shared<AssignmentBound>(instance, stop_at, options.filter_arcs));

    SearchModel model;
    model.select_var = chain_order();
    model.rank_values = reduced_cost_ranker(instance);
    model.equivalence_pct = options.equivalence_pct;

    SearchLimits run_limits = limits;
    run_limits.stop_at_objective = stop_at;

    TspRun run;
    run.stats = search(state, model, mode, strategy, run_limits);
    if (run.stats.found) {
        run.cost = tour_cost(instance, run.stats.solution);
        run.tour = tour_from_successors(run.stats.solution);
    }
    return run;
}

long long nearest_neighbour_cost(const TspInstance& instance)
{
    const auto n = static_cast<std::size_t>(instance.n);
    std::vector<char> seen(n, 0);
    int city = 0;
    seen[0] = 1;
    long long total = 0;
    for (std::size_t step = 1; step < n; ++step) {
        int best = -1;
        for (int j = 0; j < instance.n; ++j)
            if (!seen[static_cast<std::size_t>(j)] && (best < 0 || instance.at(city, j) < instance.at(city, best)))
                best = j;
        total += instance.at(city, best);
        seen[static_cast<std::size_t>(best)] = 1;
        city = best;
    }
    return total + instance.at(city, 0);
}

OptimumResult find_optimal_tour(const TspInstance& instance, const SearchLimits& limits)
{
    instance.validate();
    auto state = successor_model(instance);
    OptimumResult result;
    result.cost = nearest_neighbour_cost(instance);
    auto bound = std::make_shared<AssignmentBound>(instance, result.cost, true);
    state.add_propagator(bound);

    SearchModel model;
    model.select_var = chain_order();
    model.rank_values = reduced_cost_ranker(instance);
    model.stop_on_solution = false;
    bool improved = false;
    model.on_leaf = [&](const LeafEvent& leaf) {
        if (!leaf.solution)
            return;
        const long long c = tour_cost(instance, leaf.values);
        if (!improved || c < result.cost) {
            improved = true;
            result.cost = c;
            result.tour = tour_from_successors(leaf.values);
            bound->set_threshold(c - 1);
        }
    };

    result.stats = search(state, model, BranchMode::labelling, Strategy::dfs, limits);
    result.proven = !result.stats.limit_reached;
    return result;
}

} // namespace tiepart::tsp
