#include "tiepart/branchers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tiepart {

const char* to_string(BranchMode mode)
{
    return mode == BranchMode::labelling ? "labelling" : "partitioning";
}

std::vector<TieGroup> group_ties(std::span<const RankedValue> ranked, double equivalence_pct)
{
    if (ranked.empty())
        throw std::invalid_argument("group_ties(): empty input");
    if (!(equivalence_pct >= 0.0))
        throw std::invalid_argument("group_ties(): negative equivalence percentage");
    for (const auto& rv : ranked)
        if (!std::isfinite(rv.rank))
            throw std::invalid_argument("group_ties(): non-finite rank");

    std::vector<RankedValue> sorted(ranked.begin(), ranked.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const RankedValue& a, const RankedValue& b) {
        if (a.rank != b.rank)
            return a.rank > b.rank;
        return a.value < b.value;
    });

    std::vector<TieGroup> groups;
    for (const auto& rv : sorted) {
        if (!groups.empty()) {
            const double head = groups.back().rank;
            const bool joins = equivalence_pct == 0.0 ? rv.rank == head
                                                      : std::abs(rv.rank - head) <= equivalence_pct * std::abs(head);
            if (joins) {
                groups.back().values.push_back(rv.value);
                continue;
            }
        }
        groups.push_back(TieGroup{{rv.value}, rv.rank});
    }
    for (auto& g : groups)
        std::sort(g.values.begin(), g.values.end());
    return groups;
}

BranchList labelling_branches(std::span<const TieGroup> groups)
{
    BranchList out;
    int weight = 0;
    for (const auto& g : groups)
        for (int v : g.values)
            out.push_back(Branch{{v}, weight++});
    return out;
}

BranchList partitioning_branches(std::span<const TieGroup> groups)
{
    BranchList out;
    int weight = 0;
    for (const auto& g : groups) {
        out.push_back(Branch{g.values, weight});
        weight += static_cast<int>(g.values.size());
    }
    return out;
}

BranchList make_branches(BranchMode mode, std::span<const TieGroup> groups)
{
    return mode == BranchMode::labelling ? labelling_branches(groups) : partitioning_branches(groups);
}

} // namespace tiepart
