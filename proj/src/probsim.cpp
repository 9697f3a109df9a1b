#include "tiepart/probsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tiepart::probsim {

void ProbTreeSpec::validate() const
{
    if (depth < 1 || width < 1)
        throw std::invalid_argument("tree spec needs depth >= 1 and width >= 1");
    if (probs.size() != static_cast<std::size_t>(depth) || tie_groups.size() != static_cast<std::size_t>(depth))
        throw std::invalid_argument("tree spec needs one probability row and one tie row per level");
    for (int i = 0; i < depth; ++i) {
        const auto& p = probs[static_cast<std::size_t>(i)];
        const auto& g = tie_groups[static_cast<std::size_t>(i)];
        if (p.size() != static_cast<std::size_t>(width) || g.size() != static_cast<std::size_t>(width))
            throw std::invalid_argument("tree spec level does not match the branch width");
        double sum = 0.0;
        for (double x : p) {
            if (!(x >= 0.0 && x <= 1.0))
                throw std::invalid_argument("branch probability outside [0, 1]");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("branch probabilities of a level do not sum to 1");
        if (g.front() != 0)
            throw std::invalid_argument("tie groups must start at 0");
        for (std::size_t j = 1; j < p.size(); ++j) {
            const int step = g[j] - g[j - 1];
            if (step == 0 && p[j] != p[j - 1])
                throw std::invalid_argument("values in one tie group must have equal probability");
            if (step == 1 && !(p[j] < p[j - 1]))
                throw std::invalid_argument("probabilities must decrease strictly between tie groups");
            if (step != 0 && step != 1)
                throw std::invalid_argument("tie groups must be contiguous");
        }
    }
}

bool ProbTreeSpec::has_tie() const
{
    for (const auto& g : tie_groups)
        for (std::size_t j = 1; j < g.size(); ++j)
            if (g[j] == g[j - 1])
                return true;
    return false;
}

std::uint64_t ProbTreeSpec::leaf_count() const
{
    std::uint64_t n = 1;
    for (int i = 0; i < depth; ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(width))
            return std::numeric_limits<std::uint64_t>::max();
        n *= static_cast<std::uint64_t>(width);
    }
    return n;
}

double leaf_probability(const ProbTreeSpec& spec, std::span<const int> path)
{
    if (path.size() != static_cast<std::size_t>(spec.depth))
        throw std::invalid_argument("leaf path length differs from tree depth");
    double p = 1.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i] < 0 || path[i] >= spec.width)
            throw std::invalid_argument("leaf path index out of range");
        p *= spec.probs[i][static_cast<std::size_t>(path[i])];
    }
    return p;
}

namespace {

struct LevelBranch {
    int first;
    int count;
    int weight;
};

// Walks the abstract tree with the same admission rules as the constraint
// search: exact-k iterations for LDS and the depth rule for DDS.
class TreeWalker {
public:
    TreeWalker(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap,
               const std::function<bool(const LeafVisit&)>& visit) :
        spec_(spec), strategy_(strategy), cap_(cap), visit_(visit)
    {
        spec_.validate();
        const auto n = static_cast<std::size_t>(spec.depth);
        levels_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& g = spec.tie_groups[i];
            for (int j = 0; j < spec.width;) {
                int end = j + 1;
                if (mode == BranchMode::partitioning)
                    while (end < spec.width && g[static_cast<std::size_t>(end)] == g[static_cast<std::size_t>(j)])
                        ++end;
                levels_[i].push_back(LevelBranch{j, end - j, j});
                j = end;
            }
        }
        suffix_max_.assign(n + 1, 0);
        for (std::size_t i = n; i-- > 0;)
            suffix_max_[i] = suffix_max_[i + 1] + levels_[i].back().weight;
        chosen_.resize(n);
        path_.resize(n);
    }

    void run()
    {
        if (cap_ == 0)
            return;
        if (strategy_ == Strategy::dfs) {
            iteration_ = 0;
            node(0, 0);
            return;
        }
        // DDS iteration depth+1 would repeat the whole tree.
        const int last = strategy_ == Strategy::dds ? spec_.depth : std::numeric_limits<int>::max();
        for (int it = 0; it <= last; ++it) {
            iteration_ = it;
            cut_ = false;
            if (!node(0, 0) || !cut_)
                return;
        }
    }

private:
    bool admits(int depth, int used, int w)
    {
        switch (strategy_) {
        case Strategy::dfs: return true;
        case Strategy::lds:
            if (used + w > iteration_) {
                cut_ = true;
                return false;
            }
            return used + w + suffix_max_[static_cast<std::size_t>(depth) + 1] >= iteration_;
        case Strategy::dds:
            if (depth < iteration_ - 1)
                return true;
            if (depth == iteration_ - 1) {
                // A heuristic branch here may still lead to discrepancies
                // that later iterations take deeper down.
                if (w == 0)
                    cut_ = true;
                return w > 0;
            }
            if (w > 0) {
                cut_ = true;
                return false;
            }
            return true;
        }
        return false;
    }

    // Returns false once enumeration should stop.
    bool node(int depth, int used)
    {
        if (depth == spec_.depth) {
            if (strategy_ == Strategy::lds && used != iteration_)
                return true;
            return subproblem(0, used);
        }
        for (const auto& b : levels_[static_cast<std::size_t>(depth)]) {
            if (!admits(depth, used, b.weight))
                continue;
            chosen_[static_cast<std::size_t>(depth)] = b;
            if (!node(depth + 1, used + b.weight))
                return false;
        }
        return true;
    }

    // DFS over the values of every multi-valued branch taken in the main tree.
    bool subproblem(int level, int used)
    {
        if (level == spec_.depth) {
            LeafVisit leaf{path_, leaf_probability(spec_, path_), used};
            ++emitted_;
            if (!visit_(leaf))
                return false;
            return emitted_ < cap_;
        }
        const auto& b = chosen_[static_cast<std::size_t>(level)];
        for (int j = b.first; j < b.first + b.count; ++j) {
            path_[static_cast<std::size_t>(level)] = j;
            if (!subproblem(level + 1, used))
                return false;
        }
        return true;
    }

    const ProbTreeSpec& spec_;
    Strategy strategy_;
    std::size_t cap_;
    const std::function<bool(const LeafVisit&)>& visit_;
    std::vector<std::vector<LevelBranch>> levels_;
    std::vector<int> suffix_max_;
    std::vector<LevelBranch> chosen_;
    LeafPath path_;
    int iteration_ = 0;
    bool cut_ = false;
    std::size_t emitted_ = 0;
};

} // namespace

void enumerate_leaves(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap,
                      const std::function<bool(const LeafVisit&)>& visit)
{
    TreeWalker walker(spec, mode, strategy, cap, visit);
    walker.run();
}

std::vector<LeafVisit> visit_order(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap)
{
    std::vector<LeafVisit> out;
    enumerate_leaves(spec, mode, strategy, cap, [&](const LeafVisit& leaf) {
        out.push_back(leaf);
        return true;
    });
    return out;
}

std::vector<double> ordered_leaves(const ProbTreeSpec& spec, BranchMode mode, Strategy strategy, std::size_t cap)
{
    if (cap < 1)
        throw std::invalid_argument("ordered_leaves(): cap must be at least 1");
    std::vector<double> out;
    enumerate_leaves(spec, mode, strategy, cap, [&](const LeafVisit& leaf) {
        out.push_back(leaf.probability);
        return true;
    });
    return out;
}

Curve cumulative_curve(std::span<const double> leaf_probs)
{
    Curve c;
    c.points.reserve(leaf_probs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < leaf_probs.size(); ++i) {
        sum += leaf_probs[i];
        c.points.push_back(CurvePoint{i + 1, sum});
    }
    return c;
}

DominanceVerdict verify_dominance(const ProbTreeSpec& spec, Strategy strategy, std::uint64_t max_leaves, bool perturb)
{
    const auto total = spec.leaf_count();
    if (total > max_leaves)
        throw std::length_error("tree too large for full enumeration");
    const auto cap = static_cast<std::size_t>(total);
    const auto lab = ordered_leaves(spec, BranchMode::labelling, strategy, cap);
    auto prt = ordered_leaves(spec, BranchMode::partitioning, strategy, cap);
    if (perturb)
        std::reverse(prt.begin(), prt.end());

    DominanceVerdict verdict;
    verdict.leaves = std::min(lab.size(), prt.size());
    double sum_lab = 0.0, sum_prt = 0.0;
    for (std::size_t k = 0; k < verdict.leaves; ++k) {
        sum_lab += lab[k];
        sum_prt += prt[k];
        if (sum_prt < sum_lab - dominance_tolerance) {
            verdict.pass = false;
            verdict.failing_k = k + 1;
            verdict.partitioning_sum = sum_prt;
            verdict.labelling_sum = sum_lab;
            return verdict;
        }
        if (!verdict.first_strict_k && sum_prt > sum_lab + dominance_tolerance)
            verdict.first_strict_k = k + 1;
    }
    verdict.partitioning_sum = sum_prt;
    verdict.labelling_sum = sum_lab;
    return verdict;
}

ProbTreeSpec random_spec(std::mt19937_64& rng, int max_depth, int max_width, bool force_tie)
{
    if (max_depth < 1 || max_width < 1 || (force_tie && max_width < 2))
        throw std::invalid_argument("random_spec(): bounds too small");
    std::uniform_int_distribution<int> depth_dist(1, max_depth);
    std::uniform_int_distribution<int> width_dist(force_tie ? 2 : 1, max_width);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::bernoulli_distribution merge(0.4);

    ProbTreeSpec spec;
    spec.depth = depth_dist(rng);
    spec.width = width_dist(rng);
    for (int i = 0; i < spec.depth; ++i) {
        std::vector<int> groups(static_cast<std::size_t>(spec.width), 0);
        for (int j = 1; j < spec.width; ++j)
            groups[static_cast<std::size_t>(j)] = groups[static_cast<std::size_t>(j) - 1] + (merge(rng) ? 0 : 1);
        spec.tie_groups.push_back(std::move(groups));
    }
    if (force_tie && !spec.has_tie()) {
        std::uniform_int_distribution<int> level(0, spec.depth - 1);
        auto& g = spec.tie_groups[static_cast<std::size_t>(level(rng))];
        std::uniform_int_distribution<int> at(1, spec.width - 1);
        const int j = at(rng);
        // Merge branch j into the group of branch j-1.
        for (std::size_t t = static_cast<std::size_t>(j); t < g.size(); ++t)
            --g[t];
    }
    for (const auto& g : spec.tie_groups) {
        const int ngroups = g.back() + 1;
        std::vector<double> group_weight;
        while (static_cast<int>(group_weight.size()) < ngroups) {
            const double w = weight(rng);
            if (std::find(group_weight.begin(), group_weight.end(), w) == group_weight.end())
                group_weight.push_back(w);
        }
        std::sort(group_weight.begin(), group_weight.end(), std::greater<>());
        double total = 0.0;
        for (int gid : g)
            total += group_weight[static_cast<std::size_t>(gid)];
        std::vector<double> p;
        for (int gid : g)
            p.push_back(group_weight[static_cast<std::size_t>(gid)] / total);
        spec.probs.push_back(std::move(p));
    }
    spec.validate();
    return spec;
}

std::vector<double> untied_level(int width)
{
    if (width < 1)
        throw std::invalid_argument("width must be positive");
    if (width == 1)
        return {1.0};
    if (width == 3)
        return {0.95, 0.04, 0.01};
    // 0.95 on the first branch, the remainder halving from branch to branch.
    std::vector<double> p{0.95};
    double norm = 0.0;
    for (int j = 1; j < width; ++j)
        norm += std::ldexp(1.0, -j);
    for (int j = 1; j < width; ++j)
        p.push_back(0.05 * std::ldexp(1.0, -j) / norm);
    return p;
}

std::vector<double> tied_level(int width)
{
    if (width < 2)
        throw std::invalid_argument("a tied level needs width >= 2");
    if (width == 2)
        return {0.5, 0.5};
    if (width == 3)
        return {0.495, 0.495, 0.01};
    std::vector<double> p{0.495, 0.495};
    double norm = 0.0;
    for (int j = 2; j < width; ++j)
        norm += std::ldexp(1.0, -(j - 1));
    for (int j = 2; j < width; ++j)
        p.push_back(0.01 * std::ldexp(1.0, -(j - 1)) / norm);
    return p;
}

std::vector<int> even_tie_levels(int depth, double fraction)
{
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("tie fraction must lie in [0, 1]");
    const int t = static_cast<int>(std::lround(fraction * depth));
    std::vector<int> out;
    for (int j = 0; j < t; ++j)
        out.push_back(j * depth / t);
    return out;
}

ProbTreeSpec tree_with_ties(int depth, int width, std::span<const int> tie_levels)
{
    ProbTreeSpec spec;
    spec.depth = depth;
    spec.width = width;
    const auto plain = untied_level(width);
    std::vector<int> plain_groups(static_cast<std::size_t>(width));
    for (int j = 0; j < width; ++j)
        plain_groups[static_cast<std::size_t>(j)] = j;
    for (int i = 0; i < depth; ++i) {
        const bool tied = std::find(tie_levels.begin(), tie_levels.end(), i) != tie_levels.end();
        if (tied) {
            spec.probs.push_back(tied_level(width));
            std::vector<int> g{0, 0};
            for (int j = 2; j < width; ++j)
                g.push_back(j - 1);
            spec.tie_groups.push_back(std::move(g));
        }
        else {
            spec.probs.push_back(plain);
            spec.tie_groups.push_back(plain_groups);
        }
    }
    spec.validate();
    return spec;
}

CurvePair compare_curves(const ProbTreeSpec& spec, Strategy strategy, std::size_t cap)
{
    CurvePair out;
    out.labelling = cumulative_curve(ordered_leaves(spec, BranchMode::labelling, strategy, cap));
    out.partitioning = cumulative_curve(ordered_leaves(spec, BranchMode::partitioning, strategy, cap));
    return out;
}

CurvePair depth30_experiment(double tie_fraction, Strategy strategy, std::size_t cap)
{
    constexpr int depth = 30;
    const auto ties = even_tie_levels(depth, tie_fraction);
    return compare_curves(tree_with_ties(depth, 3, ties), strategy, cap);
}

void write_curves_csv(std::ostream& out, const CurvePair& curves)
{
    out << "k,cum_prob_labelling,cum_prob_partitioning\n";
    const std::size_t rows = std::min(curves.labelling.points.size(), curves.partitioning.points.size());
    char buf[96];
    for (std::size_t i = 0; i < rows; ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", curves.labelling.points[i].k,
                      curves.labelling.points[i].cumulative, curves.partitioning.points[i].cumulative);
        out << buf;
    }
}

} // namespace tiepart::probsim
