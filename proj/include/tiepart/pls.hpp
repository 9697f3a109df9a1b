#pragma once

#include "tiepart/branchers.hpp"
#include "tiepart/problem_state.hpp"
#include "tiepart/search.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace tiepart::pls {

/// n x n grid in row-major order; 0 marks a hole, otherwise a value in 1..n.
struct PlsInstance {
    int n = 0;
    std::vector<int> grid;

    int at(int row, int col) const { return grid[static_cast<std::size_t>(row * n + col)]; }
    int holes() const;
    /// Throws std::invalid_argument on out-of-range values or a repeated
    /// value in a row or column.
    void validate() const;
    bool is_complete_latin_square() const;

    friend bool operator==(const PlsInstance&, const PlsInstance&) = default;
};

struct GeneratorConfig {
    int n = 15;
    int holes = 0;
    bool balanced = false;
    std::uint64_t seed = 0;
};

/// Seeded random Latin square (shuffled cyclic square followed by row and
/// column cycle switches) with `holes` cells emptied. Balanced instances
/// spread holes so per-row and per-column counts differ by at most one.
PlsInstance generate_pls(const GeneratorConfig& config);

/// Text format: first line n, then n lines of n space-separated integers.
void write_pls(std::ostream& out, const PlsInstance& instance);
PlsInstance read_pls(std::istream& in);

/// Search model over the holes: one variable per hole in row-major order.
struct PlsModel {
    PlsInstance instance;
    std::vector<int> hole_cells;
    ProblemState state;

    /// Grid with every bound hole variable filled in.
    PlsInstance current_grid() const;
};

enum class Propagation { hyper_arc, pairwise };

PlsModel build_model(const PlsInstance& instance, Propagation propagation = Propagation::hyper_arc);

/// Rank of value v is the number of cells currently holding v.
std::vector<RankedValue> occurrence_ranks(const PlsModel& model, const ProblemState& state, int var);

struct PlsRun {
    SearchStats stats;
    std::optional<PlsInstance> completion;
};

struct PlsOptions {
    Propagation propagation = Propagation::hyper_arc;
    double equivalence_pct = 0.0;
};

/// Smallest domain first (row-major among equals), occurrence-count values.
PlsRun solve_pls(const PlsInstance& instance, BranchMode mode, Strategy strategy, const SearchLimits& limits = {},
                 const PlsOptions& options = {});

} // namespace tiepart::pls
