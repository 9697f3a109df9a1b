#include "tiepart/pls.hpp"

#include "tiepart/alldifferent.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tiepart::pls {

int PlsInstance::holes() const
{
    return static_cast<int>(std::count(grid.begin(), grid.end(), 0));
}

void PlsInstance::validate() const
{
    if (n < 1 || grid.size() != static_cast<std::size_t>(n * n))
        throw std::invalid_argument("PLS grid must hold n*n cells");
    for (int v : grid)
        if (v < 0 || v > n)
            throw std::invalid_argument("PLS cell value out of range");
    for (int i = 0; i < n; ++i) {
        std::vector<char> in_row(static_cast<std::size_t>(n) + 1, 0), in_col(static_cast<std::size_t>(n) + 1, 0);
        for (int j = 0; j < n; ++j) {
            const int r = at(i, j), c = at(j, i);
            if (r != 0 && in_row[static_cast<std::size_t>(r)]++)
                throw std::invalid_argument("value " + std::to_string(r) + " repeated in row " + std::to_string(i));
            if (c != 0 && in_col[static_cast<std::size_t>(c)]++)
                throw std::invalid_argument("value " + std::to_string(c) + " repeated in column " + std::to_string(i));
        }
    }
}

bool PlsInstance::is_complete_latin_square() const
{
    if (holes() != 0)
        return false;
    try {
        validate();
    }
    catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

namespace {

using Rng = std::mt19937_64;

int draw(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng)
{
    // Explicit Fisher-Yates so the output does not depend on the standard
    // library's std::shuffle.
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[static_cast<std::size_t>(draw(rng, 0, static_cast<int>(i) - 1))]);
}

std::vector<int> iota_vector(int n, int first = 0)
{
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), first);
    return v;
}

// Swaps rows r1 and r2 on the cycle of columns through c; the square stays Latin.
void row_cycle_switch(std::vector<int>& sq, int n, int r1, int r2, int c)
{
    auto cell = [&](int r, int col) -> int& { return sq[static_cast<std::size_t>(r * n + col)]; };
    std::vector<int> cols{c};
    const int start = cell(r1, c);
    int want = cell(r2, c);
    while (want != start) {
        int next = 0;
        while (cell(r1, next) != want)
            ++next;
        cols.push_back(next);
        want = cell(r2, next);
    }
    for (int col : cols)
        std::swap(cell(r1, col), cell(r2, col));
}

void transpose(std::vector<int>& sq, int n)
{
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            std::swap(sq[static_cast<std::size_t>(i * n + j)], sq[static_cast<std::size_t>(j * n + i)]);
}

} // namespace

PlsInstance generate_pls(const GeneratorConfig& config)
{
    const int n = config.n;
    if (n < 1)
        throw std::invalid_argument("PLS order must be positive");
    if (config.holes < 0 || config.holes > n * n)
        throw std::invalid_argument("hole count must lie in [0, n*n]");

    Rng rng(config.seed);
    auto rows = iota_vector(n), cols = iota_vector(n), symbols = iota_vector(n, 1);
    shuffle(rows, rng);
    shuffle(cols, rng);
    shuffle(symbols, rng);

    std::vector<int> sq(static_cast<std::size_t>(n * n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            sq[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)] * n + cols[static_cast<std::size_t>(c)])] =
                symbols[static_cast<std::size_t>((r + c) % n)];

    if (n > 1) {
        const int burn_in = n * n;
        for (int step = 0; step < burn_in; ++step) {
            const bool by_column = step % 2 == 1;
            if (by_column)
                transpose(sq, n);
            const int r1 = draw(rng, 0, n - 1);
            int r2 = draw(rng, 0, n - 2);
            if (r2 >= r1)
                ++r2;
            row_cycle_switch(sq, n, r1, r2, draw(rng, 0, n - 1));
            if (by_column)
                transpose(sq, n);
        }
    }

    std::vector<int> cells;
    if (!config.balanced) {
        cells = iota_vector(n * n);
        shuffle(cells, rng);
        cells.resize(static_cast<std::size_t>(config.holes));
    }
    else {
        // Whole broken diagonals first, then part of one more; each diagonal
        // meets every row and column once.
        auto diagonals = iota_vector(n);
        shuffle(diagonals, rng);
        auto row_order = iota_vector(n), row_map = iota_vector(n), col_map = iota_vector(n);
        shuffle(row_order, rng);
        shuffle(row_map, rng);
        shuffle(col_map, rng);
        for (int k = 0; k < config.holes; ++k) {
            const int d = diagonals[static_cast<std::size_t>(k / n)];
            const int r = row_order[static_cast<std::size_t>(k % n)];
            const int c = (r + d) % n;
            cells.push_back(row_map[static_cast<std::size_t>(r)] * n + col_map[static_cast<std::size_t>(c)]);
        }
    }
    for (int cell : cells)
        sq[static_cast<std::size_t>(cell)] = 0;

    PlsInstance inst{n, std::move(sq)};
    inst.validate();
    return inst;
}

void write_pls(std::ostream& out, const PlsInstance& instance)
{
    out << instance.n << '\n';
    for (int r = 0; r < instance.n; ++r) {
        for (int c = 0; c < instance.n; ++c) {
            if (c > 0)
                out << ' ';
            out << instance.at(r, c);
        }
        out << '\n';
    }
}

PlsInstance read_pls(std::istream& in)
{
    PlsInstance inst;
    if (!(in >> inst.n) || inst.n < 1)
        throw std::runtime_error("PLS file: expected a positive order on the first line");
    inst.grid.resize(static_cast<std::size_t>(inst.n * inst.n));
    for (auto& v : inst.grid)
        if (!(in >> v))
            throw std::runtime_error("PLS file: expected " + std::to_string(inst.n * inst.n) + " cell values");
    std::string extra;
    if (in >> extra)
        throw std::runtime_error("PLS file: trailing data '" + extra + "'");
    inst.validate();
    return inst;
}

PlsInstance PlsModel::current_grid() const
{
    PlsInstance out = instance;
    for (std::size_t v = 0; v < hole_cells.size(); ++v) {
        const auto& d = state.domain(static_cast<int>(v));
        if (d.is_singleton())
            out.grid[static_cast<std::size_t>(hole_cells[v])] = d.value();
    }
    return out;
}

PlsModel build_model(const PlsInstance& instance, Propagation propagation)
{
    instance.validate();
    const int n = instance.n;
    std::vector<int> hole_cells;
    std::vector<Domain> doms;
    for (int cell = 0; cell < n * n; ++cell) {
        if (instance.grid[static_cast<std::size_t>(cell)] != 0)
            continue;
        const int r = cell / n, c = cell % n;
        std::vector<int> vals;
        for (int v = 1; v <= n; ++v) {
            bool used = false;
            for (int k = 0; k < n && !used; ++k)
                used = instance.at(r, k) == v || instance.at(k, c) == v;
            if (!used)
                vals.push_back(v);
        }
        hole_cells.push_back(cell);
        doms.emplace_back(vals);
    }

    PlsModel model{instance, hole_cells, ProblemState(std::move(doms))};
    std::vector<std::vector<int>> row_vars(static_cast<std::size_t>(n)), col_vars(static_cast<std::size_t>(n));
    for (std::size_t v = 0; v < hole_cells.size(); ++v) {
        row_vars[static_cast<std::size_t>(hole_cells[v] / n)].push_back(static_cast<int>(v));
        col_vars[static_cast<std::size_t>(hole_cells[v] % n)].push_back(static_cast<int>(v));
    }
    auto add = [&](std::vector<int>& vars) {
        if (vars.size() < 2)
            return;
        if (propagation == Propagation::hyper_arc)
            model.state.add_propagator(std::make_shared<AllDifferent>(std::move(vars)));
        else
            model.state.add_propagator(std::make_shared<PairwiseNotEqual>(std::move(vars)));
    };
    for (auto& vars : row_vars)
        add(vars);
    for (auto& vars : col_vars)
        add(vars);
    return model;
}

std::vector<RankedValue> occurrence_ranks(const PlsModel& model, const ProblemState& state, int var)
{
    const int n = model.instance.n;
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    for (int v : model.instance.grid)
        ++count[static_cast<std::size_t>(v)];
    for (std::size_t h = 0; h < model.hole_cells.size(); ++h) {
        const auto& d = state.domain(static_cast<int>(h));
        if (d.is_singleton())
            ++count[static_cast<std::size_t>(d.value())];
    }
    std::vector<RankedValue> out;
    state.domain(var).for_each([&](int v) { out.push_back({v, static_cast<double>(count[static_cast<std::size_t>(v)])}); });
    return out;
}

PlsRun solve_pls(const PlsInstance& instance, BranchMode mode, Strategy strategy, const SearchLimits& limits,
                 const PlsOptions& options)
{
    auto model = build_model(instance, options.propagation);

    SearchModel search_model;
    search_model.select_var = smallest_domain_first();
    search_model.rank_values = [&model](const ProblemState& state, int var) { return occurrence_ranks(model, state, var); };
    search_model.equivalence_pct = options.equivalence_pct;

    PlsRun run;
    run.stats = search(model.state, search_model, mode, strategy, limits);
    if (run.stats.found) {
        PlsInstance done = instance;
        for (std::size_t v = 0; v < model.hole_cells.size(); ++v)
            done.grid[static_cast<std::size_t>(model.hole_cells[v])] = run.stats.solution[v];
        run.completion = std::move(done);
    }
    return run;
}

} // namespace tiepart::pls
