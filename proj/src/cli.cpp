#include "tiepart/cli.hpp"

#include "tiepart/pls.hpp"
#include "tiepart/probsim.hpp"
#include "tiepart/tsp.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tiepart::cli {

namespace {

const std::map<std::string, Strategy> strategy_names{
    {"dfs", Strategy::dfs}, {"lds", Strategy::lds}, {"dds", Strategy::dds}};

// Thrown for problems the user can fix by changing the command line.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double x, const char* fmt)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

struct ReportRow {
    std::string instance;
    BranchMode mode;
    Strategy strategy;
    SearchStats stats;
};

std::vector<std::string> row_fields(const ReportRow& r, bool for_table)
{
    std::string discr = r.stats.solution_discrepancy ? std::to_string(*r.stats.solution_discrepancy) : (for_table ? "-" : "");
    return {r.instance,
            to_string(r.mode),
            to_string(r.strategy),
            format_double(r.stats.elapsed, "%.3f"),
            std::to_string(r.stats.fails),
            std::to_string(r.stats.leaves),
            discr,
            r.stats.found ? "true" : "false"};
}

const std::vector<std::string> report_header{"instance", "mode", "strategy", "time_s", "fails", "leaves", "discr", "found"};

void print_table(std::ostream& out, const std::vector<ReportRow>& rows)
{
    std::vector<std::vector<std::string>> cells{report_header};
    for (const auto& r : rows)
        cells.push_back(row_fields(r, true));
    std::vector<std::size_t> width(report_header.size(), 0);
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size(); ++c)
            width[c] = std::max(width[c], line[c].size());
    for (const auto& line : cells) {
        std::string text;
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c > 0)
                text += "  ";
            // Text columns left-aligned, numbers right-aligned.
            const bool left = c < 3 || c == line.size() - 1;
            const std::string pad(width[c] - line[c].size(), ' ');
            text += left ? line[c] + pad : pad + line[c];
        }
        while (!text.empty() && text.back() == ' ')
            text.pop_back();
        out << text << '\n';
    }
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows)
{
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + v[i];
        return s;
    };
    out << join(report_header) << '\n';
    for (const auto& r : rows)
        out << join(row_fields(r, false)) << '\n';
}

std::vector<int> random_tie_levels(int depth, double fraction, std::uint64_t seed)
{
    const int t = static_cast<int>(std::lround(fraction * depth));
    std::vector<int> levels(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i)
        levels[static_cast<std::size_t>(i)] = i;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < t; ++i) {
        const int j = std::uniform_int_distribution<int>(i, depth - 1)(rng);
        std::swap(levels[static_cast<std::size_t>(i)], levels[static_cast<std::size_t>(j)]);
    }
    levels.resize(static_cast<std::size_t>(t));
    std::sort(levels.begin(), levels.end());
    return levels;
}

std::string describe(const probsim::ProbTreeSpec& spec)
{
    std::ostringstream s;
    s << "depth " << spec.depth << ", width " << spec.width;
    for (int i = 0; i < spec.depth; ++i) {
        s << "\n  level " << i << ":";
        for (int j = 0; j < spec.width; ++j)
            s << ' ' << format_double(spec.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], "%.6g")
              << "[g" << spec.tie_groups[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] << ']';
    }
    return s.str();
}

struct SimulateArgs {
    int depth = 30;
    int width = 3;
    double ties = 0.0;
    std::string strategy = "lds";
    std::size_t cap = 50000;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
    const auto levels = a.seed ? random_tie_levels(a.depth, a.ties, *a.seed) : probsim::even_tie_levels(a.depth, a.ties);
    if (!levels.empty() && a.width < 2)
        throw UsageError("ties need --width of at least 2");
    const auto spec = probsim::tree_with_ties(a.depth, a.width, levels);
    probsim::write_curves_csv(out, probsim::compare_curves(spec, strategy_names.at(a.strategy), a.cap));
    return exit_ok;
}

struct VerifyArgs {
    int trials = 1000;
    int max_depth = 4;
    int max_width = 3;
    std::uint64_t seed = 0;
    bool perturb = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    std::mt19937_64 rng(a.seed);
    std::vector<probsim::ProbTreeSpec> specs;
    for (int t = 0; t < a.trials; ++t)
        specs.push_back(probsim::random_spec(rng, a.max_depth, a.max_width, a.max_width >= 2 && t % 2 == 0));

    bool all_pass = true;
    std::string witness;
    for (const auto& [name, strategy] : std::vector<std::pair<std::string, Strategy>>{
             {"dfs", Strategy::dfs}, {"lds", Strategy::lds}, {"dds", Strategy::dds}}) {
        int passed = 0;
        for (std::size_t t = 0; t < specs.size(); ++t) {
            const auto v = probsim::verify_dominance(specs[t], strategy, 1u << 20, a.perturb);
            if (v.pass) {
                ++passed;
                continue;
            }
            if (witness.empty()) {
                std::ostringstream w;
                w << "first violation: strategy " << name << ", trial " << t << ", k = " << *v.failing_k
                  << ", partitioning " << format_double(v.partitioning_sum, "%.17g") << " < labelling "
                  << format_double(v.labelling_sum, "%.17g") << "\n  tree " << describe(specs[t]);
                witness = w.str();
            }
        }
        all_pass = all_pass && passed == a.trials;
        out << name << ": " << passed << "/" << a.trials << " pass\n";
    }
    if (!all_pass) {
        out << witness << '\n';
        return exit_failure;
    }
    return exit_ok;
}

struct SolveArgs {
    std::string problem;
    std::string instance;
    std::string mode = "both";
    std::string strategy = "lds";
    std::optional<long long> stop_at;
    double max_time = 900.0;
    double equiv_pct = 0.0;
    std::string csv;
};

int cmd_solve(const SolveArgs& a, std::ostream& out)
{
    std::vector<BranchMode> modes;
    if (a.mode != "partitioning")
        modes.push_back(BranchMode::labelling);
    if (a.mode != "labelling")
        modes.push_back(BranchMode::partitioning);

    SearchLimits limits;
    limits.max_time = std::chrono::duration<double>(a.max_time);
    const auto strategy = strategy_names.at(a.strategy);
    const std::string name = std::filesystem::path(a.instance).filename().string();

    std::vector<ReportRow> rows;
    if (a.problem == "tsp") {
        if (!a.stop_at)
            throw UsageError("--stop-at is required for --problem tsp (runs stop at a known optimum)");
        tsp::TspInstance inst;
        try {
            inst = tsp::read_tsplib_file(a.instance);
        }
        catch (const std::runtime_error& e) {
            throw UsageError(a.instance + ": " + e.what());
        }
        tsp::TspOptions options;
        options.equivalence_pct = a.equiv_pct;
        for (auto mode : modes)
            rows.push_back({name, mode, strategy, tsp::solve_tsp(inst, mode, strategy, *a.stop_at, limits, options).stats});
    }
    else {
        pls::PlsInstance inst;
        std::ifstream in(a.instance);
        if (!in)
            throw UsageError("cannot open " + a.instance);
        try {
            inst = pls::read_pls(in);
        }
        catch (const std::exception& e) {
            throw UsageError(a.instance + ": " + e.what());
        }
        pls::PlsOptions options;
        options.equivalence_pct = a.equiv_pct;
        for (auto mode : modes) {
            auto run = pls::solve_pls(inst, mode, strategy, limits, options);
            if (run.completion && !run.completion->is_complete_latin_square())
                throw std::logic_error("solver returned an invalid completion");
            rows.push_back({name, mode, strategy, run.stats});
        }
    }

    print_table(out, rows);
    if (!a.csv.empty()) {
        std::ofstream f(a.csv);
        if (!f)
            throw UsageError("cannot write " + a.csv);
        write_csv(f, rows);
    }
    const bool all_found = std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.stats.found; });
    return all_found ? exit_ok : exit_failure;
}

struct GenArgs {
    int n = 15;
    int holes = 0;
    bool balanced = false;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_generate(const GenArgs& a)
{
    if (a.n < 1)
        throw UsageError("--n must be positive");
    if (a.holes < 0 || a.holes > a.n * a.n)
        throw UsageError("--holes must lie in [0, n*n]");
    const auto inst = pls::generate_pls({a.n, a.holes, a.balanced, a.seed});
    std::ofstream f(a.out, std::ios::binary);
    if (!f)
        throw UsageError("cannot write " + a.out);
    pls::write_pls(f, inst);
    return exit_ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Labelling versus tie partitioning in depth-first based search", "tiepart"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Cumulative success curves on a synthetic tree (CSV)");
    simulate->add_option("--depth", sim.depth, "Tree depth")->check(CLI::Range(1, 10000));
    simulate->add_option("--width", sim.width, "Branch width")->check(CLI::Range(1, 1000));
    simulate->add_option("--ties", sim.ties, "Fraction of levels with a tie")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--strategy", sim.strategy)->check(CLI::IsMember({"dfs", "lds", "dds"}));
    simulate->add_option("--cap", sim.cap, "Number of leaves")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    simulate->add_option("--seed", sim.seed, "Place ties at random levels instead of evenly");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify-theorem", "Check partitioning dominance on random trees");
    verify->add_option("--trials", ver.trials)->check(CLI::NonNegativeNumber);
    verify->add_option("--max-depth", ver.max_depth)->check(CLI::Range(1, 12));
    verify->add_option("--max-width", ver.max_width)->check(CLI::Range(1, 8));
    verify->add_option("--seed", ver.seed);
    verify->add_flag("--perturb", ver.perturb, "Reverse the partitioning order (negative control)");

    SolveArgs sol;
    auto* solve = app.add_subcommand("solve", "Run labelling and/or partitioning on a TSP or PLS instance");
    solve->add_option("--problem", sol.problem)->required()->check(CLI::IsMember({"tsp", "pls"}));
    solve->add_option("--instance", sol.instance)->required()->check(CLI::ExistingFile);
    solve->add_option("--mode", sol.mode)->check(CLI::IsMember({"labelling", "partitioning", "both"}));
    solve->add_option("--strategy", sol.strategy)->check(CLI::IsMember({"dfs", "lds", "dds"}));
    solve->add_option("--stop-at", sol.stop_at, "Known optimum (TSP)");
    solve->add_option("--max-time", sol.max_time, "Seconds per run")->check(CLI::PositiveNumber);
    solve->add_option("--equiv-pct", sol.equiv_pct, "Relative band for ties")->check(CLI::NonNegativeNumber);
    solve->add_option("--csv", sol.csv, "Also write the report as CSV");

    GenArgs gen;
    auto* generate = app.add_subcommand("gen-pls", "Generate a partial Latin square");
    generate->add_option("--n", gen.n)->check(CLI::PositiveNumber);
    generate->add_option("--holes", gen.holes)->required();
    generate->add_flag("--balanced", gen.balanced);
    generate->add_option("--seed", gen.seed)->required();
    generate->add_option("--out", gen.out)->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        if (*simulate)
            return cmd_simulate(sim, out);
        if (*verify)
            return cmd_verify(ver, out);
        if (*solve)
            return cmd_solve(sol, out);
        return cmd_generate(gen);
    }
    catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace tiepart::cli
