#include "doctest.h"

#include "oracles.hpp"

#include "tiepart/cli.hpp"
#include "tiepart/pls.hpp"
#include "tiepart/probsim.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tiepart;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args)
{
    args.insert(args.begin(), "tiepart");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (!line.empty() && line.back() == ',')
            fields.emplace_back();
        rows.push_back(fields);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "tiepart_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

// Drops the time_s column from a report CSV.
std::string without_time(const std::string& csv)
{
    std::string result;
    for (auto row : parse_csv(csv)) {
        row.erase(row.begin() + 3);
        for (std::size_t i = 0; i < row.size(); ++i)
            result += (i ? "," : "") + row[i];
        result += '\n';
    }
    return result;
}

const std::string gr17 = std::string(TIEPART_DATA_DIR) + "/tsplib/gr17.tsp";

} // namespace

TEST_CASE("simulate small tree matches enumeration")
{
    const auto r = call({"simulate", "--depth", "2", "--width", "3", "--ties", "0.5", "--strategy", "lds", "--cap", "9"});
    REQUIRE(r.code == cli::exit_ok);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"k", "cum_prob_labelling", "cum_prob_partitioning"});

    const auto levels = probsim::even_tie_levels(2, 0.5);
    const auto spec = probsim::tree_with_ties(2, 3, levels);
    double lab = 0, prt = 0;
    const auto lo = oracle::strategy_order(spec, BranchMode::labelling, Strategy::lds);
    const auto po = oracle::strategy_order(spec, BranchMode::partitioning, Strategy::lds);
    for (std::size_t k = 1; k <= 9; ++k) {
        lab += lo[k - 1].probability;
        prt += po[k - 1].probability;
        CHECK(std::stoul(rows[k][0]) == k);
        CHECK(std::stod(rows[k][1]) == doctest::Approx(lab).epsilon(1e-12));
        CHECK(std::stod(rows[k][2]) == doctest::Approx(prt).epsilon(1e-12));
    }
    CHECK(std::stod(rows[9][1]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate argument errors")
{
    CHECK(call({"simulate", "--ties", "1.5"}).code == cli::exit_usage);
    CHECK(call({"simulate", "--strategy", "bfs"}).code == cli::exit_usage);
    CHECK(call({"simulate", "--depth", "0"}).code == cli::exit_usage);
    CHECK(call({"simulate", "--width", "1", "--ties", "0.5", "--depth", "4"}).code == cli::exit_usage);
    CHECK(call({"simulate", "--bogus"}).code == cli::exit_usage);
    CHECK(call({}).code == cli::exit_usage);
    CHECK(call({"--help"}).code == cli::exit_ok);
    CHECK(call({"simulate", "--help"}).code == cli::exit_ok);
}

TEST_CASE("simulate with a seed places ties at random levels")
{
    const std::vector<std::string> base{"simulate", "--depth", "12", "--width", "3", "--ties", "0.25", "--cap", "200"};
    auto with_seed = [&](const std::string& s) {
        auto a = base;
        a.insert(a.end(), {"--seed", s});
        return call(a);
    };
    const auto a = with_seed("4"), b = with_seed("4");
    REQUIRE(a.code == cli::exit_ok);
    CHECK(a.out == b.out);
    CHECK(parse_csv(a.out).size() == 201);
}

TEST_CASE("verify-theorem")
{
    const auto none = call({"verify-theorem", "--trials", "0"});
    CHECK(none.code == cli::exit_ok);

    const auto perturbed = call({"verify-theorem", "--trials", "20", "--seed", "3", "--perturb"});
    CHECK(perturbed.code == cli::exit_failure);
    CHECK(perturbed.out.find("first violation") != std::string::npos);

    // The exit code has to agree with the per-strategy counts it prints.
    const auto full = call({"verify-theorem", "--trials", "1000", "--max-depth", "4", "--max-width", "3", "--seed", "7"});
    CHECK(full.out.find("dfs: 1000/1000 pass") != std::string::npos);
    const bool lds_all = full.out.find("lds: 1000/1000 pass") != std::string::npos;
    const bool dds_all = full.out.find("dds: 1000/1000 pass") != std::string::npos;
    CHECK(full.code == (lds_all && dds_all ? cli::exit_ok : cli::exit_failure));

    CHECK(call({"verify-theorem", "--trials", "-1"}).code == cli::exit_usage);
}

TEST_CASE("gen-pls round trip and determinism")
{
    const auto a = scratch("a.pls"), b = scratch("b.pls"), c = scratch("c.pls");
    REQUIRE(call({"gen-pls", "--n", "15", "--holes", "86", "--seed", "1", "--out", a.string()}).code == cli::exit_ok);
    REQUIRE(call({"gen-pls", "--n", "15", "--holes", "86", "--seed", "1", "--out", b.string()}).code == cli::exit_ok);
    CHECK(slurp(a) == slurp(b));

    std::ifstream in(a);
    CHECK(pls::read_pls(in) == pls::generate_pls({15, 86, false, 1}));

    REQUIRE(call({"gen-pls", "--n", "5", "--holes", "0", "--seed", "2", "--out", c.string()}).code == cli::exit_ok);
    std::ifstream full(c);
    CHECK(pls::read_pls(full).is_complete_latin_square());

    CHECK(call({"gen-pls", "--n", "4", "--holes", "17", "--seed", "1", "--out", c.string()}).code == cli::exit_usage);
    CHECK(call({"gen-pls", "--n", "4", "--holes", "3", "--out", c.string()}).code == cli::exit_usage);
}

TEST_CASE("solve pls")
{
    const auto file = scratch("seed7.pls");
    REQUIRE(call({"gen-pls", "--n", "8", "--holes", "24", "--balanced", "--seed", "7", "--out", file.string()}).code ==
            cli::exit_ok);
    const auto csv = scratch("seed7.csv");
    const auto r = call({"solve", "--problem", "pls", "--instance", file.string(), "--mode", "both", "--csv", csv.string()});
    CHECK(r.code == cli::exit_ok);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"instance", "mode", "strategy", "time_s", "fails", "leaves", "discr", "found"});
    CHECK(rows[1][1] == "labelling");
    CHECK(rows[2][1] == "partitioning");
    CHECK(rows[1][7] == "true");
    CHECK(rows[2][7] == "true");
    CHECK(r.out.find("partitioning") != std::string::npos);

    const auto again = scratch("seed7b.csv");
    call({"solve", "--problem", "pls", "--instance", file.string(), "--mode", "both", "--csv", again.string()});
    CHECK(without_time(slurp(csv)) == without_time(slurp(again)));

    // An uncompletable square: no run finds a solution.
    const auto stuck = scratch("stuck.pls");
    std::ofstream(stuck) << "3\n1 2 0\n0 0 3\n0 0 0\n";
    CHECK(call({"solve", "--problem", "pls", "--instance", stuck.string()}).code == cli::exit_failure);

    const auto broken = scratch("broken.pls");
    std::ofstream(broken) << "3\n1 1 0\n";
    CHECK(call({"solve", "--problem", "pls", "--instance", broken.string()}).code == cli::exit_usage);
    CHECK(call({"solve", "--problem", "pls", "--instance", scratch("missing.pls").string()}).code == cli::exit_usage);
    CHECK(call({"solve", "--problem", "pls", "--instance", file.string(), "--mode", "random"}).code == cli::exit_usage);
}

TEST_CASE("solve tsp on gr17")
{
    CHECK(call({"solve", "--problem", "tsp", "--instance", gr17, "--mode", "labelling"}).code == cli::exit_usage);

    const auto csv = scratch("gr17.csv");
    const auto r = call({"solve", "--problem", "tsp", "--instance", gr17, "--mode", "both", "--stop-at", "2085", "--csv",
                         csv.string()});
    CHECK(r.code == cli::exit_ok);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "gr17.tsp");
    CHECK(rows[1][7] == "true");
    CHECK(rows[2][7] == "true");

    // Below the optimum nothing can be found.
    CHECK(call({"solve", "--problem", "tsp", "--instance", gr17, "--mode", "labelling", "--stop-at", "2084", "--max-time", "30"}).code ==
          cli::exit_failure);
}
