#include "tiepart/tsp.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace tiepart::tsp {

TsplibError::TsplibError(int line, const std::string& message) :
    std::runtime_error("line " + std::to_string(line) + ": " + message),
    line_(line)
{
}

void TspInstance::validate() const
{
    if (n < 1 || cost.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw std::invalid_argument("instance cost matrix has the wrong size");
    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0)
            throw std::invalid_argument("instance diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            if (at(i, j) < 0)
                throw std::invalid_argument("instance costs must be non-negative");
            if (at(i, j) != at(j, i))
                throw std::invalid_argument("instance cost matrix must be symmetric");
        }
    }
}

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

bool starts_keyword(const std::string& line)
{
    return !line.empty() && std::isalpha(static_cast<unsigned char>(line.front()));
}

std::size_t expected_weights(const std::string& format, std::size_t n)
{
    if (format == "FULL_MATRIX")
        return n * n;
    if (format == "LOWER_DIAG_ROW" || format == "UPPER_DIAG_ROW")
        return n * (n + 1) / 2;
    if (format == "UPPER_ROW" || format == "LOWER_ROW")
        return n * (n - 1) / 2;
    return 0;
}

} // namespace

TspInstance parse_tsplib(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;

    std::string name, type, weight_type, format;
    std::optional<int> dimension;
    std::vector<long long> weights;
    int weights_line = 0;
    bool in_weights = false, in_skipped_section = false;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty())
            continue;

        if (in_weights || in_skipped_section) {
            if (!starts_keyword(line)) {
                if (in_skipped_section)
                    continue;
                std::istringstream nums(line);
                std::string tok;
                while (nums >> tok) {
                    long long v = 0;
                    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                    if (ec != std::errc{} || ptr != tok.data() + tok.size())
                        throw TsplibError(line_no, "malformed edge weight '" + tok + "'");
                    weights.push_back(v);
                }
                continue;
            }
            in_weights = in_skipped_section = false;
        }

        const auto colon = line.find(':');
        const std::string key = upper(trim(line.substr(0, colon)));
        const std::string value = colon == std::string::npos ? std::string{} : trim(line.substr(colon + 1));

        if (key == "EOF")
            break;
        if (key == "EDGE_WEIGHT_SECTION") {
            in_weights = true;
            weights_line = line_no;
            continue;
        }
        if (key.ends_with("_SECTION")) {
            in_skipped_section = true;
            continue;
        }
        if (colon == std::string::npos)
            throw TsplibError(line_no, "expected 'KEY : VALUE', got '" + line + "'");

        if (key == "NAME")
            name = value;
        else if (key == "TYPE")
            type = upper(value);
        else if (key == "DIMENSION") {
            int d = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
            if (ec != std::errc{} || ptr != value.data() + value.size() || d < 1)
                throw TsplibError(line_no, "invalid DIMENSION '" + value + "'");
            dimension = d;
        }
        else if (key == "EDGE_WEIGHT_TYPE")
            weight_type = upper(value);
        else if (key == "EDGE_WEIGHT_FORMAT")
            format = upper(value);
        // COMMENT, DISPLAY_DATA_TYPE and other keys carry nothing we use.
    }

    if (!dimension)
        throw TsplibError(line_no, "missing DIMENSION");
    if (type != "TSP")
        throw TsplibError(line_no, "unsupported TYPE '" + type + "' (only TSP)");
    if (weight_type != "EXPLICIT")
        throw TsplibError(line_no, "unsupported EDGE_WEIGHT_TYPE '" + weight_type + "' (only EXPLICIT)");
    const auto n = static_cast<std::size_t>(*dimension);
    const std::size_t expected = expected_weights(format, n);
    if (expected == 0)
        throw TsplibError(line_no, "unsupported EDGE_WEIGHT_FORMAT '" + format + "'");
    if (weights_line == 0)
        throw TsplibError(line_no, "missing EDGE_WEIGHT_SECTION");
    if (weights.size() != expected)
        throw TsplibError(weights_line, "EDGE_WEIGHT_SECTION holds " + std::to_string(weights.size()) +
                                            " values, expected " + std::to_string(expected));

    TspInstance inst;
    inst.name = name;
    inst.n = *dimension;
    inst.cost.assign(n * n, 0);
    auto set = [&](std::size_t i, std::size_t j, long long v) {
        inst.cost[i * n + j] = v;
        inst.cost[j * n + i] = v;
    };
    std::size_t k = 0;
    if (format == "FULL_MATRIX") {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const long long v = weights[k++];
                if (i == j)
                    continue; // some files store a sentinel on the diagonal
                if (j < i && inst.cost[j * n + i] != v)
                    throw TsplibError(weights_line, "FULL_MATRIX is not symmetric");
                inst.cost[i * n + j] = v;
            }
    }
    else if (format == "LOWER_DIAG_ROW") {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                set(i, j, weights[k++]);
    }
    else if (format == "UPPER_DIAG_ROW") {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                set(i, j, weights[k++]);
    }
    else if (format == "UPPER_ROW") {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                set(i, j, weights[k++]);
    }
    else { // LOWER_ROW
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                set(i, j, weights[k++]);
    }
    for (std::size_t i = 0; i < n; ++i)
        inst.cost[i * n + i] = 0;
    for (long long v : inst.cost)
        if (v < 0)
            throw TsplibError(weights_line, "negative edge weight");
    if (inst.name.empty())
        inst.name = "unnamed";
    return inst;
}

TspInstance read_tsplib_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tsplib(buf.str());
}

} // namespace tiepart::tsp
