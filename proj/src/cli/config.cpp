#include "pgcubic/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pgcubic::cli {

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::kCsv;
    if (text == "json") return Format::kJson;
    throw std::invalid_argument("unknown output format: " + text);
}

std::string to_string(Format f) { return f == Format::kCsv ? "csv" : "json"; }

namespace {

double parse_double(const std::string& key, const std::string& value) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config " + key + ": malformed number '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config " + key + ": malformed number '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config " + key + ": malformed integer '" + value + "'");
    }
    if (pos != value.size())
        throw std::invalid_argument("config " + key + ": malformed integer '" + value + "'");
    return v;
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "tolerance") {
        config.tolerance = parse_double(key, value);
        if (!(config.tolerance > 0.0))
            throw std::invalid_argument("config tolerance: must be positive");
    } else if (key == "n_boundary_samples") {
        config.n_boundary_samples = static_cast<int>(parse_int(key, value));
        if (config.n_boundary_samples < 256)
            throw std::invalid_argument("config n_boundary_samples: must be >= 256");
    } else if (key == "grid") {
        std::stringstream ss(value);
        std::string part;
        std::array<int, 3> dims = config.grid;
        int i = 0;
        while (std::getline(ss, part, ',')) {
            if (i >= 3) throw std::invalid_argument("config grid: at most three dimensions");
            dims[static_cast<size_t>(i++)] = static_cast<int>(parse_int(key, part));
        }
        if (i == 1) dims[1] = dims[0];  // grid=N means an N x N scan window
        for (int k = 0; k < (i == 1 ? 2 : i); ++k)
            if (dims[static_cast<size_t>(k)] < 2)
                throw std::invalid_argument("config grid: dimensions must be >= 2");
        config.grid = dims;
    } else if (key == "format") {
        config.format = parse_format(value);
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

void load_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config " + path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

RunConfig environment_config() {
    RunConfig config;
    if (const char* path = std::getenv("PG_CUBIC_CONFIG")) load_config_file(config, path);
    return config;
}

}  // namespace pgcubic::cli
