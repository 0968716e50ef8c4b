#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace pgcubic::cli {

enum class Format { kCsv, kJson };

/// Run configuration: defaults, overridden by a flat key=value config file
/// (path from --config or the PG_CUBIC_CONFIG environment variable), then by
/// explicit command-line flags.
struct RunConfig {
    double tolerance = 1e-7;
    int n_boundary_samples = 4096;
    std::array<int, 3> grid{101, 101, 20};
    Format format = Format::kCsv;
    std::uint64_t seed = 12345;
};

Format parse_format(const std::string& text);
std::string to_string(Format f);

/// Applies one key=value setting; throws std::invalid_argument for unknown
/// keys or malformed values.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Parses a flat key=value file ('#' starts a comment line).
void load_config_file(RunConfig& config, const std::string& path);

/// Defaults plus PG_CUBIC_CONFIG if the variable is set.
RunConfig environment_config();

}  // namespace pgcubic::cli
