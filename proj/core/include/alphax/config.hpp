#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alphax/dates.hpp"
#include "alphax/engine.hpp"

namespace alphax {

/// Parses a flat key-value config file: one `key = value` per line, `#`
/// comments. Throws ConfigError on malformed lines or duplicate keys.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// Effective run configuration. Built from the config file, then overridden
/// by command-line flags (overrides win). Relative data paths resolve
/// against the config file's directory.
struct RunConfig {
    std::filesystem::path bars;
    std::filesystem::path statements;
    std::filesystem::path risk_free;
    std::filesystem::path index_weights;
    std::filesystem::path universe;

    std::vector<std::string> strategies;
    std::optional<Date> from;
    std::optional<Date> to;
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;

    EngineConfig engine;
    StrategyParams params;

    static RunConfig from_file(const std::filesystem::path& path);

    /// Applies one dotted key (same names as the config file). Throws
    /// ConfigError for unknown keys or unparseable values.
    void set(const std::string& key, const std::string& value,
             const std::filesystem::path& base_dir = {});

    /// The full effective key set, serialized back to config-file syntax.
    std::string snapshot() const;
};

}  // namespace alphax
