#pragma once

#include "balint/harness.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace balint::cli {

/// Parses a grid document. Unknown keys, wrong types and invalid values throw
/// Error(Config) naming the offending key path (e.g. "z_axis[2].sigma").
GridConfig parse_config(const nlohmann::json& doc);

/// Canonical document; parse_config(to_json(c)) == c.
nlohmann::json to_json(const GridConfig& config);

GridConfig load_config(const std::filesystem::path& path);

/// Command-line overrides. Each set field replaces the file value.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::optional<unsigned> workers;
    std::optional<EngineChoice> engine;
    std::optional<std::size_t> n_mc;
    std::optional<double> tol;
};

void apply_overrides(GridConfig& config, const Overrides& overrides);

} // namespace balint::cli
