#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilatsim/config.hpp"
#include "bilatsim/experiments.hpp"
#include "bilatsim/world.hpp"

namespace bilatsim {

struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> issues_);
    std::vector<std::string> issues;
};

/// Parses a JSON config document. Unknown keys are rejected; every violated
/// invariant is reported with its field name. Throws ConfigError.
SimConfig parse_config(const std::string& json_text);

/// Serializes a config so that parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& config);

/// aggregate.json payload for a scenario result.
std::string aggregate_json(const ScenarioResult& result);

/// Reads the statistics back from an aggregate.json payload
/// (replication_summaries stays empty). Throws std::runtime_error on
/// malformed input.
ScenarioResult parse_aggregate(const std::string& json_text);

/// Writes summary.csv (one row per replication) and aggregate.json into
/// out_dir, plus trace.jsonl when traces are given. Output is byte-stable
/// for a fixed (config, seed).
void emit_results(const ScenarioResult& result, const std::filesystem::path& out_dir,
                  const std::vector<std::vector<StepEvent>>* traces = nullptr);

}  // namespace bilatsim
