#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bilatsim/config.hpp"
#include "bilatsim/trading.hpp"

namespace bilatsim {

/// Per-run accounting. population_trajectory[0] is the initial population;
/// entry i is the population after i completed steps.
struct RunSummary {
    int replication_index = 0;
    std::uint64_t run_seed = 0;
    long long total_actions = 0;
    long long trading_actions = 0;
    double trade_fraction = 0.0;
    std::optional<int> collapse_step;
    int steps_executed = 0;
    int final_population = 0;
    std::vector<int> population_trajectory;
    std::vector<TradeRecord> trade_log;  // empty when trade logging is off
};

/// Share of agent activations in which at least one trade executed.
double trade_fraction(const RunSummary& s);

/// First index at which the population falls below two, if any.
std::optional<int> detect_collapse(const std::vector<int>& population_trajectory);

struct ScenarioResult;  // experiments.hpp

/// Interbank share of secondary-market turnover used as the alignment target.
inline constexpr double kInterbankTradeShare = 0.28;

// Verdict thresholds for the runtime stability criteria.
inline constexpr double kSimilarOutcomesMax = 0.15;
inline constexpr double kAlignmentMax = 0.06;
inline constexpr double kPopulationStableMin = 0.5;

struct StabilityReport {
    std::string parameter;  // empty for a direct baseline-vs-perturbed score
    int direction = 0;      // +1 or -1 for sweep entries
    double perturbation = 0.0;
    bool skipped = false;
    std::string warning;
    double outcome_similarity = 0.0;
    double interbank_alignment = 0.0;
    double population_stability = 0.0;
    bool similar_outcomes = false;
    bool aligned_with_interbank = false;
    bool population_stable = false;
};

/// Distance between a baseline scenario and a perturbed rerun:
/// |mean trade-fraction difference| plus the mean absolute final-population
/// difference normalized by the baseline agent count. Alignment and
/// population stability are computed on the baseline. Throws
/// std::invalid_argument when either replication set is empty.
StabilityReport stability_score(const ScenarioResult& baseline, const ScenarioResult& perturbed,
                                double interbank_share = kInterbankTradeShare);

enum class PerturbStatus { ok, unknown_parameter, collapsed_interval };

/// Applies a signed relative step to one named numeric parameter, rounding to
/// integers and clamping to the config invariants.
PerturbStatus perturb_parameter(SimConfig& config, const std::string& parameter, double relative_step);

/// Names accepted by perturb_parameter and sensitivity_sweep.
const std::vector<std::string>& perturbable_parameters();

/// For each named parameter, reruns the scenario at +/-perturbation and
/// scores it against the baseline. Parameters whose interval collapses after
/// rounding are reported as skipped entries.
std::vector<StabilityReport> sensitivity_sweep(const SimConfig& config, double perturbation,
                                               const std::vector<std::string>& parameters);

}  // namespace bilatsim
