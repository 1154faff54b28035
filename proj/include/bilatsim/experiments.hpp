#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilatsim/config.hpp"
#include "bilatsim/metrics.hpp"

namespace bilatsim {

/// Published reference values for a scenario, with the tolerances the
/// artifact is evaluated at.
struct PaperTarget {
    std::optional<double> mean_trade_fraction;
    double mean_tolerance = 0.0;
    std::optional<double> mean_trade_fraction_max;  // one-sided upper bound
    std::optional<double> median_trade_fraction;
    double median_tolerance = 0.0;
    std::optional<double> min_trade_fraction_max;
    std::optional<double> max_trade_fraction_min;
    std::optional<double> interbank_alignment_max;
    std::optional<int> median_collapse_step_max;
};

struct ScenarioSpec {
    std::string name;
    std::string description;
    SimConfig config;
    std::optional<PaperTarget> paper_target;
};

struct TargetCheck {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    std::string bound;
};

/// Cross-replication aggregates. All statistics are recomputable from
/// replication_summaries; runs that never collapse enter the median collapse
/// step as max_steps + 1.
struct ScenarioResult {
    std::string spec_name;
    int n_agents = 0;
    int max_steps = 0;
    int replications = 0;
    int failed_replications = 0;
    std::vector<RunSummary> replication_summaries;
    double mean_trade_fraction = 0.0;
    double median_trade_fraction = 0.0;
    double min_trade_fraction = 0.0;
    double max_trade_fraction = 0.0;
    double pooled_trade_fraction = 0.0;  // sum of trading actions / sum of actions
    double mean_final_population = 0.0;
    double median_collapse_step = 0.0;
    double collapse_share = 0.0;
    std::vector<TargetCheck> target_checks;
    std::optional<bool> target_pass;
};

/// The built-in hypothesis scenario suite (9 scenarios).
std::vector<ScenarioSpec> builtin_scenarios();

const ScenarioSpec* find_scenario(const std::vector<ScenarioSpec>& suite, const std::string& name);

/// Aggregates replication summaries and evaluates the paper target if given.
/// Throws std::invalid_argument on an empty summary set.
ScenarioResult aggregate_result(const std::string& name, int n_agents, int max_steps,
                                std::vector<RunSummary> summaries,
                                const std::optional<PaperTarget>& target);

/// Runs spec.config.replications independent replications and aggregates.
ScenarioResult run_scenario(const ScenarioSpec& spec);

struct HypothesisCheck {
    std::string name;
    std::string detail;
    bool pass = false;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass = false;
    bool high_variance_flag = false;  // set when the H4 trade-fraction spread is >= 0.5
};

/// Cross-scenario orderings and alignment checks over completed suite
/// results. Throws std::runtime_error naming the first missing scenario.
HypothesisReport hypothesis_report(const std::vector<ScenarioResult>& results);

}  // namespace bilatsim
