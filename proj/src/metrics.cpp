#include "bilatsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bilatsim/experiments.hpp"
#include "bilatsim/world.hpp"

namespace bilatsim {

double trade_fraction(const RunSummary& s) {
    if (s.total_actions <= 0) {
        return 0.0;
    }
    return static_cast<double>(s.trading_actions) / static_cast<double>(s.total_actions);
}

std::optional<int> detect_collapse(const std::vector<int>& population_trajectory) {
    for (std::size_t i = 0; i < population_trajectory.size(); ++i) {
        if (population_trajectory[i] < 2) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

StabilityReport stability_score(const ScenarioResult& baseline, const ScenarioResult& perturbed,
                                double interbank_share) {
    if (baseline.replication_summaries.empty() || perturbed.replication_summaries.empty()) {
        throw std::invalid_argument("stability_score requires non-empty replication sets");
    }
    StabilityReport report;
    report.outcome_similarity = std::abs(baseline.mean_trade_fraction - perturbed.mean_trade_fraction);

    const double n_agents = baseline.n_agents > 0 ? baseline.n_agents : 1;
    const auto& base_runs = baseline.replication_summaries;
    const auto& pert_runs = perturbed.replication_summaries;
    if (base_runs.size() == pert_runs.size()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < base_runs.size(); ++i) {
            sum += std::abs(base_runs[i].final_population - pert_runs[i].final_population);
        }
        report.outcome_similarity += sum / static_cast<double>(base_runs.size()) / n_agents;
    } else {
        report.outcome_similarity +=
            std::abs(baseline.mean_final_population - perturbed.mean_final_population) / n_agents;
    }

    report.interbank_alignment = std::abs(baseline.mean_trade_fraction - interbank_share);
    report.population_stability = 1.0 - baseline.collapse_share;
    report.similar_outcomes = report.outcome_similarity <= kSimilarOutcomesMax;
    report.aligned_with_interbank = report.interbank_alignment <= kAlignmentMax;
    report.population_stable = report.population_stability >= kPopulationStableMin;
    return report;
}

namespace {

int scale_round(int value, double factor) {
    return static_cast<int>(std::lround(value * factor));
}

// Scales both endpoints, rounds, and clamps. Returns false when the interval
// collapses (lo > hi) after clamping.
bool perturb_range(IntRange& r, double factor, int min_lo, int max_hi) {
    r.lo = std::max(min_lo, scale_round(r.lo, factor));
    r.hi = scale_round(r.hi, factor);
    if (max_hi > 0) {
        r.lo = std::min(r.lo, max_hi);
        r.hi = std::min(r.hi, max_hi);
    }
    return r.lo <= r.hi;
}

}  // namespace

const std::vector<std::string>& perturbable_parameters() {
    static const std::vector<std::string> names = {
        "vision_range",
        "metabolism_range_bonds",
        "metabolism_range_cash",
        "endowment_range_bonds",
        "endowment_range_cash",
        "cell_capacity_range_bonds",
        "cell_capacity_range_cash",
        "regrowth_rate",
        "n_agents",
    };
    return names;
}

PerturbStatus perturb_parameter(SimConfig& config, const std::string& parameter, double relative_step) {
    const double factor = 1.0 + relative_step;
    bool ok = true;
    if (parameter == "vision_range") {
        ok = perturb_range(config.vision_range, factor, 1,
                           std::max(config.grid_width, config.grid_height));
    } else if (parameter == "metabolism_range_bonds") {
        ok = perturb_range(config.metabolism_range_bonds, factor, 1, 0);
    } else if (parameter == "metabolism_range_cash") {
        ok = perturb_range(config.metabolism_range_cash, factor, 1, 0);
    } else if (parameter == "endowment_range_bonds") {
        ok = perturb_range(config.endowment_range_bonds, factor, 1, 0);
    } else if (parameter == "endowment_range_cash") {
        ok = perturb_range(config.endowment_range_cash, factor, 1, 0);
    } else if (parameter == "cell_capacity_range_bonds") {
        ok = perturb_range(config.cell_capacity_range_bonds, factor, 0, 0);
    } else if (parameter == "cell_capacity_range_cash") {
        ok = perturb_range(config.cell_capacity_range_cash, factor, 0, 0);
    } else if (parameter == "regrowth_rate") {
        config.regrowth_rate = std::max(0, scale_round(config.regrowth_rate, factor));
    } else if (parameter == "n_agents") {
        const auto cells = static_cast<long long>(config.grid_width) * config.grid_height;
        config.n_agents = static_cast<int>(
            std::clamp<long long>(scale_round(config.n_agents, factor), 1, cells));
    } else {
        return PerturbStatus::unknown_parameter;
    }
    return ok ? PerturbStatus::ok : PerturbStatus::collapsed_interval;
}

std::vector<StabilityReport> sensitivity_sweep(const SimConfig& config, double perturbation,
                                               const std::vector<std::string>& parameters) {
    if (perturbation < 0.0) {
        throw std::invalid_argument("perturbation must be >= 0");
    }
    for (const auto& p : parameters) {
        SimConfig probe = config;
        if (perturb_parameter(probe, p, 0.0) == PerturbStatus::unknown_parameter) {
            throw std::invalid_argument("unknown or non-perturbable parameter: " + p);
        }
    }

    auto batch = run_batch(config, config.replications);
    const ScenarioResult baseline =
        aggregate_result("baseline", config.n_agents, config.max_steps,
                         std::move(batch.summaries), std::nullopt);

    std::vector<StabilityReport> reports;
    for (const auto& parameter : parameters) {
        for (const int direction : {+1, -1}) {
            SimConfig perturbed_config = config;
            const auto status =
                perturb_parameter(perturbed_config, parameter, direction * perturbation);
            StabilityReport entry;
            if (status == PerturbStatus::collapsed_interval) {
                entry.skipped = true;
                entry.warning = parameter + ": interval collapsed after perturbation";
            } else {
                auto perturbed_batch = run_batch(perturbed_config, perturbed_config.replications);
                const ScenarioResult perturbed = aggregate_result(
                    "perturbed", perturbed_config.n_agents, perturbed_config.max_steps,
                    std::move(perturbed_batch.summaries), std::nullopt);
                entry = stability_score(baseline, perturbed);
            }
            entry.parameter = parameter;
            entry.direction = direction;
            entry.perturbation = perturbation;
            reports.push_back(std::move(entry));
        }
    }
    return reports;
}

}  // namespace bilatsim
