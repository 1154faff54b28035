// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bilatsim/experiments.hpp"
#include "bilatsim/io.hpp"
#include "bilatsim/metrics.hpp"
#include "bilatsim/rng.hpp"
#include "bilatsim/trading.hpp"
#include "bilatsim/world.hpp"
#include "trade_oracle.hpp"

using namespace bilatsim;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({id, name, pass, detail});
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

ScenarioResult run_with_replications(const ScenarioSpec& spec, int replications) {
    ScenarioSpec copy = spec;
    copy.config.replications = replications;
    return run_scenario(copy);
}

const ScenarioSpec& spec_of(const std::vector<ScenarioSpec>& suite, const std::string& name) {
    const ScenarioSpec* spec = find_scenario(suite, name);
    if (!spec) {
        throw std::runtime_error("missing scenario " + name);
    }
    return *spec;
}

// ---- criterion 1: determinism ---------------------------------------------

void criterion_determinism() {
    SimConfig cfg;
    cfg.grid_width = 15;
    cfg.grid_height = 15;
    cfg.n_agents = 4;
    cfg.vision_range = {2, 8};
    cfg.metabolism_range_bonds = {1, 3};
    cfg.metabolism_range_cash = {1, 3};
    cfg.endowment_range_bonds = {15, 30};
    cfg.endowment_range_cash = {15, 30};
    cfg.max_steps = 60;
    cfg.replications = 3;
    cfg.seed = 90210;

    const fs::path base = fs::temp_directory_path() / "bilatsim_acceptance_determinism";
    fs::remove_all(base);
    for (const char* leaf : {"a", "b"}) {
        std::vector<std::vector<StepEvent>> traces;
        auto batch = run_batch(cfg, cfg.replications, false, &traces);
        const auto result = aggregate_result("determinism", cfg.n_agents, cfg.max_steps,
                                             std::move(batch.summaries), std::nullopt);
        emit_results(result, base / leaf, &traces);
    }
    const std::string trace_a = slurp(base / "a" / "trace.jsonl");
    const std::string trace_b = slurp(base / "b" / "trace.jsonl");
    const bool pass = !trace_a.empty() && trace_a == trace_b &&
                      slurp(base / "a" / "summary.csv") == slurp(base / "b" / "summary.csv");
    record(1, "determinism: byte-identical trace.jsonl on rerun", pass,
           "trace bytes " + std::to_string(trace_a.size()));
}

// ---- criterion 2: conservation ---------------------------------------------

void criterion_conservation() {
    Rng gen(1111);
    int violations = 0;
    for (int trial = 0; trial < 50; ++trial) {
        SimConfig cfg;
        cfg.grid_width = 10;
        cfg.grid_height = 10;
        cfg.n_agents = 3;
        cfg.vision_range = {1, 1 + static_cast<int>(gen.below(9))};
        cfg.metabolism_range_bonds = {1, 1 + static_cast<int>(gen.below(3))};
        cfg.metabolism_range_cash = {1, 1 + static_cast<int>(gen.below(3))};
        cfg.endowment_range_bonds = {5, 10 + static_cast<int>(gen.below(30))};
        cfg.endowment_range_cash = {5, 10 + static_cast<int>(gen.below(30))};
        cfg.cell_capacity_range_bonds = {0, 1 + static_cast<int>(gen.below(5))};
        cfg.cell_capacity_range_cash = {0, 1 + static_cast<int>(gen.below(5))};
        cfg.regrowth_rate = static_cast<int>(gen.below(3));
        cfg.max_steps = 50;
        cfg.seed = splitmix64(7000 + static_cast<std::uint64_t>(trial));

        World world(cfg, 0);
        auto agent_totals = [&world]() {
            double bonds = 0.0;
            double cash = 0.0;
            for (const auto& a : world.agents()) {
                bonds += a.accum_bonds;
                cash += a.accum_cash;
            }
            return std::make_pair(bonds, cash);
        };

        for (int step = 0; step < 50; ++step) {
            const auto [agent_bonds_before, agent_cash_before] = agent_totals();
            const double bonds_before = agent_bonds_before + world.grid().total_level_bonds();
            const double cash_before = agent_cash_before + world.grid().total_level_cash();
            const StepReport report = world.step();
            const auto [agent_bonds_after, agent_cash_after] = agent_totals();
            const double bonds_after = agent_bonds_after + world.grid().total_level_bonds();
            const double cash_after = agent_cash_after + world.grid().total_level_cash();

            const double expected_bonds_delta = static_cast<double>(
                report.regrowth_added_bonds - report.metabolism_consumed_bonds);
            const double expected_cash_delta = static_cast<double>(
                report.regrowth_added_cash - report.metabolism_consumed_cash);
            if (bonds_after - bonds_before != expected_bonds_delta ||
                cash_after - cash_before != expected_cash_delta) {
                ++violations;
            }
        }
    }
    record(2, "conservation: per-step accounting identity exact over 50 random runs",
           violations == 0, std::to_string(violations) + " violations");
}

// ---- criterion 3: trade-session soundness ----------------------------------

void criterion_session_soundness() {
    Rng rng(424243);
    int executed_sessions = 0;
    int failures = 0;
    std::string first_failure;

    for (int trial = 0; trial < 1000; ++trial) {
        AgentState a;
        a.id = 0;
        a.metabolism_bonds = rng.uniform_int({1, 5});
        a.metabolism_cash = rng.uniform_int({1, 5});
        a.accum_bonds = static_cast<double>(rng.uniform_int({1, 80})) + rng.below(1024) / 1024.0;
        a.accum_cash = static_cast<double>(rng.uniform_int({1, 80})) + rng.below(1024) / 1024.0;
        AgentState b = a;
        b.id = 1;
        b.metabolism_bonds = rng.uniform_int({1, 5});
        b.metabolism_cash = rng.uniform_int({1, 5});
        b.accum_bonds = static_cast<double>(rng.uniform_int({1, 80})) + rng.below(1024) / 1024.0;
        b.accum_cash = static_cast<double>(rng.uniform_int({1, 80})) + rng.below(1024) / 1024.0;

        const AgentState a0 = a;
        const AgentState b0 = b;
        const auto records = execute_trade_session(a, b, trial);
        if (!records.empty()) {
            ++executed_sessions;
        }

        auto fail = [&](const std::string& why) {
            ++failures;
            if (first_failure.empty()) {
                first_failure = "trial " + std::to_string(trial) + ": " + why;
            }
        };

        if (a.accum_bonds + b.accum_bonds != a0.accum_bonds + b0.accum_bonds ||
            a.accum_cash + b.accum_cash != a0.accum_cash + b0.accum_cash) {
            fail("pair conservation");
            continue;
        }

        AgentState ra = a0;
        AgentState rb = b0;
        bool replay_ok = true;
        for (const auto& rec : records) {
            AgentState& buyer = rec.buyer_id == ra.id ? ra : rb;
            AgentState& seller = rec.seller_id == ra.id ? ra : rb;
            const double wb0 = compute_welfare(buyer);
            const double ws0 = compute_welfare(seller);
            const double mrs_hi = std::max(compute_mrs(ra), compute_mrs(rb));
            const double mrs_lo = std::min(compute_mrs(ra), compute_mrs(rb));
            if (!(rec.price > mrs_lo && rec.price < mrs_hi)) {
                replay_ok = false;
                break;
            }
            buyer.accum_bonds += rec.bonds_moved;
            buyer.accum_cash -= rec.cash_moved;
            seller.accum_bonds -= rec.bonds_moved;
            seller.accum_cash += rec.cash_moved;
            if (!(compute_welfare(buyer) > wb0 && compute_welfare(seller) > ws0)) {
                replay_ok = false;
                break;
            }
            if (compute_mrs(buyer) < compute_mrs(seller)) {
                replay_ok = false;
                break;
            }
        }
        if (!replay_ok) {
            fail("welfare, crossing, or price bound violated during replay");
            continue;
        }
        if (trade_oracle::further_improving_trade_exists(a, b)) {
            fail("oracle found a further improving trade after termination");
        }
    }

    record(3, "trade-session soundness over 1000 randomized pairs", failures == 0,
           std::to_string(executed_sessions) + " sessions traded; " + std::to_string(failures) +
               " failures" + (first_failure.empty() ? "" : " (" + first_failure + ")"));
}

// ---- criteria 4..11: scenario-level ----------------------------------------

void scenario_criteria() {
    const auto suite = builtin_scenarios();

    const auto homog = run_scenario(spec_of(suite, "H1-HOMOG"));
    const auto h1a = run_scenario(spec_of(suite, "H1-A"));
    const auto h1b = run_scenario(spec_of(suite, "H1-B"));
    const auto h1c = run_scenario(spec_of(suite, "H1-C"));
    const auto h1d = run_scenario(spec_of(suite, "H1-D"));
    const auto h1e = run_scenario(spec_of(suite, "H1-E"));
    const auto h2a = run_scenario(spec_of(suite, "H2-A"));
    const auto h2b = run_scenario(spec_of(suite, "H2-B"));
    const auto h4 = run_scenario(spec_of(suite, "H4-GOLDILOCKS"));

    // 4: homogeneity fragility
    {
        const bool pass = homog.median_collapse_step <= 25.0 && h1c.median_collapse_step > 100.0;
        record(4, "homogeneity fragility: H1-HOMOG median collapse <= 25, H1-C > 100", pass,
               "H1-HOMOG median " + fmt(homog.median_collapse_step) + ", H1-C median " +
                   fmt(h1c.median_collapse_step));
    }

    // 5: diversity/vision monotonicity over >= 50 paired seeds
    {
        constexpr int kPairs = 50;
        const auto a50 = run_with_replications(spec_of(suite, "H1-A"), kPairs);
        const auto b50 = run_with_replications(spec_of(suite, "H1-B"), kPairs);
        const auto c50 = run_with_replications(spec_of(suite, "H1-C"), kPairs);
        const auto d50 = run_with_replications(spec_of(suite, "H1-D"), kPairs);
        const auto h2a50 = run_with_replications(spec_of(suite, "H2-A"), kPairs);

        auto win_share = [](const ScenarioResult& low, const ScenarioResult& high) {
            int wins = 0;
            const auto n = std::min(low.replication_summaries.size(),
                                    high.replication_summaries.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (high.replication_summaries[i].trade_fraction >
                    low.replication_summaries[i].trade_fraction) {
                    ++wins;
                }
            }
            return static_cast<double>(wins) / static_cast<double>(n);
        };

        const double wins_b = win_share(a50, b50);
        const double wins_c = win_share(a50, c50);
        const double wins_d = win_share(a50, d50);
        const double wins_h2a = win_share(a50, h2a50);
        const bool means_ok =
            a50.mean_trade_fraction < b50.mean_trade_fraction &&
            a50.mean_trade_fraction < c50.mean_trade_fraction &&
            a50.mean_trade_fraction < d50.mean_trade_fraction &&
            a50.mean_trade_fraction < h2a50.mean_trade_fraction;
        const bool pass = means_ok && wins_b >= 0.8 && wins_c >= 0.8 && wins_d >= 0.8 &&
                          wins_h2a >= 0.8;
        record(5, "diversity/vision monotonicity with >= 80% pairwise wins over 50 paired seeds",
               pass,
               "win shares vs H1-A: B " + fmt(wins_b) + ", C " + fmt(wins_c) + ", D " + fmt(wins_d) +
                   ", H2-A " + fmt(wins_h2a));
    }

    // 6: regrowth effect
    {
        const bool pass = h2b.mean_trade_fraction >= 2.0 * h2a.mean_trade_fraction;
        record(6, "regrowth effect: H2-B mean trade fraction >= 2x H2-A", pass,
               "H2-B " + fmt(h2b.mean_trade_fraction) + " vs H2-A " + fmt(h2a.mean_trade_fraction));
    }

    // 7: H1-A band
    record(7, "H1-A mean trade fraction < 0.02", h1a.mean_trade_fraction < 0.02,
           "mean " + fmt(h1a.mean_trade_fraction));

    // 8: H1-B..E bands
    {
        const bool pass_b = std::abs(h1b.mean_trade_fraction - 0.034) <= 0.02;
        const bool pass_c = std::abs(h1c.mean_trade_fraction - 0.092) <= 0.03;
        const bool pass_d = std::abs(h1d.mean_trade_fraction - 0.064) <= 0.02;
        const bool pass_e = std::abs(h1e.mean_trade_fraction - 0.382) <= 0.05;
        record(8, "H1 bands: B 0.034+/-0.02, C 0.092+/-0.03, D 0.064+/-0.02, E 0.382+/-0.05",
               pass_b && pass_c && pass_d && pass_e,
               "B " + fmt(h1b.mean_trade_fraction) + ", C " + fmt(h1c.mean_trade_fraction) + ", D " +
                   fmt(h1d.mean_trade_fraction) + ", E " + fmt(h1e.mean_trade_fraction));
    }

    // 9: H2 bands
    {
        const bool pass_a = std::abs(h2a.mean_trade_fraction - 0.0997) <= 0.03;
        const bool pass_b = std::abs(h2b.mean_trade_fraction - 0.387) <= 0.06;
        record(9, "H2 bands: A 0.0997+/-0.03, B 0.387+/-0.06", pass_a && pass_b,
               "A " + fmt(h2a.mean_trade_fraction) + ", B " + fmt(h2b.mean_trade_fraction));
    }

    // 10: H4 goldilocks
    {
        const double alignment = std::abs(h4.mean_trade_fraction - kInterbankTradeShare);
        const bool pass = std::abs(h4.mean_trade_fraction - 0.291) <= 0.05 &&
                          std::abs(h4.median_trade_fraction - 0.237) <= 0.05 &&
                          h4.min_trade_fraction <= 0.10 && h4.max_trade_fraction >= 0.80 &&
                          alignment <= 0.06;
        record(10, "H4: mean 0.291+/-0.05, median 0.237+/-0.05, min <= 0.10, max >= 0.80, "
                   "|mean-0.28| <= 0.06",
               pass,
               "mean " + fmt(h4.mean_trade_fraction) + ", median " + fmt(h4.median_trade_fraction) +
                   ", min " + fmt(h4.min_trade_fraction) + ", max " + fmt(h4.max_trade_fraction) +
                   ", alignment " + fmt(alignment));
    }

    // 11: sensitivity sanity
    {
        const std::vector<std::string> params = {"vision_range", "metabolism_range_bonds",
                                                 "metabolism_range_cash"};
        auto mean_similarity = [&params](SimConfig cfg) {
            cfg.replications = 50;
            const auto reports = sensitivity_sweep(cfg, 0.10, params);
            double sum = 0.0;
            int n = 0;
            for (const auto& r : reports) {
                if (!r.skipped) {
                    sum += r.outcome_similarity;
                    ++n;
                }
            }
            return n > 0 ? sum / n : 0.0;
        };
        const double h1a_similarity = mean_similarity(spec_of(suite, "H1-A").config);
        const double homog_similarity = mean_similarity(spec_of(suite, "H1-HOMOG").config);
        record(11, "sensitivity sanity: H1-A outcome similarity below H1-HOMOG's",
               h1a_similarity < homog_similarity,
               "H1-A " + fmt(h1a_similarity) + " vs H1-HOMOG " + fmt(homog_similarity));
    }
}

}  // namespace

int main() {
    criterion_determinism();
    criterion_conservation();
    criterion_session_soundness();
    scenario_criteria();

    std::sort(g_results.begin(), g_results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    int failures = 0;
    for (const auto& c : g_results) {
        std::printf("[%s] criterion %2d: %s (%s)\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    c.detail.c_str());
        if (!c.pass) {
            ++failures;
        }
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(g_results.size()) - failures,
                g_results.size());
    return failures;
}
