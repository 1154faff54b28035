#include "bilatsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bilatsim/experiments.hpp"
#include "bilatsim/io.hpp"
#include "bilatsim/metrics.hpp"
#include "bilatsim/world.hpp"

namespace bilatsim {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitTargetFailed = 3;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

void print_scenario_line(const ScenarioResult& r) {
    std::cout << r.spec_name << ": mean_tf=" << r.mean_trade_fraction
              << " median_tf=" << r.median_trade_fraction
              << " collapse_share=" << r.collapse_share;
    if (r.target_pass) {
        std::cout << " target=" << (*r.target_pass ? "PASS" : "FAIL");
    }
    std::cout << '\n';
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<int> replications, const std::string& out_dir, bool trace) {
    SimConfig cfg = parse_config(read_file(config_path));
    if (seed) {
        cfg.seed = *seed;
    }
    if (replications) {
        cfg.replications = *replications;
    }
    std::vector<std::vector<StepEvent>> traces;
    auto batch = run_batch(cfg, cfg.replications, trace, trace ? &traces : nullptr);
    ScenarioResult result = aggregate_result("run", cfg.n_agents, cfg.max_steps,
                                             std::move(batch.summaries), std::nullopt);
    result.failed_replications = batch.failed_replications;
    for (const auto& err : batch.errors) {
        std::cerr << err << '\n';
    }
    emit_results(result, out_dir, trace ? &traces : nullptr);
    print_scenario_line(result);
    return batch.failed_replications == 0 ? kExitOk : kExitRuntime;
}

int cmd_suite(const std::string& only, const std::string& out_dir) {
    auto suite = builtin_scenarios();
    std::vector<const ScenarioSpec*> selected;
    if (only.empty()) {
        for (const auto& spec : suite) {
            selected.push_back(&spec);
        }
    } else {
        for (const auto& name : split_csv_list(only)) {
            const ScenarioSpec* spec = find_scenario(suite, name);
            if (!spec) {
                std::cerr << "unknown scenario: " << name << "\nvalid names:";
                for (const auto& s : suite) {
                    std::cerr << ' ' << s.name;
                }
                std::cerr << '\n';
                return kExitUsage;
            }
            selected.push_back(spec);
        }
    }

    bool target_failed = false;
    for (const ScenarioSpec* spec : selected) {
        ScenarioResult result = run_scenario(*spec);
        emit_results(result, std::filesystem::path(out_dir) / spec->name);
        print_scenario_line(result);
        if (result.target_pass && !*result.target_pass) {
            target_failed = true;
        }
    }
    return target_failed ? kExitTargetFailed : kExitOk;
}

int cmd_sensitivity(const std::string& config_path, double perturb_pct, const std::string& params,
                    const std::string& out_dir) {
    SimConfig cfg = parse_config(read_file(config_path));
    const auto parameters = split_csv_list(params);
    if (parameters.empty()) {
        std::cerr << "no parameters given\n";
        return kExitUsage;
    }
    for (const auto& p : parameters) {
        SimConfig probe = cfg;
        if (perturb_parameter(probe, p, 0.0) == PerturbStatus::unknown_parameter) {
            std::cerr << "unknown or non-perturbable parameter: " << p << "\nvalid names:";
            for (const auto& name : perturbable_parameters()) {
                std::cerr << ' ' << name;
            }
            std::cerr << '\n';
            return kExitUsage;
        }
    }

    auto reports = sensitivity_sweep(cfg, perturb_pct / 100.0, parameters);

    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json entry;
        entry["parameter"] = r.parameter;
        entry["direction"] = r.direction > 0 ? "+" : "-";
        entry["perturbation"] = r.perturbation;
        entry["skipped"] = r.skipped;
        if (r.skipped) {
            entry["warning"] = r.warning;
        } else {
            entry["outcome_similarity"] = r.outcome_similarity;
            entry["interbank_alignment"] = r.interbank_alignment;
            entry["population_stability"] = r.population_stability;
            entry["verdicts"] = {{"similar_outcomes", r.similar_outcomes},
                                 {"aligned_with_interbank", r.aligned_with_interbank},
                                 {"population_stable", r.population_stable}};
        }
        doc.push_back(std::move(entry));

        std::cout << r.parameter << ' ' << (r.direction > 0 ? '+' : '-');
        if (r.skipped) {
            std::cout << " skipped: " << r.warning << '\n';
        } else {
            std::cout << " similarity=" << r.outcome_similarity
                      << " alignment=" << r.interbank_alignment
                      << " stability=" << r.population_stability << '\n';
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());
    }
    std::ofstream f(std::filesystem::path(out_dir) / "sensitivity.json", std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write sensitivity.json in " + out_dir);
    }
    f << doc.dump(2) << '\n';
    return kExitOk;
}

int cmd_report(const std::string& in_dir) {
    std::vector<ScenarioResult> results;
    for (const auto& spec : builtin_scenarios()) {
        const auto path = std::filesystem::path(in_dir) / spec.name / "aggregate.json";
        if (!std::filesystem::exists(path)) {
            throw std::runtime_error("missing scenario aggregate: " + spec.name + " (" +
                                     path.string() + ")");
        }
        results.push_back(parse_aggregate(read_file(path)));
    }

    const HypothesisReport report = hypothesis_report(results);
    nlohmann::ordered_json doc;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(32) << c.name
                  << ' ' << c.detail << '\n';
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    std::cout << "high_variance_flag: " << (report.high_variance_flag ? "set" : "not set") << '\n';
    std::cout << "all checks: " << (report.all_pass ? "PASS" : "FAIL") << '\n';

    doc["checks"] = std::move(checks);
    doc["high_variance_flag"] = report.high_variance_flag;
    doc["all_pass"] = report.all_pass;
    std::ofstream f(std::filesystem::path(in_dir) / "report.json", std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write report.json in " + in_dir);
    }
    f << doc.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"deterministic bilateral bond market-maker network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string in_dir;
    std::string only;
    std::string params;
    double perturb_pct = 10.0;
    std::uint64_t seed_value = 0;
    int replications_value = 0;
    bool trace = false;

    auto* run_cmd = app.add_subcommand("run", "run a config for its configured replications");
    run_cmd->add_option("--config", config_path, "JSON config file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_value, "override the config seed");
    auto* reps_opt =
        run_cmd->add_option("--replications", replications_value, "override the replication count");
    run_cmd->add_option("--out", out_dir, "output directory (default: out)");
    run_cmd->add_flag("--trace", trace, "write a per-activation trace.jsonl");

    auto* suite_cmd = app.add_subcommand("suite", "run the built-in hypothesis scenario suite");
    suite_cmd->add_option("--only", only, "comma-separated scenario names");
    suite_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* sens_cmd = app.add_subcommand("sensitivity", "perturbation sweep around a config");
    sens_cmd->add_option("--config", config_path, "JSON config file")->required();
    sens_cmd->add_option("--perturb", perturb_pct, "perturbation in percent")->required();
    sens_cmd->add_option("--params", params, "comma-separated parameter names")->required();
    sens_cmd->add_option("--out", out_dir, "output directory (default: out)");

    auto* report_cmd = app.add_subcommand("report", "hypothesis report over emitted aggregates");
    report_cmd->add_option("--in", in_dir, "directory holding per-scenario outputs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(run_cmd)) {
            std::optional<std::uint64_t> seed;
            if (seed_opt->count() > 0) {
                seed = seed_value;
            }
            std::optional<int> replications;
            if (reps_opt->count() > 0) {
                replications = replications_value;
            }
            return cmd_run(config_path, seed, replications, out_dir, trace);
        }
        if (app.got_subcommand(suite_cmd)) {
            return cmd_suite(only, out_dir);
        }
        if (app.got_subcommand(sens_cmd)) {
            return cmd_sensitivity(config_path, perturb_pct, params, out_dir);
        }
        if (app.got_subcommand(report_cmd)) {
            return cmd_report(in_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& issue : e.issues) {
            std::cerr << "  " << issue << '\n';
        }
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace bilatsim
