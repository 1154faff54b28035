#include "bilatsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace bilatsim {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "grid_width",
        "grid_height",
        "neighborhood",
        "n_agents",
        "vision_range",
        "metabolism_range_bonds",
        "metabolism_range_cash",
        "endowment_range_bonds",
        "endowment_range_cash",
        "cell_capacity_range_bonds",
        "cell_capacity_range_cash",
        "regrowth_rate",
        "max_steps",
        "seed",
        "replications",
    };
    return keys;
}

void read_int(const ordered_json& doc, const char* key, int& out, std::vector<std::string>& issues) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) {
        issues.push_back(std::string(key) + ": expected an integer");
        return;
    }
    out = v.get<int>();
}

void read_range(const ordered_json& doc, const char* key, IntRange& out,
                std::vector<std::string>& issues) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        issues.push_back(std::string(key) + ": expected [lo, hi] with integer bounds");
        return;
    }
    out.lo = v[0].get<int>();
    out.hi = v[1].get<int>();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json trade_to_json(const TradeRecord& t) {
    ordered_json j;
    j["buyer_id"] = t.buyer_id;
    j["seller_id"] = t.seller_id;
    j["bonds"] = t.bonds_moved;
    j["cash"] = t.cash_moved;
    j["price"] = t.price;
    return j;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues_)
    : std::runtime_error("config error: " + join(issues_, "; ")), issues(std::move(issues_)) {}

SimConfig parse_config(const std::string& json_text) {
    ordered_json doc = ordered_json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError({"not valid JSON"});
    }
    if (!doc.is_object()) {
        throw ConfigError({"top-level value must be an object"});
    }

    std::vector<std::string> issues;
    const auto& keys = known_keys();
    for (const auto& item : doc.items()) {
        if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
            issues.push_back("unknown key: " + item.key());
        }
    }

    SimConfig cfg;
    read_int(doc, "grid_width", cfg.grid_width, issues);
    read_int(doc, "grid_height", cfg.grid_height, issues);
    if (doc.contains("neighborhood")) {
        const auto& v = doc.at("neighborhood");
        if (!v.is_string() || !neighborhood_from_string(v.get<std::string>(), cfg.neighborhood)) {
            issues.emplace_back("neighborhood: expected \"moore\" or \"von_neumann\"");
        }
    }
    read_int(doc, "n_agents", cfg.n_agents, issues);
    read_range(doc, "vision_range", cfg.vision_range, issues);
    read_range(doc, "metabolism_range_bonds", cfg.metabolism_range_bonds, issues);
    read_range(doc, "metabolism_range_cash", cfg.metabolism_range_cash, issues);
    read_range(doc, "endowment_range_bonds", cfg.endowment_range_bonds, issues);
    read_range(doc, "endowment_range_cash", cfg.endowment_range_cash, issues);
    read_range(doc, "cell_capacity_range_bonds", cfg.cell_capacity_range_bonds, issues);
    read_range(doc, "cell_capacity_range_cash", cfg.cell_capacity_range_cash, issues);
    read_int(doc, "regrowth_rate", cfg.regrowth_rate, issues);
    read_int(doc, "max_steps", cfg.max_steps, issues);
    if (doc.contains("seed")) {
        const auto& v = doc.at("seed");
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                       v.get<long long>() < 0)) {
            issues.emplace_back("seed: expected a non-negative integer");
        } else {
            cfg.seed = v.get<std::uint64_t>();
        }
    }
    read_int(doc, "replications", cfg.replications, issues);

    for (auto& issue : cfg.validate()) {
        issues.push_back(std::move(issue));
    }
    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

std::string serialize_config(const SimConfig& c) {
    ordered_json j;
    j["grid_width"] = c.grid_width;
    j["grid_height"] = c.grid_height;
    j["neighborhood"] = to_string(c.neighborhood);
    j["n_agents"] = c.n_agents;
    j["vision_range"] = {c.vision_range.lo, c.vision_range.hi};
    j["metabolism_range_bonds"] = {c.metabolism_range_bonds.lo, c.metabolism_range_bonds.hi};
    j["metabolism_range_cash"] = {c.metabolism_range_cash.lo, c.metabolism_range_cash.hi};
    j["endowment_range_bonds"] = {c.endowment_range_bonds.lo, c.endowment_range_bonds.hi};
    j["endowment_range_cash"] = {c.endowment_range_cash.lo, c.endowment_range_cash.hi};
    j["cell_capacity_range_bonds"] = {c.cell_capacity_range_bonds.lo, c.cell_capacity_range_bonds.hi};
    j["cell_capacity_range_cash"] = {c.cell_capacity_range_cash.lo, c.cell_capacity_range_cash.hi};
    j["regrowth_rate"] = c.regrowth_rate;
    j["max_steps"] = c.max_steps;
    j["seed"] = c.seed;
    j["replications"] = c.replications;
    return j.dump(2) + "\n";
}

std::string aggregate_json(const ScenarioResult& r) {
    ordered_json j;
    j["scenario"] = r.spec_name;
    j["n_agents"] = r.n_agents;
    j["max_steps"] = r.max_steps;
    j["replications"] = r.replications;
    j["failed_replications"] = r.failed_replications;
    j["trade_fraction"] = {
        {"mean", r.mean_trade_fraction},   {"median", r.median_trade_fraction},
        {"min", r.min_trade_fraction},     {"max", r.max_trade_fraction},
        {"pooled", r.pooled_trade_fraction},
    };
    j["final_population"] = {{"mean", r.mean_final_population}};
    j["collapse"] = {{"share", r.collapse_share}, {"median_step", r.median_collapse_step}};
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.target_checks) {
        ordered_json check;
        check["name"] = c.name;
        check["pass"] = c.pass;
        check["observed"] = c.observed;
        check["bound"] = c.bound;
        checks.push_back(std::move(check));
    }
    j["target_checks"] = std::move(checks);
    if (r.target_pass) {
        j["target_pass"] = *r.target_pass;
    } else {
        j["target_pass"] = nullptr;
    }
    return j.dump(2) + "\n";
}

ScenarioResult parse_aggregate(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text);
    ScenarioResult r;
    r.spec_name = j.at("scenario").get<std::string>();
    r.n_agents = j.at("n_agents").get<int>();
    r.max_steps = j.at("max_steps").get<int>();
    r.replications = j.at("replications").get<int>();
    r.failed_replications = j.at("failed_replications").get<int>();
    const auto& tf = j.at("trade_fraction");
    r.mean_trade_fraction = tf.at("mean").get<double>();
    r.median_trade_fraction = tf.at("median").get<double>();
    r.min_trade_fraction = tf.at("min").get<double>();
    r.max_trade_fraction = tf.at("max").get<double>();
    r.pooled_trade_fraction = tf.at("pooled").get<double>();
    r.mean_final_population = j.at("final_population").at("mean").get<double>();
    r.collapse_share = j.at("collapse").at("share").get<double>();
    r.median_collapse_step = j.at("collapse").at("median_step").get<double>();
    for (const auto& c : j.at("target_checks")) {
        r.target_checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(),
                                   c.at("observed").get<double>(), c.at("bound").get<std::string>()});
    }
    if (!j.at("target_pass").is_null()) {
        r.target_pass = j.at("target_pass").get<bool>();
    }
    return r;
}

void emit_results(const ScenarioResult& result, const std::filesystem::path& out_dir,
                  const std::vector<std::vector<StepEvent>>* traces) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());
    }
    auto open = [](const std::filesystem::path& path) {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write " + path.string());
        }
        return f;
    };

    {
        auto csv = open(out_dir / "summary.csv");
        csv << "replication_index,seed,total_actions,trading_actions,trade_fraction,"
               "collapse_step,final_population\n";
        for (const auto& s : result.replication_summaries) {
            csv << s.replication_index << ',' << s.run_seed << ',' << s.total_actions << ','
                << s.trading_actions << ',' << format_double(s.trade_fraction) << ',';
            if (s.collapse_step) {
                csv << *s.collapse_step;
            }
            csv << ',' << s.final_population << '\n';
        }
    }

    {
        auto agg = open(out_dir / "aggregate.json");
        agg << aggregate_json(result);
    }

    if (traces) {
        auto jsonl = open(out_dir / "trace.jsonl");
        for (std::size_t rep = 0; rep < traces->size(); ++rep) {
            for (const auto& ev : (*traces)[rep]) {
                ordered_json line;
                line["replication"] = rep;
                line["step"] = ev.step;
                line["agent_id"] = ev.agent_id;
                line["action"] = ev.action_kind == ActionKind::trade ? "trade" : "forage_only";
                ordered_json trades = ordered_json::array();
                for (const auto& t : ev.trades) {
                    trades.push_back(trade_to_json(t));
                }
                line["trades"] = std::move(trades);
                jsonl << line.dump() << '\n';
            }
        }
    }
}

}  // namespace bilatsim
