#include "bilatsim/world.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace bilatsim {

namespace {

// Past this capacity the per-activation log tables are not worth building.
constexpr int kLogTableLimit = 1 << 16;

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream os;
    os << "invalid config";
    for (const auto& issue : issues) {
        os << "; " << issue;
    }
    return os.str();
}

}  // namespace

World::World(const SimConfig& config, int replication_index)
    : config_(config),
      grid_(config.grid_width >= 1 ? config.grid_width : 1,
            config.grid_height >= 1 ? config.grid_height : 1),
      run_seed_(derive_seed(config.seed, kRunStream, static_cast<std::uint64_t>(replication_index))),
      run_rng_(run_seed_),
      replication_index_(replication_index) {
    const auto issues = config_.validate();
    if (!issues.empty()) {
        throw std::invalid_argument(join_issues(issues));
    }

    // Landscape first, then placement, all on the run stream; the draw order
    // is part of the serialized-replay contract. Client resources are
    // segregated into alternating quadrants (bond clients vs cash clients);
    // without that segregation every agent can balance its own inventory by
    // foraging alone and bilateral gains from trade disappear.
    for (int i = 0; i < grid_.size(); ++i) {
        const int x = i % grid_.width;
        const int y = i / grid_.width;
        const bool bonds_region = (x < grid_.width / 2) == (y < grid_.height / 2);
        int cap_b = run_rng_.uniform_int(config_.cell_capacity_range_bonds);
        int cap_c = run_rng_.uniform_int(config_.cell_capacity_range_cash);
        (bonds_region ? cap_c : cap_b) = 0;
        grid_.capacity_bonds[static_cast<std::size_t>(i)] = cap_b;
        grid_.capacity_cash[static_cast<std::size_t>(i)] = cap_c;
        grid_.level_bonds[static_cast<std::size_t>(i)] = cap_b;
        grid_.level_cash[static_cast<std::size_t>(i)] = cap_c;
    }
    max_cell_capacity_bonds_ = config_.cell_capacity_range_bonds.hi;
    max_cell_capacity_cash_ = config_.cell_capacity_range_cash.hi;

    // Attribute draws run on their own stream so the same "genetic" set
    // recurs across replications.
    Rng attr_rng(derive_seed(config_.seed, kAttributeStream, 0));
    agents_.reserve(static_cast<std::size_t>(config_.n_agents));
    for (int id = 0; id < config_.n_agents; ++id) {
        AgentState a;
        a.id = id;
        a.vision = attr_rng.uniform_int(config_.vision_range);
        a.metabolism_bonds = attr_rng.uniform_int(config_.metabolism_range_bonds);
        a.metabolism_cash = attr_rng.uniform_int(config_.metabolism_range_cash);
        a.accum_bonds = attr_rng.uniform_int(config_.endowment_range_bonds);
        a.accum_cash = attr_rng.uniform_int(config_.endowment_range_cash);
        agents_.push_back(a);
    }

    for (auto& a : agents_) {
        int cell;
        do {
            cell = static_cast<int>(run_rng_.below(static_cast<std::uint64_t>(grid_.size())));
        } while (grid_.occupant[static_cast<std::size_t>(cell)] != -1);
        grid_.occupant[static_cast<std::size_t>(cell)] = a.id;
        a.x = cell % grid_.width;
        a.y = cell / grid_.width;
    }
    alive_ = config_.n_agents;

    if (max_cell_capacity_bonds_ <= kLogTableLimit) {
        log_table_bonds_.resize(static_cast<std::size_t>(max_cell_capacity_bonds_) + 1);
    }
    if (max_cell_capacity_cash_ <= kLogTableLimit) {
        log_table_cash_.resize(static_cast<std::size_t>(max_cell_capacity_cash_) + 1);
    }
}

const std::vector<World::Offset>& World::offsets_for(int vision) {
    auto it = offset_cache_.find(vision);
    if (it != offset_cache_.end()) {
        return it->second;
    }
    std::vector<Offset> offsets;
    for (int dy = -vision; dy <= vision; ++dy) {
        for (int dx = -vision; dx <= vision; ++dx) {
            if (dx == 0 && dy == 0) {
                continue;
            }
            const int dist = neighborhood_distance(config_.neighborhood, 0, 0, dx, dy);
            if (dist <= vision) {
                offsets.push_back({dx, dy, dist});
            }
        }
    }
    std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.dy != b.dy) return a.dy < b.dy;
        return a.dx < b.dx;
    });
    return offset_cache_.emplace(vision, std::move(offsets)).first->second;
}

std::pair<int, int> World::move_agent(AgentState& a) {
    const double held_bonds = a.accum_bonds;
    const double held_cash = a.accum_cash;
    const double mb = a.metabolism_bonds;
    const double mc = a.metabolism_cash;

    // Welfare comparisons use m_b*log(b) + m_c*log(c), a strictly monotone
    // transform of the Cobb-Douglas value. Post-harvest holdings only take
    // level values 0..capacity, so the logs are tabulated per activation.
    const bool use_tables = !log_table_bonds_.empty() && !log_table_cash_.empty();
    if (use_tables) {
        for (std::size_t l = 0; l < log_table_bonds_.size(); ++l) {
            log_table_bonds_[l] = std::log(held_bonds + static_cast<double>(l));
        }
        for (std::size_t l = 0; l < log_table_cash_.size(); ++l) {
            log_table_cash_[l] = std::log(held_cash + static_cast<double>(l));
        }
    }
    auto score = [&](int level_b, int level_c) {
        if (use_tables) {
            return mb * log_table_bonds_[static_cast<std::size_t>(level_b)] +
                   mc * log_table_cash_[static_cast<std::size_t>(level_c)];
        }
        return mb * std::log(held_bonds + level_b) + mc * std::log(held_cash + level_c);
    };

    const int own = grid_.index(a.x, a.y);
    int best_index = own;
    int best_dist = 0;
    double best_score = score(grid_.level_bonds[static_cast<std::size_t>(own)],
                              grid_.level_cash[static_cast<std::size_t>(own)]);
    int ties = 1;

    for (const Offset& o : offsets_for(a.vision)) {
        const int x = a.x + o.dx;
        const int y = a.y + o.dy;
        if (!grid_.in_bounds(x, y)) {
            continue;
        }
        const auto ci = static_cast<std::size_t>(grid_.index(x, y));
        if (grid_.occupant[ci] != -1) {
            continue;
        }
        const int lb = grid_.level_bonds[ci];
        const int lc = grid_.level_cash[ci];
        if (lb == 0 && lc == 0) {
            // An empty cell never beats the current best: its score equals
            // the stay-put minimum and its distance exceeds the own cell's.
            continue;
        }
        const double s = score(lb, lc);
        if (s > best_score) {
            best_score = s;
            best_dist = o.dist;
            best_index = static_cast<int>(ci);
            ties = 1;
        } else if (s == best_score && o.dist == best_dist) {
            ++ties;
            if (run_rng_.below(static_cast<std::uint64_t>(ties)) == 0) {
                best_index = static_cast<int>(ci);
            }
        }
    }

    if (best_index != own) {
        grid_.occupant[static_cast<std::size_t>(own)] = -1;
        grid_.occupant[static_cast<std::size_t>(best_index)] = a.id;
        a.x = best_index % grid_.width;
        a.y = best_index / grid_.width;
    }
    const auto bi = static_cast<std::size_t>(best_index);
    a.accum_bonds += grid_.level_bonds[bi];
    a.accum_cash += grid_.level_cash[bi];
    grid_.level_bonds[bi] = 0;
    grid_.level_cash[bi] = 0;
    return {a.x, a.y};
}

std::vector<int> World::find_partners(const AgentState& a) {
    std::vector<int> ids;
    for (const auto& b : agents_) {
        if (!b.alive || b.id == a.id) {
            continue;
        }
        if (neighborhood_distance(config_.neighborhood, a.x, a.y, b.x, b.y) <= a.vision) {
            ids.push_back(b.id);
        }
    }
    run_rng_.shuffle(ids);
    return ids;
}

void World::regrow_tally(long long* added_bonds, long long* added_cash) {
    if (config_.regrowth_rate == 0) {
        return;
    }
    for (std::size_t i = 0; i < grid_.level_bonds.size(); ++i) {
        const int add_b = std::min(config_.regrowth_rate, grid_.capacity_bonds[i] - grid_.level_bonds[i]);
        const int add_c = std::min(config_.regrowth_rate, grid_.capacity_cash[i] - grid_.level_cash[i]);
        grid_.level_bonds[i] += add_b;
        grid_.level_cash[i] += add_c;
        if (added_bonds) *added_bonds += add_b;
        if (added_cash) *added_cash += add_c;
    }
}

void World::regrow() {
    regrow_tally(nullptr, nullptr);
}

StepReport World::step() {
    StepReport report;
    if (collapsed()) {
        report.collapsed = true;
        return report;
    }

    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(alive_));
    for (const auto& a : agents_) {
        if (a.alive) {
            order.push_back(a.id);
        }
    }
    run_rng_.shuffle(order);

    for (const int id : order) {
        AgentState& a = agents_[static_cast<std::size_t>(id)];
        if (!a.alive) {
            continue;
        }
        move_agent(a);

        std::vector<TradeRecord> trades;
        if (tradeable(a)) {
            for (const int pid : find_partners(a)) {
                AgentState& b = agents_[static_cast<std::size_t>(pid)];
                auto session = execute_trade_session(a, b, step_index_);
                trades.insert(trades.end(), session.begin(), session.end());
            }
        }

        report.metabolism_consumed_bonds += a.metabolism_bonds;
        report.metabolism_consumed_cash += a.metabolism_cash;
        metabolize(a);
        if (!a.alive) {
            grid_.occupant[static_cast<std::size_t>(grid_.index(a.x, a.y))] = -1;
            --alive_;
        }

        StepEvent ev;
        ev.step = step_index_;
        ev.agent_id = a.id;
        ev.action_kind = trades.empty() ? ActionKind::forage_only : ActionKind::trade;
        ev.trades = std::move(trades);
        report.events.push_back(std::move(ev));
    }

    regrow_tally(&report.regrowth_added_bonds, &report.regrowth_added_cash);
    ++step_index_;
    report.collapsed = collapsed();
    return report;
}

RunSummary run(const SimConfig& config, int replication_index, bool keep_trade_log,
               std::vector<StepEvent>* trace) {
    World world(config, replication_index);
    RunSummary summary;
    summary.replication_index = replication_index;
    summary.run_seed = world.run_seed();
    summary.population_trajectory.push_back(world.population());

    while (world.step_index() < config.max_steps && !world.collapsed()) {
        StepReport report = world.step();
        for (auto& ev : report.events) {
            ++summary.total_actions;
            if (ev.action_kind == ActionKind::trade) {
                ++summary.trading_actions;
            }
            if (keep_trade_log) {
                summary.trade_log.insert(summary.trade_log.end(), ev.trades.begin(), ev.trades.end());
            }
        }
        if (trace) {
            trace->insert(trace->end(), std::make_move_iterator(report.events.begin()),
                          std::make_move_iterator(report.events.end()));
        }
        summary.population_trajectory.push_back(world.population());
    }

    summary.steps_executed = world.step_index();
    summary.final_population = world.population();
    summary.collapse_step = detect_collapse(summary.population_trajectory);
    summary.trade_fraction =
        summary.total_actions > 0
            ? static_cast<double>(summary.trading_actions) / static_cast<double>(summary.total_actions)
            : 0.0;
    return summary;
}

namespace {

int thread_cap() {
    if (const char* env = std::getenv("BILAT_SIM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) {
            return n;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

BatchResult run_batch(const SimConfig& config, int replications, bool keep_trade_log,
                      std::vector<std::vector<StepEvent>>* traces) {
    const auto issues = config.validate();
    if (!issues.empty()) {
        throw std::invalid_argument(join_issues(issues));
    }
    if (replications < 1) {
        throw std::invalid_argument("replications must be >= 1");
    }

    BatchResult batch;
    std::vector<std::optional<RunSummary>> slots(static_cast<std::size_t>(replications));
    std::vector<std::string> errors(static_cast<std::size_t>(replications));
    if (traces) {
        traces->assign(static_cast<std::size_t>(replications), {});
    }

    auto run_one = [&](int i) {
        const auto slot = static_cast<std::size_t>(i);
        try {
            slots[slot] = run(config, i, keep_trade_log, traces ? &(*traces)[slot] : nullptr);
        } catch (const std::exception& e) {
            errors[slot] = "replication " + std::to_string(i) + ": " + e.what();
        }
    };

    const int threads = std::min(thread_cap(), replications);
    if (threads <= 1) {
        for (int i = 0; i < replications; ++i) {
            run_one(i);
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < replications; i = next.fetch_add(1)) {
                    run_one(i);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    for (int i = 0; i < replications; ++i) {
        const auto slot = static_cast<std::size_t>(i);
        if (slots[slot]) {
            batch.summaries.push_back(std::move(*slots[slot]));
        } else {
            ++batch.failed_replications;
            batch.errors.push_back(errors[slot]);
        }
    }
    return batch;
}

}  // namespace bilatsim
