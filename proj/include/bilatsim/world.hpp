#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bilatsim/agent.hpp"
#include "bilatsim/config.hpp"
#include "bilatsim/grid.hpp"
#include "bilatsim/metrics.hpp"
#include "bilatsim/rng.hpp"
#include "bilatsim/trading.hpp"

namespace bilatsim {

enum class ActionKind { forage_only, trade };

/// One agent activation. action_kind is trade iff trades is non-empty.
struct StepEvent {
    int step = 0;
    int agent_id = 0;
    ActionKind action_kind = ActionKind::forage_only;
    std::vector<TradeRecord> trades;
};

struct StepReport {
    bool collapsed = false;
    std::vector<StepEvent> events;
    long long metabolism_consumed_bonds = 0;
    long long metabolism_consumed_cash = 0;
    long long regrowth_added_bonds = 0;
    long long regrowth_added_cash = 0;
};

/// Landscape, population, and the asynchronous per-step lifecycle
/// (move, harvest, trade, metabolize, cull, regrow). Dead agents stay in
/// storage with their final holdings but leave the occupancy grid and never
/// act again.
class World {
public:
    World(const SimConfig& config, int replication_index);

    /// Runs one full step: every agent alive at the step boundary is
    /// activated once, in freshly shuffled order; regrowth is applied last.
    /// Stepping a collapsed world is a no-op with the collapsed flag set.
    StepReport step();

    /// Moves the agent to the unoccupied visible cell that maximizes the
    /// welfare of its post-harvest holdings (ties: nearest, then uniform
    /// random), then harvests the full cell content. Staying put is always
    /// available. Returns the new position.
    std::pair<int, int> move_agent(AgentState& a);

    /// Regrows every cell by the configured rate, clamped at capacity.
    void regrow();

    /// Alive agents within the activated agent's vision, shuffled.
    std::vector<int> find_partners(const AgentState& a);

    const SimConfig& config() const { return config_; }
    const Grid& grid() const { return grid_; }
    Grid& grid() { return grid_; }
    const std::vector<AgentState>& agents() const { return agents_; }
    AgentState& agent(int id) { return agents_[static_cast<std::size_t>(id)]; }
    int step_index() const { return step_index_; }
    int population() const { return alive_; }
    bool collapsed() const { return alive_ < 2; }
    int replication_index() const { return replication_index_; }
    std::uint64_t run_seed() const { return run_seed_; }

private:
    struct Offset {
        int dx = 0;
        int dy = 0;
        int dist = 0;
    };

    const std::vector<Offset>& offsets_for(int vision);
    void regrow_tally(long long* added_bonds, long long* added_cash);

    SimConfig config_;
    Grid grid_;
    std::vector<AgentState> agents_;
    std::uint64_t run_seed_ = 0;
    Rng run_rng_;
    int replication_index_ = 0;
    int step_index_ = 0;
    int alive_ = 0;
    int max_cell_capacity_bonds_ = 0;
    int max_cell_capacity_cash_ = 0;
    std::unordered_map<int, std::vector<Offset>> offset_cache_;
    std::vector<double> log_table_bonds_;
    std::vector<double> log_table_cash_;
};

/// Executes a full run: init, then step until max_steps or collapse
/// (population < 2). Events are appended to *trace when given.
RunSummary run(const SimConfig& config, int replication_index, bool keep_trade_log = true,
               std::vector<StepEvent>* trace = nullptr);

struct BatchResult {
    std::vector<RunSummary> summaries;
    int failed_replications = 0;
    std::vector<std::string> errors;
};

/// Runs replications 0..n-1. Replications are independent and may execute on
/// multiple threads (capped by BILAT_SIM_THREADS); aggregation order is fixed
/// by replication index either way.
BatchResult run_batch(const SimConfig& config, int replications, bool keep_trade_log = false,
                      std::vector<std::vector<StepEvent>>* traces = nullptr);

}  // namespace bilatsim
