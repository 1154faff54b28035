#pragma once

namespace bilatsim {

/// A market maker: grid position, client reach, carrying costs, inventory.
/// vision and both metabolisms are fixed for the life of the agent.
struct AgentState {
    int id = 0;
    int x = 0;
    int y = 0;
    int vision = 1;
    int metabolism_bonds = 1;
    int metabolism_cash = 1;
    double accum_bonds = 0.0;
    double accum_cash = 0.0;
    bool alive = true;
};

/// Per-step carrying cost. The agent dies when either holding is exhausted.
inline void metabolize(AgentState& a) {
    a.accum_bonds -= a.metabolism_bonds;
    a.accum_cash -= a.metabolism_cash;
    if (a.accum_bonds <= 0.0 || a.accum_cash <= 0.0) {
        a.alive = false;
    }
}

}  // namespace bilatsim
