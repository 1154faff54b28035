#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bilatsim {

/// Inclusive integer interval, used for all randomized agent and cell attributes.
struct IntRange {
    int lo = 0;
    int hi = 0;

    friend bool operator==(const IntRange&, const IntRange&) = default;
};

enum class Neighborhood { moore, von_neumann };

std::string to_string(Neighborhood n);
bool neighborhood_from_string(const std::string& s, Neighborhood& out);

/// Chebyshev distance under moore, Manhattan distance under von_neumann.
int neighborhood_distance(Neighborhood n, int x0, int y0, int x1, int y1);

inline constexpr std::uint64_t kDefaultSeed = 424242;

/// Full parameterization of one simulation run.
struct SimConfig {
    int grid_width = 50;
    int grid_height = 50;
    Neighborhood neighborhood = Neighborhood::moore;
    int n_agents = 4;
    IntRange vision_range{1, 5};
    IntRange metabolism_range_bonds{1, 5};
    IntRange metabolism_range_cash{1, 5};
    IntRange endowment_range_bonds{25, 50};
    IntRange endowment_range_cash{25, 50};
    IntRange cell_capacity_range_bonds{0, 4};
    IntRange cell_capacity_range_cash{0, 4};
    int regrowth_rate = 0;
    int max_steps = 4000;
    std::uint64_t seed = kDefaultSeed;
    int replications = 200;

    /// One message per violated invariant; empty means the config is valid.
    std::vector<std::string> validate() const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

}  // namespace bilatsim
