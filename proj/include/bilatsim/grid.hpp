#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace bilatsim {

/// One landscape site. 0 <= level <= capacity for each resource.
struct Cell {
    int level_bonds = 0;
    int level_cash = 0;
    int capacity_bonds = 0;
    int capacity_cash = 0;
};

/// Resource landscape, stored column-parallel. At most one agent per cell.
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<int> level_bonds;
    std::vector<int> level_cash;
    std::vector<int> capacity_bonds;
    std::vector<int> capacity_cash;
    std::vector<int> occupant;  // agent id, or -1 when free

    Grid(int w, int h)
        : width(w),
          height(h),
          level_bonds(static_cast<std::size_t>(w) * static_cast<std::size_t>(h)),
          level_cash(level_bonds.size()),
          capacity_bonds(level_bonds.size()),
          capacity_cash(level_bonds.size()),
          occupant(level_bonds.size(), -1) {}

    int size() const { return width * height; }
    int index(int x, int y) const { return y * width + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    Cell cell(int x, int y) const {
        const auto i = static_cast<std::size_t>(index(x, y));
        return {level_bonds[i], level_cash[i], capacity_bonds[i], capacity_cash[i]};
    }

    long long total_level_bonds() const {
        return std::accumulate(level_bonds.begin(), level_bonds.end(), 0LL);
    }
    long long total_level_cash() const {
        return std::accumulate(level_cash.begin(), level_cash.end(), 0LL);
    }
};

}  // namespace bilatsim
