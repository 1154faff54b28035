#include "bilatsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace bilatsim {

std::string to_string(Neighborhood n) {
    return n == Neighborhood::moore ? "moore" : "von_neumann";
}

bool neighborhood_from_string(const std::string& s, Neighborhood& out) {
    if (s == "moore") {
        out = Neighborhood::moore;
        return true;
    }
    if (s == "von_neumann") {
        out = Neighborhood::von_neumann;
        return true;
    }
    return false;
}

int neighborhood_distance(Neighborhood n, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0);
    const int dy = std::abs(y1 - y0);
    return n == Neighborhood::moore ? std::max(dx, dy) : dx + dy;
}

std::vector<std::string> SimConfig::validate() const {
    std::vector<std::string> issues;
    auto check_range = [&issues](const char* field, const IntRange& r, int min_lo) {
        if (r.lo < min_lo) {
            issues.push_back(std::string(field) + ": lo must be >= " + std::to_string(min_lo));
        }
        if (r.lo > r.hi) {
            issues.push_back(std::string(field) + ": lo > hi");
        }
    };

    if (grid_width < 1) issues.emplace_back("grid_width: must be >= 1");
    if (grid_height < 1) issues.emplace_back("grid_height: must be >= 1");
    if (n_agents < 1) issues.emplace_back("n_agents: must be >= 1");
    check_range("vision_range", vision_range, 1);
    check_range("metabolism_range_bonds", metabolism_range_bonds, 1);
    check_range("metabolism_range_cash", metabolism_range_cash, 1);
    check_range("endowment_range_bonds", endowment_range_bonds, 1);
    check_range("endowment_range_cash", endowment_range_cash, 1);
    check_range("cell_capacity_range_bonds", cell_capacity_range_bonds, 0);
    check_range("cell_capacity_range_cash", cell_capacity_range_cash, 0);
    if (grid_width >= 1 && grid_height >= 1) {
        if (vision_range.hi > std::max(grid_width, grid_height)) {
            issues.emplace_back("vision_range: hi exceeds max(grid_width, grid_height)");
        }
        const long long cells = static_cast<long long>(grid_width) * grid_height;
        if (n_agents > cells) {
            issues.emplace_back("n_agents: exceeds cell count");
        }
    }
    if (regrowth_rate < 0) issues.emplace_back("regrowth_rate: must be >= 0");
    if (max_steps < 1) issues.emplace_back("max_steps: must be >= 1");
    if (replications < 1) issues.emplace_back("replications: must be >= 1");
    return issues;
}

}  // namespace bilatsim
