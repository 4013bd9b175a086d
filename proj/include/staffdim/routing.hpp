#ifndef STAFFDIM_ROUTING_HPP
#define STAFFDIM_ROUTING_HPP

#include <cstdint>
#include <vector>

#include "staffdim/model.hpp"

namespace staffdim {

// Sector subsets are bitmasks: bit (s-1) set means sector s is visited.
// The depot is on every route and is not part of the mask.
using SectorMask = std::uint32_t;

struct Route {
    SectorMask sectors = 0;
    int duration = 0; // T_r, minutes of the minimal Hamiltonian cycle through depot + sectors

    bool covers(int sector) const { return (sectors >> (sector - 1)) & 1u; }
    int size() const { return __builtin_popcount(sectors); }
};

// Minimal Hamiltonian-cycle durations for every sector subset of a territory,
// computed in one dynamic-programming sweep over (visited set, last sector).
class CycleTable {
public:
    explicit CycleTable(const Territory& territory);

    int duration(SectorMask subset) const { return cycle_[subset]; }
    int sector_count() const { return sector_count_; }

    // one cheapest visiting order, depot excluded; empty for the depot-only route
    std::vector<int> order(SectorMask subset) const;

private:
    int sector_count_;
    std::vector<int> cycle_;           // per subset: min cycle duration
    std::vector<int> path_;            // dp[mask * S + last]: min path depot -> ... -> last
    std::vector<int> inter0_;          // flattened inter matrix
    int at(int a, int b) const { return inter0_[a * (sector_count_ + 1) + b]; }
};

// Exact minimal cycle duration over subset + depot; empty subset -> 0.
int min_cycle_duration(const Territory& territory, SectorMask subset);

// Catalog of admissible routes for one profession: every subset whose minimal
// cycle can still serve at least the cheapest positive-duration care at each
// visited sector within the daily limit. The depot-only route is always kept.
struct RouteSet {
    std::vector<Route> routes; // sorted by (size, duration, mask)

    int size() const { return static_cast<int>(routes.size()); }
};

RouteSet enumerate_routes(const Instance& instance, int profession_index);
RouteSet enumerate_routes(const Instance& instance, int profession_index,
                          const CycleTable& cycles);

} // namespace staffdim

#endif
