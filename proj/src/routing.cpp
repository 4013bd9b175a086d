#include "staffdim/routing.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace staffdim {

CycleTable::CycleTable(const Territory& territory) : sector_count_(territory.sector_count) {
    const int s = sector_count_;
    if (s > 25) throw std::invalid_argument("CycleTable: too many sectors for full enumeration");
    const int n = s + 1;
    inter0_.resize(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inter0_[i * n + j] = territory.inter[i][j];

    const std::size_t masks = std::size_t{1} << s;
    path_.assign(masks * s, INT_MAX);
    cycle_.assign(masks, 0);

    // dp over masks in increasing order; mask bits are sectors already visited,
    // last = index of the sector the path currently ends at (1-based sector = last+1)
    for (int last = 0; last < s; ++last)
        path_[(std::size_t{1} << last) * s + last] = at(0, last + 1);
    for (std::size_t mask = 1; mask < masks; ++mask) {
        int best_cycle = INT_MAX;
        for (int last = 0; last < s; ++last) {
            if (!((mask >> last) & 1)) continue;
            const int cur = path_[mask * s + last];
            if (cur == INT_MAX) continue;
            best_cycle = std::min(best_cycle, cur + at(last + 1, 0));
            const std::size_t rest = masks - 1 - mask;
            for (std::size_t next_bits = rest; next_bits;) {
                const int next = __builtin_ctzll(next_bits);
                next_bits &= next_bits - 1;
                int& slot = path_[(mask | (std::size_t{1} << next)) * s + next];
                const int cand = cur + at(last + 1, next + 1);
                if (cand < slot) slot = cand;
            }
        }
        cycle_[mask] = best_cycle;
    }
}

std::vector<int> CycleTable::order(SectorMask subset) const {
    std::vector<int> result;
    if (subset == 0) return result;
    const int s = sector_count_;
    // walk parents backwards: find the last sector achieving the optimum
    std::size_t mask = subset;
    int last = -1;
    int best = INT_MAX;
    for (int j = 0; j < s; ++j) {
        if (!((mask >> j) & 1)) continue;
        const int cand = path_[mask * s + j] == INT_MAX
                             ? INT_MAX
                             : path_[mask * s + j] + at(j + 1, 0);
        if (cand < best) {
            best = cand;
            last = j;
        }
    }
    while (last >= 0) {
        result.push_back(last + 1);
        const std::size_t prev_mask = mask & ~(std::size_t{1} << last);
        if (prev_mask == 0) break;
        int prev = -1;
        for (int j = 0; j < s; ++j) {
            if (!((prev_mask >> j) & 1)) continue;
            if (path_[prev_mask * s + j] != INT_MAX &&
                path_[prev_mask * s + j] + at(j + 1, last + 1) == path_[mask * s + last]) {
                prev = j;
                break;
            }
        }
        mask = prev_mask;
        last = prev;
    }
    std::reverse(result.begin(), result.end());
    return result;
}

int min_cycle_duration(const Territory& territory, SectorMask subset) {
    if (subset == 0) return 0;
    if (subset >> territory.sector_count)
        throw std::invalid_argument("subset references sectors beyond the territory");
    // local dp over the selected sectors only
    std::vector<int> sectors;
    for (int s = 1; s <= territory.sector_count; ++s)
        if ((subset >> (s - 1)) & 1u) sectors.push_back(s);
    const int k = static_cast<int>(sectors.size());
    const std::size_t masks = std::size_t{1} << k;
    std::vector<int> dp(masks * k, INT_MAX);
    for (int j = 0; j < k; ++j)
        dp[(std::size_t{1} << j) * k + j] = territory.inter[0][sectors[j]];
    for (std::size_t mask = 1; mask < masks; ++mask) {
        for (int last = 0; last < k; ++last) {
            if (!((mask >> last) & 1)) continue;
            const int cur = dp[mask * k + last];
            if (cur == INT_MAX) continue;
            for (int next = 0; next < k; ++next) {
                if ((mask >> next) & 1) continue;
                int& slot = dp[(mask | (std::size_t{1} << next)) * k + next];
                slot = std::min(slot, cur + territory.inter[sectors[last]][sectors[next]]);
            }
        }
    }
    int best = INT_MAX;
    for (int last = 0; last < k; ++last)
        best = std::min(best, dp[(masks - 1) * k + last] + territory.inter[sectors[last]][0]);
    return best;
}

RouteSet enumerate_routes(const Instance& instance, int profession_index) {
    CycleTable cycles(instance.territory);
    return enumerate_routes(instance, profession_index, cycles);
}

RouteSet enumerate_routes(const Instance& instance, int profession_index,
                          const CycleTable& cycles) {
    if (profession_index < 0 || profession_index >= instance.profession_count())
        throw std::invalid_argument("profession index out of range");
    const int s = instance.sector_count();
    const int limit = instance.daily_limit;

    // cheapest service this profession can deliver anywhere; sectors only
    // differ by their intra time so one value covers all of them
    int min_service = INT_MAX;
    for (const auto& care : instance.cares) {
        const int w = care.duration[profession_index];
        if (w > 0) min_service = std::min(min_service, w);
    }

    RouteSet set;
    set.routes.push_back(Route{0, 0}); // remote-only employees
    if (min_service != INT_MAX) {
        for (SectorMask mask = 1; mask < (SectorMask{1} << s); ++mask) {
            const int t = cycles.duration(mask);
            long long load = t;
            for (int sec = 1; sec <= s; ++sec)
                if ((mask >> (sec - 1)) & 1u)
                    load += instance.territory.intra[sec] + min_service;
            if (load <= limit) set.routes.push_back(Route{mask, t});
        }
    }
    std::sort(set.routes.begin(), set.routes.end(), [](const Route& a, const Route& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        if (a.duration != b.duration) return a.duration < b.duration;
        return a.sectors < b.sectors;
    });
    return set;
}

} // namespace staffdim
