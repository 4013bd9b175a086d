#ifndef STAFFDIM_TESTS_HELPERS_HPP
#define STAFFDIM_TESTS_HELPERS_HPP

#include <vector>

#include "staffdim/model.hpp"
#include "staffdim/rng.hpp"
#include "staffdim/scengen.hpp"

namespace staffdim::test {

// Territory from points on a line, depot at the origin: distances are exact
// and metric by construction.
inline Territory line_territory(const std::vector<int>& positions,
                                const std::vector<int>& intra) {
    Territory t;
    t.sector_count = static_cast<int>(positions.size());
    const int n = t.sector_count + 1;
    std::vector<int> x{0};
    x.insert(x.end(), positions.begin(), positions.end());
    t.inter.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.inter[i][j] = std::abs(x[i] - x[j]);
    t.intra.assign(n, 0);
    for (int s = 1; s < n; ++s) t.intra[s] = intra[s - 1];
    t.validate();
    return t;
}

struct CareSpec {
    std::string id;
    double frequency;
    std::vector<int> duration;
    std::vector<char> remote;
};

inline Instance build_instance(Territory territory, std::vector<Profession> professions,
                               std::vector<CareSpec> cares, int daily_limit) {
    Instance inst;
    inst.territory = std::move(territory);
    inst.professions = std::move(professions);
    for (auto& c : cares) {
        Care care;
        care.id = c.id;
        care.frequency = c.frequency;
        care.duration = c.duration;
        care.remote = c.remote;
        inst.cares.push_back(std::move(care));
    }
    inst.daily_limit = daily_limit;
    inst.pattern.kind = PatternKind::stable;
    inst.pattern.total_lo = inst.pattern.total_hi = 0;
    inst.pattern.spatial.assign(inst.territory.sector_count,
                                1.0 / std::max(1, inst.territory.sector_count));
    for (const auto& c : inst.cares) inst.pattern.epi.push_back(c.frequency);
    inst.label = "test";
    inst.validate();
    return inst;
}

// single profession, one or two cares, compact travel: oracle-sized
inline Instance tiny_instance(const std::vector<int>& positions, const std::vector<int>& intra,
                              const std::vector<int>& durations, int daily_limit,
                              const std::vector<char>& remote = {}) {
    std::vector<CareSpec> cares;
    const double freq = 1.0 / durations.size();
    for (std::size_t i = 0; i < durations.size(); ++i)
        cares.push_back({"care" + std::to_string(i), freq,
                         {durations[i]},
                         {remote.empty() ? char(0) : remote[i]}});
    return build_instance(line_territory(positions, intra), {{"solo", 100}}, std::move(cares),
                          daily_limit);
}

inline Scenario scenario_from_rows(const Instance& instance,
                                   const std::vector<std::vector<int>>& rows) {
    Scenario sc;
    sc.demand.assign(instance.sector_count() + 1,
                     std::vector<int>(instance.care_count(), 0));
    for (std::size_t s = 0; s < rows.size(); ++s) sc.demand[s + 1] = rows[s];
    sc.validate(instance);
    return sc;
}

} // namespace staffdim::test

#endif
