#ifndef STAFFDIM_PATTERN_HPP
#define STAFFDIM_PATTERN_HPP

#include <string>
#include <vector>

namespace staffdim {

enum class PatternKind {
    stable,           // fixed daily total
    volume_variation, // total uniform in [total_lo, total_hi]
    geo_variation,    // total uniform, daily spatial concentration on one sector group
    typical_days      // one of a few (total, spatial) pairs drawn per day
};

std::string to_string(PatternKind kind);
PatternKind pattern_kind_from_string(const std::string& s);

struct TypicalDay {
    int total = 0;
    std::vector<double> spatial; // over sectors 1..S
};

// Stochastic law of one day's demand: total volume, spatial distribution over
// sectors and epidemiological distribution over cares.
struct DemandPattern {
    PatternKind kind = PatternKind::stable;

    int total_lo = 0; // stable uses total_lo == total_hi
    int total_hi = 0;

    std::vector<double> spatial; // base distribution over sectors 1..S (unused for typical_days)
    std::vector<double> epi;     // over cares, declaration order

    // geo_variation: one of `groups` contiguous sector groups receives
    // `focus_mass` of the spatial mass each day, the rest is spread uniformly
    int groups = 5;
    double focus_mass = 0.8;

    std::vector<TypicalDay> typical;

    bool fixed_total() const { return total_lo == total_hi; }

    // sector_count / care_count are the instance dimensions
    void validate(int sector_count, int care_count) const;
};

} // namespace staffdim

#endif
