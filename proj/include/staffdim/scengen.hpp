#ifndef STAFFDIM_SCENGEN_HPP
#define STAFFDIM_SCENGEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "staffdim/model.hpp"
#include "staffdim/rng.hpp"

namespace staffdim {

enum class Sparsity { rural, urban, semi_urban };

std::string to_string(Sparsity s);
Sparsity sparsity_from_string(const std::string& s);

struct TerritorySpec {
    Sparsity sparsity = Sparsity::rural;
    int divisions = 10; // sector count
    std::uint64_t seed = 0;
};

// Benchmark series: stable totals (S1.*), varying volume (S2.*), daily
// geographic concentration (S3), heterogeneous typical days (S4).
enum class Series { s1_1, s1_2, s2_1, s2_2, s3, s4 };

std::string to_string(Series s);
Series series_from_string(const std::string& s);

Territory generate_territory(const TerritorySpec& spec);

// Instance for a benchmark series on a given territory: the standard care mix,
// professions and costs, the series demand pattern, daily limit 480 minutes.
Instance generate_series(Series series, const Territory& territory, std::uint64_t seed);

// Draws one day of demand: total from the pattern, then independent
// (sector, care) draws tallied into the demand matrix.
Scenario sample_scenario(const Instance& instance, Rng& rng);

std::vector<Scenario> sample_scenarios(const Instance& instance, int count, std::uint64_t seed);

} // namespace staffdim

#endif
