#ifndef STAFFDIM_MODEL_HPP
#define STAFFDIM_MODEL_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "staffdim/pattern.hpp"

namespace staffdim {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sectorized territory. Index 0 everywhere is the depot (the HHC building);
// sectors proper are 1..sector_count. All travel times are integer minutes.
struct Territory {
    int sector_count = 0;                       // excluding the depot
    std::vector<std::vector<int>> inter;        // (S+1) x (S+1), symmetric, zero diagonal
    std::vector<int> intra;                     // size S+1, intra[0] = 0
    std::vector<std::array<double, 2>> points;  // generation-time coordinates, may be empty

    void validate() const;
};

struct Profession {
    std::string id;
    long long monthly_cost = 0; // euros per horizon
};

// A care type. duration[p] is the service time in minutes required from
// profession p (0 = profession not involved); remote[p] marks cares servable
// without traveling to the patient's sector.
struct Care {
    std::string id;
    double frequency = 0.0;     // rho_a
    std::vector<int> duration;  // indexed like Instance::professions
    std::vector<char> remote;
};

struct Instance {
    Territory territory;
    std::vector<Profession> professions;
    std::vector<Care> cares;
    int daily_limit = 480; // L, minutes, shared by all professions
    DemandPattern pattern;
    std::string label;

    int sector_count() const { return territory.sector_count; }
    int profession_count() const { return static_cast<int>(professions.size()); }
    int care_count() const { return static_cast<int>(cares.size()); }

    int profession_index(const std::string& id) const; // -1 if unknown
    int care_index(const std::string& id) const;

    void validate() const;
};

// One day's demand tally. Stored with S+1 rows so the depot row exists: raw
// scenarios keep row 0 at zero, slave preprocessing re-homes remote demand there.
struct Scenario {
    std::vector<std::vector<int>> demand; // (S+1) x A

    int total() const;
    void validate(const Instance& instance) const;
};

// service + intra-sector travel charged per demand unit: w_{a,p} + t_ss.
// sector 0 is the depot (t_00 = 0) and is only reachable for remote cares.
int effective_service_minutes(const Instance& instance, const std::string& care_id,
                              const std::string& profession_id, int sector);

Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& text);
std::string format_instance(const Instance& instance); // canonical text form
void save_instance(const Instance& instance, const std::string& path);

Scenario parse_scenario(const std::string& text, const Instance& instance);
std::string format_scenario(const Scenario& scenario, const Instance& instance);

std::vector<Scenario> load_scenarios(const std::string& path, const Instance& instance);
std::string format_scenarios(const std::vector<Scenario>& scenarios, const Instance& instance);
void save_scenarios(const std::vector<Scenario>& scenarios, const Instance& instance,
                    const std::string& path);

} // namespace staffdim

#endif
