#ifndef STAFFDIM_SLAVE_HPP
#define STAFFDIM_SLAVE_HPP

#include <optional>
#include <string>
#include <vector>

#include "staffdim/model.hpp"
#include "staffdim/routing.hpp"

namespace staffdim {

enum class SlaveStatus {
    optimal,          // proven minimal (under the external cut, when one is set)
    feasible_timeout, // best feasible count with a proven lower bound
    lb_shortcut       // skipped entirely by the cutting rule
};

std::string to_string(SlaveStatus status);
SlaveStatus slave_status_from_string(const std::string& s);

// One caregiver's day: the route taken and the demand units served.
struct ResourceUse {
    SectorMask route = 0;
    int route_minutes = 0;
    std::vector<std::vector<int>> served; // (S+1) x A, row 0 = remote/depot units
};

// Minimum-staff subproblem for one (profession, scenario) pair. `demand` is the
// preprocessed matrix: cares the profession takes no part in are dropped and
// remote demand is re-homed to sector 0.
struct SlaveTask {
    const Instance* instance = nullptr;
    int profession = 0;
    Scenario demand;
    const RouteSet* routes = nullptr;
    const CycleTable* cycles = nullptr;
    int lb = 0;                // external cut: solutions below it are reported as lb
    double time_limit = 300.0; // seconds per solve; <= 0 means unlimited
};

struct SlaveResult {
    int n = 0;
    int lower_bound = 0;
    SlaveStatus status = SlaveStatus::optimal;
    double elapsed = 0.0;
    std::optional<std::vector<ResourceUse>> assignment;
};

SlaveTask make_slave_task(const Instance& instance, int profession_index,
                          const Scenario& raw, const RouteSet& routes,
                          const CycleTable& cycles, int lb = 0,
                          double time_limit = 300.0);

// ceil(total service-plus-intra minutes / L): travel-free relaxation
int workload_lower_bound(const SlaveTask& task);

// Constructive bound: pushes demands onto a growing route, opens a fresh
// resource whenever the day would overflow. Deterministic order: sectors
// ascending (0 first), cares in declaration order.
SlaveResult heuristic_upper_bound(const SlaveTask& task);

// Exact minimum within the time limit: searches resource counts upward from
// max(task.lb, workload bound); the first count admitting a route multiset with
// an integral demand assignment is optimal. On timeout returns the heuristic
// solution with the tightest proven lower bound.
SlaveResult solve_slave(const SlaveTask& task);
SlaveResult solve_slave(const SlaveTask& task, const SlaveResult& heuristic);

// Replays an assignment against the task: route budgets, sector eligibility
// and exact demand totals. Used by tests and the reporting layer.
bool verify_assignment(const SlaveTask& task, const std::vector<ResourceUse>& assignment,
                       std::string* why = nullptr);

} // namespace staffdim

#endif
