#ifndef STAFFDIM_MASTER_HPP
#define STAFFDIM_MASTER_HPP

#include <string>
#include <vector>

#include "staffdim/model.hpp"
#include "staffdim/routing.hpp"
#include "staffdim/slave.hpp"

namespace staffdim {

// Per-(profession, scenario) outcome. Truncated cells were lifted to the
// profession's final cutting-rule bound; the lift never changes the master
// optimum because any feasible staffing dominates that bound anyway.
struct CellResult {
    int n = 0;
    int lb = 0;
    int ub = 0;
    SlaveStatus status = SlaveStatus::optimal;
    bool truncated = false;
    double elapsed = 0.0;
    std::optional<std::vector<ResourceUse>> assignment;
};

struct RunStats {
    int cells = 0;
    int shortcut_cells = 0; // skipped without a solver call
    int solved_cells = 0;
    int optimal_cells = 0; // among solver calls
    int timeout_cells = 0;
    long long sum_abs_gap = 0; // n - lower_bound over timed-out calls
    int max_abs_gap = 0;
    double sum_rel_gap = 0.0;
    double wall_seconds = 0.0;
};

struct RequirementMatrix {
    std::vector<std::string> professions;
    int omega = 0;
    double alpha = 1.0;
    bool pure = false; // solved without the cutting rule (every cell exact-or-timeout)
    std::vector<std::vector<CellResult>> cells; // [profession][scenario]
    std::vector<int> lb_final;                  // cutting-rule bound per profession
    RunStats stats;

    int requirement(int p, int w) const { return cells[p][w].n; }
    bool all_optimal() const;
};

struct SolveOptions {
    double alpha = 1.0;
    double time_limit = 300.0; // seconds per slave call; <= 0 unlimited
    int threads = 1;
    bool keep_assignments = false; // implies use_shortcut = false
    bool use_shortcut = true;      // scenario ordering + cutting rule + slave cut
};

struct StaffSolution {
    std::vector<int> n; // per profession
    long long cost = 0;
    std::vector<int> covered; // scenario indices, ascending
    double coverage = 0.0;
    double confidence_lb = 0.0;
};

struct ParetoPoint {
    std::vector<int> n;
    long long cost = 0;
    int covered_count = 0;
    double coverage = 0.0;
    bool approximate = false; // built from cells that were not proven optimal
};

// Smallest sample ratio on the grid {m/omega} whose 95% confidence lower bound
// (1.66 penalty, per the Student-t table) reaches the target performance level.
double calibrate_alpha(double alpha_star, int omega_count);

// Number of scenarios a ratio alpha requires out of omega, robust to the
// binary representation of alpha.
int required_coverage(double alpha, int omega);

RequirementMatrix compute_requirements(const Instance& instance,
                                       const std::vector<Scenario>& scenarios,
                                       const SolveOptions& options);

// Exact cost-minimal staffing covering at least ceil(alpha * omega) scenarios.
// Ties in cost resolve to the lexicographically smallest vector.
StaffSolution solve_master(const RequirementMatrix& matrix,
                           const std::vector<long long>& costs, double alpha);

// Same master solved on the per-cell proven lower bounds: a valid lower bound
// on the optimal cost even when some slaves timed out.
long long master_lower_bound(const RequirementMatrix& matrix,
                             const std::vector<long long>& costs, double alpha);

// Nondominated (cost, coverage) staffing vectors from a matrix computed at
// alpha = 1 without shortcuts; one exact master solve per coverage level.
std::vector<ParetoPoint> pareto_front(const RequirementMatrix& matrix,
                                      const std::vector<long long>& costs);

// Serialization of a solve run (solution + optional matrix dump) used by the
// CLI and the reporting layer.
std::string format_solution_bundle(const Instance& instance, const RequirementMatrix& matrix,
                                   const StaffSolution& solution, double alpha_star,
                                   long long master_lb, bool include_matrix,
                                   bool include_assignments);

struct SolutionBundle {
    StaffSolution solution;
    RequirementMatrix matrix;
    double alpha = 1.0;
    double alpha_star = 0.0;
    long long master_lb = 0;
    bool has_matrix = false;
};

SolutionBundle parse_solution_bundle(const std::string& text, const Instance& instance);

} // namespace staffdim

#endif
