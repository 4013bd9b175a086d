#ifndef STAFFDIM_REPORT_HPP
#define STAFFDIM_REPORT_HPP

#include <string>
#include <vector>

#include "staffdim/master.hpp"
#include "staffdim/model.hpp"

namespace staffdim {

// Workload split over the covered scenarios. Travel and idle are fractions of
// total paid time (L per used resource); day-off is a fraction of assigned
// headcount-days. Per used resource, travel + service + idle = L exactly.
struct WorkloadStats {
    double pct_day_off = 0.0;
    double pct_travel = 0.0;
    double pct_idle = 0.0;
    long long staff = 0;
    long long cost = 0;
};

WorkloadStats workload_report(const Instance& instance, const StaffSolution& solution,
                              const RequirementMatrix& matrix);

// Trivial-solution comparison: per-profession extremes, the cutting-rule
// vector n1, the conservative vector n2 and the coverage set differences.
struct ComparisonStats {
    std::vector<int> inf_p;
    std::vector<int> sup_p;
    std::vector<int> lb_p; // cutting-rule bound used for n1/n2
    std::vector<int> n_star;
    std::vector<int> n1;
    std::vector<int> n2;
    int covered_star = 0;
    int covered_star_not_n1 = 0;
    int covered_n2_not_star = 0;
    int omega = 0;

    long long sum_star_minus_inf() const;
    long long sum_sup_minus_star() const;
    long long sum_star_minus_lb() const;
    double pct_star() const { return 100.0 * covered_star / omega; }
    double pct_star_not_n1() const { return 100.0 * covered_star_not_n1 / omega; }
    double pct_n2_not_star() const { return 100.0 * covered_n2_not_star / omega; }
};

ComparisonStats comparison_report(const RequirementMatrix& matrix,
                                  const std::vector<long long>& costs, double alpha,
                                  const StaffSolution& solution);

// Table of solver effort: share of cells needing a solver call, optimality
// rate, staff-count gaps on timed-out calls, master gap, wall time.
struct PerformanceStats {
    double pct_call_slave = 0.0;
    double pct_opt = 100.0;
    double avg_gap = 0.0;
    int max_gap = 0;
    double pct_master_gap = 0.0;
    double cpu_hours = 0.0;
};

PerformanceStats performance_report(const RunStats& stats, long long master_cost,
                                    long long master_lb);

std::string workload_csv(const WorkloadStats& stats);
std::string comparison_csv(const ComparisonStats& stats);
std::string performance_csv(const PerformanceStats& stats);
std::string workload_json(const WorkloadStats& stats);
std::string comparison_json(const ComparisonStats& stats,
                            const std::vector<std::string>& professions);
std::string performance_json(const PerformanceStats& stats);

std::string pareto_csv(const std::vector<ParetoPoint>& front,
                       const std::vector<std::string>& professions);

} // namespace staffdim

#endif
