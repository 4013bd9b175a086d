#include "staffdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace staffdim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double value, int digits = 4) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << value;
    return out.str();
}

} // namespace

WorkloadStats workload_report(const Instance& instance, const StaffSolution& solution,
                              const RequirementMatrix& matrix) {
    const int np = instance.profession_count();
    const int limit = instance.daily_limit;

    long long day_off_num = 0;
    long long day_off_den = 0;
    long long travel_num = 0;
    long long idle_num = 0;
    long long paid_den = 0;

    for (const int w : solution.covered) {
        for (int p = 0; p < np; ++p) {
            const CellResult& cell = matrix.cells[p][w];
            if (!cell.assignment)
                throw std::runtime_error(
                    "workload report needs per-scenario assignments; re-solve with "
                    "--keep-assignments");
            day_off_num += solution.n[p] - cell.n;
            day_off_den += solution.n[p];
            for (const ResourceUse& use : *cell.assignment) {
                long long travel = use.route_minutes;
                long long service = 0;
                for (int s = 0; s <= instance.sector_count(); ++s)
                    for (int a = 0; a < instance.care_count(); ++a) {
                        const int q = use.served[s][a];
                        if (q == 0) continue;
                        travel += static_cast<long long>(q) * instance.territory.intra[s];
                        service += static_cast<long long>(q) *
                                   instance.cares[a].duration[p];
                    }
                travel_num += travel;
                idle_num += limit - travel - service;
                paid_den += limit;
            }
        }
    }

    WorkloadStats stats;
    stats.pct_day_off = day_off_den > 0 ? static_cast<double>(day_off_num) / day_off_den : 0.0;
    stats.pct_travel = paid_den > 0 ? static_cast<double>(travel_num) / paid_den : 0.0;
    stats.pct_idle = paid_den > 0 ? static_cast<double>(idle_num) / paid_den : 0.0;
    for (int p = 0; p < np; ++p) stats.staff += solution.n[p];
    stats.cost = solution.cost;
    return stats;
}

long long ComparisonStats::sum_star_minus_inf() const {
    long long total = 0;
    for (std::size_t p = 0; p < n_star.size(); ++p) total += n_star[p] - inf_p[p];
    return total;
}

long long ComparisonStats::sum_sup_minus_star() const {
    long long total = 0;
    for (std::size_t p = 0; p < n_star.size(); ++p) total += sup_p[p] - n_star[p];
    return total;
}

long long ComparisonStats::sum_star_minus_lb() const {
    long long total = 0;
    for (std::size_t p = 0; p < n_star.size(); ++p) total += n_star[p] - lb_p[p];
    return total;
}

ComparisonStats comparison_report(const RequirementMatrix& matrix,
                                  const std::vector<long long>& costs, double alpha,
                                  const StaffSolution& solution) {
    (void)costs;
    const int np = static_cast<int>(matrix.professions.size());
    const int omega = matrix.omega;
    ComparisonStats stats;
    stats.omega = omega;
    stats.inf_p.assign(np, 0);
    stats.sup_p.assign(np, 0);
    stats.lb_p.assign(np, 0);
    stats.n_star = solution.n;
    stats.n1.assign(np, 0);
    stats.n2.assign(np, 0);

    const int slack = omega - required_coverage(alpha, omega);
    for (int p = 0; p < np; ++p) {
        int lo = matrix.cells[p][0].n, hi = matrix.cells[p][0].n;
        std::vector<int> values(omega);
        for (int w = 0; w < omega; ++w) {
            values[w] = matrix.cells[p][w].n;
            lo = std::min(lo, values[w]);
            hi = std::max(hi, values[w]);
        }
        stats.inf_p[p] = lo;
        stats.sup_p[p] = hi;
        if (slack < omega) {
            std::nth_element(values.begin(), values.begin() + slack, values.end(),
                             std::greater<int>());
            stats.lb_p[p] = values[slack];
        }
        stats.n1[p] = stats.lb_p[p];
    }

    // n2: cover every scenario that the cutting-rule bound touches for some profession
    for (int w = 0; w < omega; ++w) {
        bool qualifies = false;
        for (int p = 0; p < np; ++p)
            if (matrix.cells[p][w].n >= stats.lb_p[p]) {
                qualifies = true;
                break;
            }
        if (!qualifies) continue;
        for (int p = 0; p < np; ++p)
            stats.n2[p] = std::max(stats.n2[p], matrix.cells[p][w].n);
    }

    auto covered_by = [&](const std::vector<int>& n) {
        std::set<int> covered;
        for (int w = 0; w < omega; ++w) {
            bool ok = true;
            for (int p = 0; p < np; ++p)
                if (matrix.cells[p][w].n > n[p]) {
                    ok = false;
                    break;
                }
            if (ok) covered.insert(w);
        }
        return covered;
    };

    const std::set<int> cov_star(solution.covered.begin(), solution.covered.end());
    const std::set<int> cov_n1 = covered_by(stats.n1);
    const std::set<int> cov_n2 = covered_by(stats.n2);

    stats.covered_star = static_cast<int>(cov_star.size());
    for (const int w : cov_star)
        if (!cov_n1.count(w)) ++stats.covered_star_not_n1;
    for (const int w : cov_n2)
        if (!cov_star.count(w)) ++stats.covered_n2_not_star;
    return stats;
}

PerformanceStats performance_report(const RunStats& stats, long long master_cost,
                                    long long master_lb) {
    PerformanceStats out;
    out.pct_call_slave = stats.cells > 0 ? 100.0 * stats.solved_cells / stats.cells : 0.0;
    out.pct_opt =
        stats.solved_cells > 0 ? 100.0 * stats.optimal_cells / stats.solved_cells : 100.0;
    out.avg_gap = stats.timeout_cells > 0
                      ? static_cast<double>(stats.sum_abs_gap) / stats.timeout_cells
                      : 0.0;
    out.max_gap = stats.max_abs_gap;
    out.pct_master_gap =
        master_cost > 0
            ? 100.0 * static_cast<double>(master_cost - master_lb) / master_cost
            : 0.0;
    out.cpu_hours = stats.wall_seconds / 3600.0;
    return out;
}

std::string workload_csv(const WorkloadStats& stats) {
    std::ostringstream out;
    out << "% day off,% travel,% idle,staff,cost\n";
    out << fixed(100.0 * stats.pct_day_off, 1) << ',' << fixed(100.0 * stats.pct_travel, 1)
        << ',' << fixed(100.0 * stats.pct_idle, 1) << ',' << stats.staff << ',' << stats.cost
        << "\n";
    return out.str();
}

std::string comparison_csv(const ComparisonStats& stats) {
    std::ostringstream out;
    out << "sum n*-inf,sum sup-n*,sum n*-LB,n* %,n*\\n1 %,n2\\n* %\n";
    out << stats.sum_star_minus_inf() << ',' << stats.sum_sup_minus_star() << ','
        << stats.sum_star_minus_lb() << ',' << fixed(stats.pct_star(), 1) << ','
        << fixed(stats.pct_star_not_n1(), 1) << ',' << fixed(stats.pct_n2_not_star(), 1)
        << "\n";
    return out.str();
}

std::string performance_csv(const PerformanceStats& stats) {
    std::ostringstream out;
    out << "% call slave,% opt.,avg gap,max gap,% gap,cpu (h.)\n";
    out << fixed(stats.pct_call_slave, 1) << ',' << fixed(stats.pct_opt, 1) << ','
        << fixed(stats.avg_gap, 2) << ',' << stats.max_gap << ','
        << fixed(stats.pct_master_gap, 1) << ',' << fixed(stats.cpu_hours, 3) << "\n";
    return out.str();
}

std::string workload_json(const WorkloadStats& stats) {
    ordered_json j;
    j["pct_day_off"] = 100.0 * stats.pct_day_off;
    j["pct_travel"] = 100.0 * stats.pct_travel;
    j["pct_idle"] = 100.0 * stats.pct_idle;
    j["staff"] = stats.staff;
    j["cost"] = stats.cost;
    return j.dump(2) + "\n";
}

std::string comparison_json(const ComparisonStats& stats,
                            const std::vector<std::string>& professions) {
    ordered_json j;
    ordered_json inf, sup, lb, star, n1, n2;
    for (std::size_t p = 0; p < professions.size(); ++p) {
        inf[professions[p]] = stats.inf_p[p];
        sup[professions[p]] = stats.sup_p[p];
        lb[professions[p]] = stats.lb_p[p];
        star[professions[p]] = stats.n_star[p];
        n1[professions[p]] = stats.n1[p];
        n2[professions[p]] = stats.n2[p];
    }
    j["inf"] = inf;
    j["sup"] = sup;
    j["lb"] = lb;
    j["n_star"] = star;
    j["n1"] = n1;
    j["n2"] = n2;
    j["sum_star_minus_inf"] = stats.sum_star_minus_inf();
    j["sum_sup_minus_star"] = stats.sum_sup_minus_star();
    j["sum_star_minus_lb"] = stats.sum_star_minus_lb();
    j["covered_star_pct"] = stats.pct_star();
    j["covered_star_not_n1_pct"] = stats.pct_star_not_n1();
    j["covered_n2_not_star_pct"] = stats.pct_n2_not_star();
    return j.dump(2) + "\n";
}

std::string performance_json(const PerformanceStats& stats) {
    ordered_json j;
    j["pct_call_slave"] = stats.pct_call_slave;
    j["pct_opt"] = stats.pct_opt;
    j["avg_gap"] = stats.avg_gap;
    j["max_gap"] = stats.max_gap;
    j["pct_master_gap"] = stats.pct_master_gap;
    j["cpu_hours"] = stats.cpu_hours;
    return j.dump(2) + "\n";
}

std::string pareto_csv(const std::vector<ParetoPoint>& front,
                       const std::vector<std::string>& professions) {
    std::ostringstream out;
    out << "coverage,cost";
    for (const auto& id : professions) out << ",n_" << id;
    out << ",approximate\n";
    for (const auto& point : front) {
        out << fixed(point.coverage, 4) << ',' << point.cost;
        for (const int n : point.n) out << ',' << n;
        out << ',' << (point.approximate ? 1 : 0) << "\n";
    }
    return out.str();
}

} // namespace staffdim
