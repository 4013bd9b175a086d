#include "staffdim/master.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace staffdim {

namespace {

using Clock = std::chrono::steady_clock;
using ordered_json = nlohmann::ordered_json;

int kth_largest(std::vector<int> values, int k) {
    // k is 0-based: k = 0 gives the maximum
    std::nth_element(values.begin(), values.begin() + k, values.end(), std::greater<int>());
    return values[k];
}

} // namespace

bool RequirementMatrix::all_optimal() const {
    for (const auto& row : cells)
        for (const auto& cell : row)
            if (cell.status == SlaveStatus::feasible_timeout) return false;
    return true;
}

int required_coverage(double alpha, int omega) {
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0, 1]");
    const int k = static_cast<int>(std::ceil(alpha * omega - 1e-9));
    return std::clamp(k, 0, omega);
}

double calibrate_alpha(double alpha_star, int omega_count) {
    if (!(alpha_star > 0.0 && alpha_star < 1.0))
        throw std::invalid_argument("alpha_star must be strictly between 0 and 1");
    if (omega_count < 30)
        throw std::invalid_argument("calibrate_alpha needs at least 30 scenarios");
    const double sqrt_omega = std::sqrt(static_cast<double>(omega_count));
    for (int m = required_coverage(alpha_star, omega_count); m <= omega_count; ++m) {
        const double a = static_cast<double>(m) / omega_count;
        const double bound = a - 1.66 * std::sqrt(a * (1.0 - a)) / sqrt_omega;
        if (bound >= alpha_star - 1e-12) return a;
    }
    throw std::runtime_error("no alpha <= 1 reaches the requested bound");
}

namespace {

// Shared Algorithm-1 state for one profession. Cells complete out of order
// under multithreading; a frontier replays them in the canonical order so the
// final matrix is the one the sequential algorithm produces.
struct ProfessionState {
    std::vector<int> order;        // scenario indices, decreasing heuristic UB
    std::vector<char> done;
    std::vector<char> skipped;     // dispatch-time shortcut
    std::vector<SlaveResult> raw;  // solver output per ordered position
    std::vector<char> called;
    int frontier = 0;
    int processed = 0;
    int lb_running = 0;
    std::vector<int> replay_values;
    std::atomic<int> shared_lb{0};
    std::mutex mu;
};

} // namespace

RequirementMatrix compute_requirements(const Instance& instance,
                                       const std::vector<Scenario>& scenarios,
                                       const SolveOptions& options) {
    const auto t0 = Clock::now();
    const int np = instance.profession_count();
    const int omega = static_cast<int>(scenarios.size());
    if (omega == 0) throw std::invalid_argument("compute_requirements needs scenarios");
    const bool shortcut = options.use_shortcut && !options.keep_assignments;
    const int threads = std::max(1, options.threads);

    RequirementMatrix matrix;
    matrix.omega = omega;
    matrix.alpha = options.alpha;
    matrix.pure = !shortcut;
    for (const auto& p : instance.professions) matrix.professions.push_back(p.id);
    matrix.cells.assign(np, std::vector<CellResult>(omega));
    matrix.lb_final.assign(np, 0);

    const CycleTable cycles(instance.territory);
    std::vector<RouteSet> routes;
    routes.reserve(np);
    for (int p = 0; p < np; ++p) routes.push_back(enumerate_routes(instance, p, cycles));

    // heuristic bounds first: they order the scenarios and cap every search
    std::vector<std::vector<SlaveResult>> heur(np, std::vector<SlaveResult>(omega));
    {
        std::atomic<int> next{0};
        auto ub_worker = [&]() {
            for (int g = next.fetch_add(1); g < np * omega; g = next.fetch_add(1)) {
                const int p = g / omega;
                const int w = g % omega;
                const SlaveTask task = make_slave_task(instance, p, scenarios[w], routes[p],
                                                       cycles, 0, options.time_limit);
                heur[p][w] = heuristic_upper_bound(task);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(ub_worker);
        ub_worker();
        for (auto& th : pool) th.join();
    }

    const int cover_needed = required_coverage(options.alpha, omega);
    const int slack_scenarios = omega - cover_needed; // how many may stay uncovered

    std::vector<ProfessionState> state(np);
    for (int p = 0; p < np; ++p) {
        auto& ps = state[p];
        ps.order.resize(omega);
        for (int w = 0; w < omega; ++w) ps.order[w] = w;
        std::sort(ps.order.begin(), ps.order.end(), [&](int a, int b) {
            if (heur[p][a].n != heur[p][b].n) return heur[p][a].n > heur[p][b].n;
            return a < b;
        });
        ps.done.assign(omega, 0);
        ps.skipped.assign(omega, 0);
        ps.called.assign(omega, 0);
        ps.raw.resize(omega);
    }

    auto replay_frontier = [&](int p) {
        auto& ps = state[p];
        std::lock_guard<std::mutex> lock(ps.mu);
        while (ps.frontier < omega && ps.done[ps.frontier]) {
            const int pos = ps.frontier;
            const int w = ps.order[pos];
            CellResult& cell = matrix.cells[p][w];
            cell.ub = heur[p][w].n;
            if (ps.skipped[pos] || (shortcut && ps.lb_running >= heur[p][w].n)) {
                // the sequential algorithm would have skipped this cell
                cell.n = ps.lb_running;
                cell.lb = ps.lb_running;
                cell.status = SlaveStatus::lb_shortcut;
                cell.truncated = true;
            } else {
                const SlaveResult& res = ps.raw[pos];
                cell.n = std::max(res.n, ps.lb_running);
                cell.lb = std::max(res.lower_bound, ps.lb_running);
                cell.status = res.status;
                cell.elapsed = res.elapsed;
                if (cell.n > res.n) {
                    // the cut value is proven: res.n is feasible and the cut forces it up
                    cell.lb = cell.n;
                    cell.status = SlaveStatus::optimal;
                    cell.truncated = true;
                } else if (shortcut && res.n <= ps.lb_running) {
                    cell.truncated = true; // cut may have inflated the value
                }
                if (cell.lb == cell.n && cell.status == SlaveStatus::feasible_timeout)
                    cell.status = SlaveStatus::optimal;
                if (options.keep_assignments || !cell.truncated)
                    cell.assignment = res.assignment;
            }
            ps.replay_values.push_back(cell.n);
            ++ps.processed;
            if (shortcut && ps.processed > slack_scenarios) {
                ps.lb_running = kth_largest(ps.replay_values, slack_scenarios);
                ps.shared_lb.store(ps.lb_running, std::memory_order_relaxed);
            }
            ++ps.frontier;
        }
    };

    {
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int g = next.fetch_add(1); g < np * omega; g = next.fetch_add(1)) {
                const int p = g / omega;
                const int pos = g % omega;
                auto& ps = state[p];
                const int w = ps.order[pos];
                const int lb_now = shortcut ? ps.shared_lb.load(std::memory_order_relaxed) : 0;
                if (shortcut && lb_now >= heur[p][w].n) {
                    ps.skipped[pos] = 1;
                } else {
                    const SlaveTask task = make_slave_task(instance, p, scenarios[w], routes[p],
                                                           cycles, lb_now, options.time_limit);
                    ps.raw[pos] = solve_slave(task, heur[p][w]);
                    if (!options.keep_assignments) ps.raw[pos].assignment.reset();
                    ps.called[pos] = 1;
                }
                ps.done[pos] = 1;
                replay_frontier(p);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    for (int p = 0; p < np; ++p) {
        auto& ps = state[p];
        matrix.lb_final[p] =
            shortcut ? ps.lb_running
                     : (omega > slack_scenarios
                            ? kth_largest(ps.replay_values, std::min(slack_scenarios, omega - 1))
                            : 0);
        for (int w = 0; w < omega; ++w) {
            CellResult& cell = matrix.cells[p][w];
            if (cell.truncated) {
                cell.n = matrix.lb_final[p];
                cell.lb = matrix.lb_final[p];
                cell.ub = std::max(cell.ub, cell.n);
            }
        }
    }

    RunStats& stats = matrix.stats;
    stats.cells = np * omega;
    for (int p = 0; p < np; ++p) {
        auto& ps = state[p];
        for (int pos = 0; pos < omega; ++pos) {
            if (!ps.called[pos]) {
                ++stats.shortcut_cells;
                continue;
            }
            ++stats.solved_cells;
            const SlaveResult& res = ps.raw[pos];
            if (res.status == SlaveStatus::optimal) {
                ++stats.optimal_cells;
            } else {
                ++stats.timeout_cells;
                const int gap = res.n - res.lower_bound;
                stats.sum_abs_gap += gap;
                stats.max_abs_gap = std::max(stats.max_abs_gap, gap);
                if (res.n > 0) stats.sum_rel_gap += static_cast<double>(gap) / res.n;
            }
        }
    }
    stats.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return matrix;
}

namespace {

// Exact enumeration over per-profession candidate staffing values with
// coverage bitsets. Small by construction: any optimal n_p is 0 or one of the
// requirement values.
class MasterSearch {
public:
    MasterSearch(const std::vector<std::vector<int>>& req, const std::vector<long long>& costs,
                 int needed)
        : req_(req), costs_(costs), needed_(needed), np_(static_cast<int>(req.size())),
          omega_(np_ == 0 ? 0 : static_cast<int>(req[0].size())),
          words_((omega_ + 63) / 64) {
        candidates_.resize(np_);
        cover_sets_.resize(np_);
        for (int p = 0; p < np_; ++p) {
            std::vector<int> values = req_[p];
            values.push_back(0);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            candidates_[p] = values;
            cover_sets_[p].assign(values.size(), std::vector<std::uint64_t>(words_, 0));
            for (std::size_t vi = 0; vi < values.size(); ++vi)
                for (int w = 0; w < omega_; ++w)
                    if (req_[p][w] <= values[vi])
                        cover_sets_[p][vi][w / 64] |= std::uint64_t{1} << (w % 64);
        }
    }

    bool solve(std::vector<int>& best_n, long long& best_cost) {
        best_cost_ = -1;
        std::vector<std::uint64_t> all(words_, ~std::uint64_t{0});
        if (omega_ % 64) all[words_ - 1] = (std::uint64_t{1} << (omega_ % 64)) - 1;
        partial_.assign(np_, 0);
        descend(0, 0, all);
        if (best_cost_ < 0) return false;
        best_n = best_n_;
        best_cost = best_cost_;
        return true;
    }

private:
    static int popcount(const std::vector<std::uint64_t>& bits) {
        int c = 0;
        for (std::uint64_t word : bits) c += __builtin_popcountll(word);
        return c;
    }

    void descend(int p, long long cost, const std::vector<std::uint64_t>& coverable) {
        if (best_cost_ >= 0 && cost > best_cost_) return;
        if (p == np_) {
            if (popcount(coverable) < needed_) return;
            if (best_cost_ < 0 || cost < best_cost_) {
                best_cost_ = cost;
                best_n_ = partial_;
            }
            return;
        }
        std::vector<std::uint64_t> next(words_);
        for (std::size_t vi = 0; vi < candidates_[p].size(); ++vi) {
            const int value = candidates_[p][vi];
            const long long child_cost = cost + costs_[p] * value;
            if (best_cost_ >= 0 && child_cost > best_cost_) break; // values ascend
            for (int w = 0; w < words_; ++w) next[w] = coverable[w] & cover_sets_[p][vi][w];
            if (popcount(next) < needed_) continue;
            partial_[p] = value;
            descend(p + 1, child_cost, next);
        }
        partial_[p] = 0;
    }

    const std::vector<std::vector<int>>& req_;
    const std::vector<long long>& costs_;
    int needed_;
    int np_;
    int omega_;
    int words_;
    std::vector<std::vector<int>> candidates_;
    std::vector<std::vector<std::vector<std::uint64_t>>> cover_sets_;
    std::vector<int> partial_;
    std::vector<int> best_n_;
    long long best_cost_ = -1;
};

std::vector<int> covered_scenarios(const std::vector<std::vector<int>>& req,
                                   const std::vector<int>& n) {
    std::vector<int> covered;
    const int omega = req.empty() ? 0 : static_cast<int>(req[0].size());
    for (int w = 0; w < omega; ++w) {
        bool ok = true;
        for (std::size_t p = 0; p < req.size(); ++p)
            if (req[p][w] > n[p]) {
                ok = false;
                break;
            }
        if (ok) covered.push_back(w);
    }
    return covered;
}

std::vector<std::vector<int>> requirement_values(const RequirementMatrix& matrix) {
    std::vector<std::vector<int>> req(matrix.professions.size(),
                                      std::vector<int>(matrix.omega, 0));
    for (std::size_t p = 0; p < matrix.professions.size(); ++p)
        for (int w = 0; w < matrix.omega; ++w) req[p][w] = matrix.cells[p][w].n;
    return req;
}

StaffSolution master_on_values(const std::vector<std::vector<int>>& req,
                               const std::vector<long long>& costs, int needed, int omega) {
    MasterSearch search(req, costs, needed);
    StaffSolution sol;
    if (!search.solve(sol.n, sol.cost))
        throw std::runtime_error("master problem infeasible for the requested coverage");
    sol.covered = covered_scenarios(req, sol.n);
    sol.coverage = omega == 0 ? 0.0 : static_cast<double>(sol.covered.size()) / omega;
    const double a = sol.coverage;
    sol.confidence_lb =
        omega == 0 ? 0.0
                   : a - 1.66 * std::sqrt(a * (1.0 - a)) / std::sqrt(static_cast<double>(omega));
    return sol;
}

} // namespace

StaffSolution solve_master(const RequirementMatrix& matrix, const std::vector<long long>& costs,
                           double alpha) {
    if (costs.size() != matrix.professions.size())
        throw std::invalid_argument("cost vector size mismatch");
    const int needed = required_coverage(alpha, matrix.omega);
    return master_on_values(requirement_values(matrix), costs, needed, matrix.omega);
}

long long master_lower_bound(const RequirementMatrix& matrix, const std::vector<long long>& costs,
                             double alpha) {
    if (costs.size() != matrix.professions.size())
        throw std::invalid_argument("cost vector size mismatch");
    std::vector<std::vector<int>> req(matrix.professions.size(),
                                      std::vector<int>(matrix.omega, 0));
    for (std::size_t p = 0; p < matrix.professions.size(); ++p)
        for (int w = 0; w < matrix.omega; ++w) req[p][w] = matrix.cells[p][w].lb;
    const int needed = required_coverage(alpha, matrix.omega);
    return master_on_values(req, costs, needed, matrix.omega).cost;
}

std::vector<ParetoPoint> pareto_front(const RequirementMatrix& matrix,
                                      const std::vector<long long>& costs) {
    const auto req = requirement_values(matrix);
    std::vector<ParetoPoint> points;
    for (int k = matrix.omega; k >= 1; --k) {
        const StaffSolution sol = master_on_values(req, costs, k, matrix.omega);
        ParetoPoint point;
        point.n = sol.n;
        point.cost = sol.cost;
        point.covered_count = static_cast<int>(sol.covered.size());
        point.coverage = sol.coverage;
        for (const int w : sol.covered)
            for (std::size_t p = 0; p < matrix.professions.size(); ++p)
                if (matrix.cells[p][w].status != SlaveStatus::optimal) point.approximate = true;
        points.push_back(std::move(point));
    }
    // drop duplicates and dominated points (>= coverage and <= cost elsewhere)
    std::vector<ParetoPoint> front;
    for (const auto& candidate : points) {
        bool dominated = false;
        for (const auto& other : points) {
            if (&other == &candidate) continue;
            const bool geq_cov = other.covered_count >= candidate.covered_count;
            const bool leq_cost = other.cost <= candidate.cost;
            const bool strict =
                other.covered_count > candidate.covered_count || other.cost < candidate.cost;
            if (geq_cov && leq_cost && strict) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        bool seen = false;
        for (const auto& kept : front)
            if (kept.n == candidate.n) {
                seen = true;
                break;
            }
        if (!seen) front.push_back(candidate);
    }
    std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        return a.covered_count < b.covered_count;
    });
    return front;
}

namespace {

ordered_json assignment_to_json(const std::vector<ResourceUse>& assignment) {
    ordered_json arr = ordered_json::array();
    for (const auto& use : assignment) {
        ordered_json ju;
        ju["route"] = use.route;
        ju["route_minutes"] = use.route_minutes;
        ju["served"] = use.served;
        arr.push_back(std::move(ju));
    }
    return arr;
}

std::vector<ResourceUse> assignment_from_json(const ordered_json& arr) {
    std::vector<ResourceUse> assignment;
    for (const auto& ju : arr) {
        ResourceUse use;
        use.route = ju.at("route").get<SectorMask>();
        use.route_minutes = ju.at("route_minutes").get<int>();
        use.served = ju.at("served").get<std::vector<std::vector<int>>>();
        assignment.push_back(std::move(use));
    }
    return assignment;
}

ordered_json matrix_to_json(const RequirementMatrix& matrix, bool include_assignments) {
    ordered_json j;
    j["alpha"] = matrix.alpha;
    j["omega"] = matrix.omega;
    j["pure"] = matrix.pure;
    j["professions"] = matrix.professions;
    j["lb_final"] = matrix.lb_final;
    ordered_json rows = ordered_json::array();
    for (const auto& row : matrix.cells) {
        ordered_json cells = ordered_json::array();
        for (const auto& cell : row) {
            ordered_json jc;
            jc["n"] = cell.n;
            jc["lb"] = cell.lb;
            jc["ub"] = cell.ub;
            jc["status"] = to_string(cell.status);
            jc["truncated"] = cell.truncated;
            jc["elapsed"] = cell.elapsed;
            if (include_assignments && cell.assignment)
                jc["assignment"] = assignment_to_json(*cell.assignment);
            cells.push_back(std::move(jc));
        }
        rows.push_back(std::move(cells));
    }
    j["cells"] = rows;
    ordered_json js;
    const RunStats& stats = matrix.stats;
    js["cells"] = stats.cells;
    js["shortcut_cells"] = stats.shortcut_cells;
    js["solved_cells"] = stats.solved_cells;
    js["optimal_cells"] = stats.optimal_cells;
    js["timeout_cells"] = stats.timeout_cells;
    js["sum_abs_gap"] = stats.sum_abs_gap;
    js["max_abs_gap"] = stats.max_abs_gap;
    js["sum_rel_gap"] = stats.sum_rel_gap;
    js["wall_seconds"] = stats.wall_seconds;
    j["stats"] = js;
    return j;
}

RequirementMatrix matrix_from_json(const ordered_json& j) {
    RequirementMatrix matrix;
    matrix.alpha = j.at("alpha").get<double>();
    matrix.omega = j.at("omega").get<int>();
    matrix.pure = j.value("pure", false);
    matrix.professions = j.at("professions").get<std::vector<std::string>>();
    matrix.lb_final = j.at("lb_final").get<std::vector<int>>();
    for (const auto& row : j.at("cells")) {
        std::vector<CellResult> cells;
        for (const auto& jc : row) {
            CellResult cell;
            cell.n = jc.at("n").get<int>();
            cell.lb = jc.at("lb").get<int>();
            cell.ub = jc.at("ub").get<int>();
            cell.status = slave_status_from_string(jc.at("status").get<std::string>());
            cell.truncated = jc.at("truncated").get<bool>();
            cell.elapsed = jc.at("elapsed").get<double>();
            if (jc.contains("assignment"))
                cell.assignment = assignment_from_json(jc.at("assignment"));
            cells.push_back(std::move(cell));
        }
        matrix.cells.push_back(std::move(cells));
    }
    const auto& js = j.at("stats");
    matrix.stats.cells = js.at("cells").get<int>();
    matrix.stats.shortcut_cells = js.at("shortcut_cells").get<int>();
    matrix.stats.solved_cells = js.at("solved_cells").get<int>();
    matrix.stats.optimal_cells = js.at("optimal_cells").get<int>();
    matrix.stats.timeout_cells = js.at("timeout_cells").get<int>();
    matrix.stats.sum_abs_gap = js.at("sum_abs_gap").get<long long>();
    matrix.stats.max_abs_gap = js.at("max_abs_gap").get<int>();
    matrix.stats.sum_rel_gap = js.at("sum_rel_gap").get<double>();
    matrix.stats.wall_seconds = js.at("wall_seconds").get<double>();
    return matrix;
}

} // namespace

std::string format_solution_bundle(const Instance& instance, const RequirementMatrix& matrix,
                                   const StaffSolution& solution, double alpha_star,
                                   long long master_lb, bool include_matrix,
                                   bool include_assignments) {
    ordered_json j;
    j["alpha_star"] = alpha_star;
    j["alpha"] = matrix.alpha;
    j["omega"] = matrix.omega;
    ordered_json jn;
    for (std::size_t p = 0; p < instance.professions.size(); ++p)
        jn[instance.professions[p].id] = solution.n[p];
    j["n"] = jn;
    j["cost"] = solution.cost;
    j["coverage"] = solution.coverage;
    j["confidence_lb"] = solution.confidence_lb;
    j["covered"] = solution.covered;
    j["master_lower_bound"] = master_lb;
    j["master_gap"] =
        solution.cost > 0
            ? static_cast<double>(solution.cost - master_lb) / static_cast<double>(solution.cost)
            : 0.0;
    if (include_matrix) j["matrix"] = matrix_to_json(matrix, include_assignments);
    return j.dump(2) + "\n";
}

SolutionBundle parse_solution_bundle(const std::string& text, const Instance& instance) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("solution parse error: ") + e.what());
    }
    SolutionBundle bundle;
    try {
        bundle.alpha_star = j.at("alpha_star").get<double>();
        bundle.alpha = j.at("alpha").get<double>();
        bundle.master_lb = j.at("master_lower_bound").get<long long>();
        bundle.solution.cost = j.at("cost").get<long long>();
        bundle.solution.coverage = j.at("coverage").get<double>();
        bundle.solution.confidence_lb = j.at("confidence_lb").get<double>();
        bundle.solution.covered = j.at("covered").get<std::vector<int>>();
        bundle.solution.n.assign(instance.professions.size(), 0);
        for (std::size_t p = 0; p < instance.professions.size(); ++p)
            bundle.solution.n[p] = j.at("n").at(instance.professions[p].id).get<int>();
        if (j.contains("matrix")) {
            bundle.matrix = matrix_from_json(j.at("matrix"));
            bundle.has_matrix = true;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("solution parse error: ") + e.what());
    }
    return bundle;
}

} // namespace staffdim
