#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "staffdim/master.hpp"
#include "staffdim/scengen.hpp"

using namespace staffdim;

namespace {

RequirementMatrix matrix_from_values(const std::vector<std::vector<int>>& values) {
    RequirementMatrix m;
    m.omega = static_cast<int>(values[0].size());
    for (std::size_t p = 0; p < values.size(); ++p) {
        m.professions.push_back("p" + std::to_string(p));
        std::vector<CellResult> row;
        for (const int v : values[p]) {
            CellResult cell;
            cell.n = v;
            cell.lb = v;
            cell.ub = v;
            row.push_back(cell);
        }
        m.cells.push_back(std::move(row));
    }
    m.lb_final.assign(values.size(), 0);
    return m;
}

struct Toy {
    Instance instance;
    std::vector<Scenario> scenarios;
};

// two professions, two cares, three sectors: small enough that every slave
// cell solves exactly in microseconds
Toy toy(std::uint64_t seed, int omega) {
    Rng rng(seed);
    std::vector<int> positions, intra;
    int x = 0;
    for (int s = 0; s < 3; ++s) {
        x += rng.uniform_int(8, 25);
        positions.push_back(x);
        intra.push_back(rng.uniform_int(0, 5));
    }
    Toy t{test::build_instance(
              test::line_territory(positions, intra),
              {{"nurse", 1200}, {"aid", 800}},
              {{"heavy", 0.5, {rng.uniform_int(40, 70), rng.uniform_int(20, 45)}, {0, 0}},
               {"light", 0.5, {rng.uniform_int(15, 35), rng.uniform_int(10, 25)}, {0, 0}}},
              480),
          {}};
    for (int w = 0; w < omega; ++w) {
        Scenario sc;
        sc.demand.assign(4, std::vector<int>(2, 0));
        const int units = rng.uniform_int(2, 9);
        for (int u = 0; u < units; ++u)
            ++sc.demand[rng.uniform_int(1, 3)][rng.uniform_int(0, 1)];
        t.scenarios.push_back(std::move(sc));
    }
    return t;
}

// plain sequential Algorithm 1, written independently of compute_requirements
std::vector<std::vector<int>> reference_algorithm1(const Instance& inst,
                                                   const std::vector<Scenario>& scenarios,
                                                   double alpha) {
    const int np = inst.profession_count();
    const int omega = static_cast<int>(scenarios.size());
    const int slack = omega - required_coverage(alpha, omega);
    const CycleTable cycles(inst.territory);
    std::vector<std::vector<int>> result(np, std::vector<int>(omega, 0));
    for (int p = 0; p < np; ++p) {
        const RouteSet routes = enumerate_routes(inst, p, cycles);
        std::vector<int> ub(omega);
        for (int w = 0; w < omega; ++w)
            ub[w] = heuristic_upper_bound(
                        make_slave_task(inst, p, scenarios[w], routes, cycles, 0, 0.0))
                        .n;
        std::vector<int> order(omega);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (ub[a] != ub[b]) return ub[a] > ub[b];
            return a < b;
        });
        int lb = 0;
        std::vector<int> assigned;
        std::vector<char> truncated(omega, 0);
        for (int pos = 0; pos < omega; ++pos) {
            const int w = order[pos];
            int value;
            if (lb >= ub[w]) {
                value = lb;
                truncated[w] = 1;
            } else {
                const SlaveResult res = solve_slave(
                    make_slave_task(inst, p, scenarios[w], routes, cycles, lb, 0.0));
                value = res.n;
                if (value <= lb) truncated[w] = 1;
            }
            result[p][w] = value;
            assigned.push_back(value);
            if (static_cast<int>(assigned.size()) > slack) {
                std::vector<int> sorted(assigned);
                std::nth_element(sorted.begin(), sorted.begin() + slack, sorted.end(),
                                 std::greater<int>());
                lb = sorted[slack];
            }
        }
        for (int w = 0; w < omega; ++w)
            if (truncated[w]) result[p][w] = lb;
    }
    return result;
}

} // namespace

TEST_CASE("alpha calibration reproduces the worked example") {
    const double alpha = calibrate_alpha(0.80, 100);
    CHECK(alpha == doctest::Approx(0.86).epsilon(1e-12));
    const double bound = alpha - 1.66 * std::sqrt(alpha * (1 - alpha)) / 10.0;
    CHECK(bound == doctest::Approx(0.8024).epsilon(1e-4 / 0.8024));
}

TEST_CASE("alpha calibration agrees with a direct grid scan") {
    for (const double target : {0.70, 0.75, 0.85, 0.90, 0.95}) {
        for (const int omega : {50, 100, 400}) {
            const double got = calibrate_alpha(target, omega);
            double expected = -1.0;
            for (int m = 0; m <= omega; ++m) {
                const double a = static_cast<double>(m) / omega;
                if (a < target) continue;
                if (a - 1.66 * std::sqrt(a * (1 - a)) / std::sqrt(double(omega)) >=
                    target - 1e-12) {
                    expected = a;
                    break;
                }
            }
            CHECK(got == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("alpha approaches the target from above as the sample grows") {
    const double a = calibrate_alpha(0.80, 1000000);
    CHECK(a >= 0.80);
    CHECK(a < 0.802);
}

TEST_CASE("alpha calibration rejects invalid inputs") {
    CHECK_THROWS_AS(calibrate_alpha(0.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_alpha(1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(calibrate_alpha(0.8, 20), std::invalid_argument);
}

TEST_CASE("required coverage is robust to floating-point alpha") {
    CHECK(required_coverage(0.86, 100) == 86);
    CHECK(required_coverage(1.0, 30) == 30);
    CHECK(required_coverage(0.0, 30) == 0);
    CHECK(required_coverage(0.6, 5) == 3);
}

TEST_CASE("master solve on the documented single-profession example") {
    const RequirementMatrix m = matrix_from_values({{3, 5, 4, 7, 6}});
    const std::vector<long long> costs{10};

    const StaffSolution at06 = solve_master(m, costs, 0.6);
    CHECK(at06.n == std::vector<int>{5});
    CHECK(at06.covered.size() == 3); // {3, 5, 4}

    const StaffSolution at0 = solve_master(m, costs, 0.0);
    CHECK(at0.n == std::vector<int>{0});
    CHECK(at0.cost == 0);

    const StaffSolution at1 = solve_master(m, costs, 1.0);
    CHECK(at1.n == std::vector<int>{7});
}

TEST_CASE("master solve matches exhaustive enumeration on random matrices") {
    Rng rng(90210);
    for (int trial = 0; trial < 40; ++trial) {
        const int np = rng.uniform_int(1, 3);
        const int omega = rng.uniform_int(1, 12);
        std::vector<std::vector<int>> values(np, std::vector<int>(omega, 0));
        for (auto& row : values)
            for (auto& v : row) v = rng.uniform_int(0, 9);
        std::vector<long long> costs;
        for (int p = 0; p < np; ++p) costs.push_back(rng.uniform_int(1, 50));
        const double alpha = rng.uniform_int(0, 100) / 100.0;
        const int needed = required_coverage(alpha, omega);

        const RequirementMatrix m = matrix_from_values(values);
        const StaffSolution got = solve_master(m, costs, alpha);
        std::vector<int> expect_n;
        const long long expect_cost =
            oracle::master_bruteforce(values, costs, needed, expect_n);
        CHECK(got.cost == expect_cost);
        CHECK(got.n == expect_n); // lexicographic tie-break matches the oracle scan
        CHECK(static_cast<int>(got.covered.size()) >= needed);
        for (const int w : got.covered)
            for (int p = 0; p < np; ++p) CHECK(values[p][w] <= got.n[p]);
    }
}

TEST_CASE("requirement matrices replay the sequential cutting rule exactly") {
    for (const std::uint64_t seed : {11ull, 22ull, 33ull}) {
        const Toy t = toy(seed, 10);
        const auto reference = reference_algorithm1(t.instance, t.scenarios, 0.8);

        SolveOptions options;
        options.alpha = 0.8;
        options.time_limit = 0.0;
        for (const int threads : {1, 2}) {
            options.threads = threads;
            const RequirementMatrix m = compute_requirements(t.instance, t.scenarios, options);
            for (int p = 0; p < t.instance.profession_count(); ++p)
                for (int w = 0; w < 10; ++w) CHECK(m.cells[p][w].n == reference[p][w]);
        }
    }
}

TEST_CASE("a full-alpha pure run solves every cell exactly") {
    const Toy t = toy(5, 8);
    SolveOptions options;
    options.alpha = 1.0;
    options.time_limit = 0.0;
    options.use_shortcut = false;
    const RequirementMatrix m = compute_requirements(t.instance, t.scenarios, options);
    CHECK(m.pure);
    CHECK(m.stats.shortcut_cells == 0);
    for (const auto& row : m.cells)
        for (const auto& cell : row) {
            CHECK(cell.status == SlaveStatus::optimal);
            CHECK_FALSE(cell.truncated);
            CHECK(cell.lb == cell.n);
            CHECK(cell.n <= cell.ub);
        }
}

TEST_CASE("identical scenarios collapse to one requirement per profession") {
    Toy t = toy(77, 1);
    std::vector<Scenario> repeated(12, t.scenarios[0]);
    SolveOptions options;
    options.alpha = 0.75;
    options.time_limit = 0.0;
    const RequirementMatrix m = compute_requirements(t.instance, repeated, options);
    for (int p = 0; p < t.instance.profession_count(); ++p)
        for (int w = 1; w < 12; ++w) CHECK(m.cells[p][w].n == m.cells[p][0].n);
    // after the threshold position the shortcut can fire
    CHECK(m.stats.shortcut_cells > 0);
}

TEST_CASE("truncation never changes the master optimum") {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const Toy t = toy(seed, 20);
        const double alpha = 0.8;
        std::vector<long long> costs;
        for (const auto& p : t.instance.professions) costs.push_back(p.monthly_cost);

        SolveOptions with_cut;
        with_cut.alpha = alpha;
        with_cut.time_limit = 0.0;
        SolveOptions pure = with_cut;
        pure.use_shortcut = false;

        const RequirementMatrix truncated =
            compute_requirements(t.instance, t.scenarios, with_cut);
        const RequirementMatrix full = compute_requirements(t.instance, t.scenarios, pure);
        const StaffSolution a = solve_master(truncated, costs, alpha);
        const StaffSolution b = solve_master(full, costs, alpha);
        CHECK(a.cost == b.cost);
        // cellwise the truncated matrix dominates from below by lb_final
        for (int p = 0; p < t.instance.profession_count(); ++p)
            for (int w = 0; w < 20; ++w)
                if (truncated.cells[p][w].truncated) {
                    CHECK(truncated.cells[p][w].n == truncated.lb_final[p]);
                    CHECK(full.cells[p][w].n <= truncated.lb_final[p]);
                }
    }
}

TEST_CASE("coverage, confidence bound and costs are internally consistent") {
    const Toy t = toy(9, 25);
    std::vector<long long> costs;
    for (const auto& p : t.instance.professions) costs.push_back(p.monthly_cost);
    SolveOptions options;
    options.alpha = 0.8;
    options.time_limit = 0.0;
    const RequirementMatrix m = compute_requirements(t.instance, t.scenarios, options);
    const StaffSolution sol = solve_master(m, costs, options.alpha);

    CHECK(sol.coverage >= options.alpha);
    const double expected_conf =
        sol.coverage - 1.66 * std::sqrt(sol.coverage * (1 - sol.coverage)) / std::sqrt(25.0);
    CHECK(sol.confidence_lb == doctest::Approx(expected_conf).epsilon(1e-12));
    long long cost = 0;
    for (int p = 0; p < t.instance.profession_count(); ++p) cost += costs[p] * sol.n[p];
    CHECK(cost == sol.cost);

    const long long lb = master_lower_bound(m, costs, options.alpha);
    CHECK(lb <= sol.cost);
    if (m.all_optimal() && !m.stats.shortcut_cells) CHECK(lb == sol.cost);
}

TEST_CASE("master lower bound equals the optimum when every cell is exact") {
    const Toy t = toy(12, 15);
    std::vector<long long> costs;
    for (const auto& p : t.instance.professions) costs.push_back(p.monthly_cost);
    SolveOptions options;
    options.alpha = 0.9;
    options.time_limit = 0.0;
    options.use_shortcut = false;
    const RequirementMatrix m = compute_requirements(t.instance, t.scenarios, options);
    REQUIRE(m.all_optimal());
    const StaffSolution sol = solve_master(m, costs, options.alpha);
    CHECK(master_lower_bound(m, costs, options.alpha) == sol.cost);
}

TEST_CASE("lower bounds on a toy matrix with one weakened cell") {
    // simulate a timed-out cell: lb < n
    RequirementMatrix m = matrix_from_values({{3, 5, 4}, {2, 2, 6}});
    m.cells[0][1].lb = 2; // solver only proved 2 for the cell worth 5
    const std::vector<long long> costs{10, 7};
    const long long lb = master_lower_bound(m, costs, 1.0);

    std::vector<int> n_ignore;
    const long long expected = oracle::master_bruteforce({{3, 2, 4}, {2, 2, 6}}, costs, 3,
                                                         n_ignore);
    CHECK(lb == expected);
    CHECK(lb <= solve_master(m, costs, 1.0).cost);
}

TEST_CASE("single-profession pareto front lists the distinct requirement values") {
    const RequirementMatrix m = matrix_from_values({{3, 5, 4, 7, 6, 5}});
    const auto front = pareto_front(m, {10});
    CHECK(front.size() == 5); // values {3,4,5,6,7}
    for (std::size_t i = 1; i < front.size(); ++i) {
        CHECK(front[i].coverage > front[i - 1].coverage);
        CHECK(front[i].cost > front[i - 1].cost);
    }
}

TEST_CASE("pareto front equals the exhaustive nondominated set on a toy matrix") {
    Rng rng(31415);
    std::vector<std::vector<int>> values(3, std::vector<int>(8, 0));
    for (auto& row : values)
        for (auto& v : row) v = rng.uniform_int(0, 5);
    const std::vector<long long> costs{12, 8, 25};
    const RequirementMatrix m = matrix_from_values(values);
    const auto front = pareto_front(m, costs);

    // oracle: nondominated (cost, coverage) pairs over every candidate vector
    std::vector<std::vector<int>> candidates(3);
    for (int p = 0; p < 3; ++p) {
        candidates[p] = values[p];
        candidates[p].push_back(0);
        std::sort(candidates[p].begin(), candidates[p].end());
        candidates[p].erase(std::unique(candidates[p].begin(), candidates[p].end()),
                            candidates[p].end());
    }
    std::vector<std::pair<long long, int>> points; // (cost, covered)
    for (const int a : candidates[0])
        for (const int b : candidates[1])
            for (const int c : candidates[2]) {
                const std::vector<int> n{a, b, c};
                int covered = 0;
                for (int w = 0; w < 8; ++w) {
                    bool ok = true;
                    for (int p = 0; p < 3; ++p)
                        if (values[p][w] > n[p]) ok = false;
                    if (ok) ++covered;
                }
                if (covered == 0) continue;
                points.push_back({costs[0] * a + costs[1] * b + costs[2] * c, covered});
            }
    std::vector<std::pair<long long, int>> expected;
    for (const auto& cand : points) {
        bool dominated = false;
        for (const auto& other : points)
            if ((other.second > cand.second && other.first <= cand.first) ||
                (other.second >= cand.second && other.first < cand.first))
                dominated = true;
        if (!dominated) expected.push_back(cand);
    }
    std::sort(expected.begin(), expected.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());

    REQUIRE(front.size() == expected.size());
    for (std::size_t i = 0; i < front.size(); ++i) {
        CHECK(front[i].cost == expected[i].first);
        CHECK(front[i].covered_count == expected[i].second);
    }
    for (std::size_t i = 1; i < front.size(); ++i) {
        CHECK(front[i].covered_count > front[i - 1].covered_count);
        CHECK(front[i].cost > front[i - 1].cost);
    }
}

TEST_CASE("solves are deterministic across repeats and thread counts") {
    const Toy t = toy(99, 18);
    std::vector<long long> costs;
    for (const auto& p : t.instance.professions) costs.push_back(p.monthly_cost);
    SolveOptions a;
    a.alpha = 0.8;
    a.time_limit = 0.0;
    a.threads = 1;
    SolveOptions b = a;
    b.threads = 2;

    const RequirementMatrix ma = compute_requirements(t.instance, t.scenarios, a);
    const RequirementMatrix mb = compute_requirements(t.instance, t.scenarios, b);
    CHECK(ma.lb_final == mb.lb_final);
    for (int p = 0; p < t.instance.profession_count(); ++p)
        for (int w = 0; w < 18; ++w) {
            CHECK(ma.cells[p][w].n == mb.cells[p][w].n);
            CHECK(ma.cells[p][w].lb == mb.cells[p][w].lb);
            CHECK(ma.cells[p][w].truncated == mb.cells[p][w].truncated);
            CHECK(to_string(ma.cells[p][w].status) == to_string(mb.cells[p][w].status));
        }
    const StaffSolution sa = solve_master(ma, costs, 0.8);
    const StaffSolution sb = solve_master(mb, costs, 0.8);
    CHECK(sa.n == sb.n);
    CHECK(sa.cost == sb.cost);
    CHECK(sa.covered == sb.covered);
}

TEST_CASE("solution bundles round-trip through their JSON form") {
    const Toy t = toy(7, 6);
    std::vector<long long> costs;
    for (const auto& p : t.instance.professions) costs.push_back(p.monthly_cost);
    SolveOptions options;
    options.alpha = 1.0;
    options.time_limit = 0.0;
    options.keep_assignments = true;
    const RequirementMatrix m = compute_requirements(t.instance, t.scenarios, options);
    const StaffSolution sol = solve_master(m, costs, 1.0);
    const long long lb = master_lower_bound(m, costs, 1.0);

    const std::string text = format_solution_bundle(t.instance, m, sol, 0.8, lb, true, true);
    const SolutionBundle bundle = parse_solution_bundle(text, t.instance);
    REQUIRE(bundle.has_matrix);
    CHECK(bundle.solution.n == sol.n);
    CHECK(bundle.solution.cost == sol.cost);
    CHECK(bundle.master_lb == lb);
    for (int p = 0; p < 2; ++p)
        for (int w = 0; w < 6; ++w) {
            CHECK(bundle.matrix.cells[p][w].n == m.cells[p][w].n);
            CHECK(bundle.matrix.cells[p][w].assignment.has_value() ==
                  m.cells[p][w].assignment.has_value());
        }
}
