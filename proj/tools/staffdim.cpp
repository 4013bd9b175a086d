#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "staffdim/master.hpp"
#include "staffdim/model.hpp"
#include "staffdim/report.hpp"
#include "staffdim/routing.hpp"
#include "staffdim/scengen.hpp"
#include "staffdim/slave.hpp"

namespace fs = std::filesystem;
using namespace staffdim;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<long long> cost_vector(const Instance& instance) {
    std::vector<long long> costs;
    for (const auto& p : instance.professions) costs.push_back(p.monthly_cost);
    return costs;
}

int run_gen(const std::string& series_name, const std::string& sparsity_name, int divisions,
            std::uint64_t seed, int scenario_count, const std::string& out_dir) {
    TerritorySpec spec;
    spec.sparsity = sparsity_from_string(sparsity_name);
    spec.divisions = divisions;
    spec.seed = seed;
    const Territory territory = generate_territory(spec);
    Instance instance = generate_series(series_from_string(series_name), territory, seed);
    const std::string code = spec.sparsity == Sparsity::rural    ? "RU"
                             : spec.sparsity == Sparsity::urban  ? "UR"
                                                                 : "SU";
    instance.label =
        series_name + "/" + code + std::to_string(divisions) + "/seed" + std::to_string(seed);
    const auto scenarios = sample_scenarios(instance, scenario_count, seed);

    fs::create_directories(out_dir);
    const std::string instance_path = (fs::path(out_dir) / "instance.json").string();
    const std::string scenario_path = (fs::path(out_dir) / "scenarios.json").string();
    save_instance(instance, instance_path);
    save_scenarios(scenarios, instance, scenario_path);
    std::cout << "wrote " << instance_path << " and " << scenario_path << " (|Omega|="
              << scenario_count << ")\n";
    return 0;
}

// full benchmark: two territories per (sparsity x divisions) cell, one
// instance per territory for S1.*/S2.*, two per territory for S3/S4 = 96
int run_bench(std::uint64_t seed, int scenario_count, const std::string& out_dir) {
    struct Cell {
        Sparsity sparsity;
        const char* code;
    };
    const Cell cells[] = {{Sparsity::rural, "RU"},
                          {Sparsity::urban, "UR"},
                          {Sparsity::semi_urban, "SU"}};
    const int division_choices[] = {10, 15};
    const char* copies = "ab";

    fs::create_directories(out_dir);
    std::ofstream manifest(fs::path(out_dir) / "manifest.csv");
    manifest << "territory,series,copy,instances_dir\n";
    int instances = 0;
    std::uint64_t territory_tag = 0;
    for (const Cell& cell : cells) {
        for (const int divisions : division_choices) {
            for (int copy = 0; copy < 2; ++copy, ++territory_tag) {
                const std::uint64_t tseed = derive_seed(seed, territory_tag);
                const Territory territory =
                    generate_territory({cell.sparsity, divisions, tseed});
                const std::string tname =
                    std::string(cell.code) + std::to_string(divisions) + copies[copy];
                for (const Series series : {Series::s1_1, Series::s1_2, Series::s2_1,
                                            Series::s2_2, Series::s3, Series::s4}) {
                    const bool doubled = series == Series::s3 || series == Series::s4;
                    const int variants = doubled ? 2 : 1;
                    for (int v = 0; v < variants; ++v) {
                        Instance instance = generate_series(series, territory, tseed);
                        std::string iname = to_string(series);
                        if (doubled) iname += "-" + std::to_string(v + 1);
                        instance.label = iname + "/" + tname + "/seed" + std::to_string(seed);
                        const fs::path dir = fs::path(out_dir) / tname / iname;
                        fs::create_directories(dir);
                        const std::uint64_t sseed =
                            derive_seed(tseed, 100 + static_cast<std::uint64_t>(v) * 7 +
                                                   static_cast<std::uint64_t>(series));
                        const auto scenarios =
                            sample_scenarios(instance, scenario_count, sseed);
                        save_instance(instance, (dir / "instance.json").string());
                        save_scenarios(scenarios, instance, (dir / "scenarios.json").string());
                        manifest << tname << ',' << to_string(series) << ',' << (v + 1) << ','
                                 << dir.string() << "\n";
                        ++instances;
                    }
                }
            }
        }
    }
    std::cout << "wrote " << instances << " instances under " << out_dir << "\n";
    return 0;
}

int run_routes(const std::string& instance_path, const std::string& profession) {
    const Instance instance = load_instance(instance_path);
    const int p = instance.profession_index(profession);
    if (p < 0) throw std::runtime_error("unknown profession: " + profession);
    const RouteSet set = enumerate_routes(instance, p);
    std::vector<int> histogram(instance.sector_count() + 1, 0);
    for (const Route& r : set.routes) ++histogram[r.size()];
    std::cout << "size,count\n";
    for (int k = 0; k <= instance.sector_count(); ++k)
        std::cout << k << ',' << histogram[k] << "\n";
    std::cout << "total," << set.size() << "\n";
    return 0;
}

int run_slave(const std::string& instance_path, const std::string& scenario_path, int index,
              const std::string& profession, double time_limit) {
    const Instance instance = load_instance(instance_path);
    const auto scenarios = load_scenarios(scenario_path, instance);
    if (index < 0 || index >= static_cast<int>(scenarios.size()))
        throw std::runtime_error("scenario index out of range");
    const int p = instance.profession_index(profession);
    if (p < 0) throw std::runtime_error("unknown profession: " + profession);

    const CycleTable cycles(instance.territory);
    const RouteSet routes = enumerate_routes(instance, p, cycles);
    const SlaveTask task =
        make_slave_task(instance, p, scenarios[index], routes, cycles, 0, time_limit);
    const SlaveResult result = solve_slave(task);
    std::cout << "{\"n\": " << result.n << ", \"lower_bound\": " << result.lower_bound
              << ", \"status\": \"" << to_string(result.status) << "\", \"elapsed\": "
              << result.elapsed << "}\n";
    return 0;
}

int run_solve(const std::string& instance_path, const std::string& scenario_path,
              double alpha_star, double alpha_override, double time_limit, int threads,
              bool keep_assignments, bool dump_matrix, bool pure, const std::string& out_path) {
    const Instance instance = load_instance(instance_path);
    const auto scenarios = load_scenarios(scenario_path, instance);
    const int omega = static_cast<int>(scenarios.size());

    const double alpha =
        alpha_override > 0.0 ? alpha_override : calibrate_alpha(alpha_star, omega);

    SolveOptions options;
    options.alpha = alpha;
    options.time_limit = time_limit;
    options.threads = threads;
    options.keep_assignments = keep_assignments;
    options.use_shortcut = !pure;

    const RequirementMatrix matrix = compute_requirements(instance, scenarios, options);
    const auto costs = cost_vector(instance);
    const StaffSolution solution = solve_master(matrix, costs, alpha);
    const long long lb = master_lower_bound(matrix, costs, alpha);

    const std::string text = format_solution_bundle(instance, matrix, solution, alpha_star, lb,
                                                    dump_matrix || keep_assignments,
                                                    keep_assignments);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
        std::cout << "alpha=" << alpha << " cost=" << solution.cost
                  << " coverage=" << solution.coverage
                  << " confidence_lb=" << solution.confidence_lb << " master_lb=" << lb << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int run_pareto(const std::string& instance_path, const std::string& scenario_path,
               double time_limit, int threads, const std::string& out_path) {
    const Instance instance = load_instance(instance_path);
    const auto scenarios = load_scenarios(scenario_path, instance);

    SolveOptions options;
    options.alpha = 1.0;
    options.time_limit = time_limit;
    options.threads = threads;
    options.use_shortcut = false; // cell-accurate requirements for the front

    const RequirementMatrix matrix = compute_requirements(instance, scenarios, options);
    const auto front = pareto_front(matrix, cost_vector(instance));
    const std::string csv = pareto_csv(front, matrix.professions);
    if (out_path.empty())
        std::cout << csv;
    else {
        write_file(out_path, csv);
        std::cout << "wrote " << out_path << " (" << front.size() << " points)\n";
    }
    return 0;
}

int run_report(const std::string& run_dir, const std::string& format) {
    const fs::path dir(run_dir);
    const Instance instance = load_instance((dir / "instance.json").string());
    const auto scenarios = load_scenarios((dir / "scenarios.json").string(), instance);
    const SolutionBundle bundle =
        parse_solution_bundle(read_file((dir / "solution.json").string()), instance);
    if (!bundle.has_matrix)
        throw std::runtime_error("solution.json has no matrix; re-solve with --dump-matrix");

    const auto costs = cost_vector(instance);
    const ComparisonStats comparison =
        comparison_report(bundle.matrix, costs, bundle.alpha, bundle.solution);
    const PerformanceStats performance =
        performance_report(bundle.matrix.stats, bundle.solution.cost, bundle.master_lb);

    const bool csv = format == "csv";
    std::string workload_text;
    try {
        const WorkloadStats workload = workload_report(instance, bundle.solution, bundle.matrix);
        workload_text = csv ? workload_csv(workload) : workload_json(workload);
    } catch (const std::exception& e) {
        workload_text = std::string("unavailable: ") + e.what() + "\n";
    }
    const std::string comparison_text =
        csv ? comparison_csv(comparison) : comparison_json(comparison, bundle.matrix.professions);
    const std::string performance_text =
        csv ? performance_csv(performance) : performance_json(performance);

    const std::string ext = csv ? ".csv" : ".json";
    write_file((dir / ("workload" + ext)).string(), workload_text);
    write_file((dir / ("comparison" + ext)).string(), comparison_text);
    write_file((dir / ("performance" + ext)).string(), performance_text);

    std::cout << "== workload ==\n" << workload_text;
    std::cout << "== comparison ==\n" << comparison_text;
    std::cout << "== performance ==\n" << performance_text;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"staffdim: staffing levels for home-health-care territories under "
                 "scenario-based coverage targets"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a benchmark instance and scenario bundle");
    std::string series = "S1.1", sparsity = "rural", out_dir = ".";
    int divisions = 10, scenario_count = 100;
    std::uint64_t seed = 42;
    gen->add_option("--series", series, "S1.1|S1.2|S2.1|S2.2|S3|S4");
    gen->add_option("--sparsity", sparsity, "rural|urban|semi_urban");
    gen->add_option("--divisions", divisions, "sector count");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--scenarios", scenario_count, "scenarios per instance");
    gen->add_option("--out", out_dir, "output directory")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "generate the full 96-instance benchmark");
    std::string bench_out;
    std::uint64_t bench_seed = 42;
    int bench_scenarios = 100;
    bench->add_option("--seed", bench_seed, "master seed");
    bench->add_option("--scenarios", bench_scenarios, "scenarios per instance");
    bench->add_option("--out", bench_out, "output directory")->required();

    // routes
    auto* routes = app.add_subcommand("routes", "enumerate admissible routes for a profession");
    std::string instance_path, profession = "nurse";
    routes->add_option("--instance", instance_path, "instance file")->required();
    routes->add_option("--profession", profession, "profession id");

    // slave
    auto* slave = app.add_subcommand("slave", "solve one (profession, scenario) subproblem");
    std::string sl_instance, sl_scenarios, sl_profession = "nurse";
    int sl_index = 0;
    double sl_time_limit = 300.0;
    slave->add_option("--instance", sl_instance, "instance file")->required();
    slave->add_option("--scenarios", sl_scenarios, "scenario bundle file")->required();
    slave->add_option("--scenario", sl_index, "scenario index");
    slave->add_option("--profession", sl_profession, "profession id");
    slave->add_option("--time-limit", sl_time_limit, "seconds, <=0 unlimited");

    // solve
    auto* solve = app.add_subcommand("solve", "full two-phase solve");
    std::string so_instance, so_scenarios, so_out;
    double so_alpha_star = 0.8, so_alpha = 0.0, so_time_limit = 300.0;
    int so_threads = 1;
    bool so_keep = false, so_dump = false, so_pure = false;
    solve->add_option("--instance", so_instance, "instance file")->required();
    solve->add_option("--scenarios", so_scenarios, "scenario bundle file")->required();
    solve->add_option("--alpha-star", so_alpha_star, "target performance level");
    solve->add_option("--alpha", so_alpha, "override the calibrated sample ratio");
    solve->add_option("--time-limit", so_time_limit, "seconds per slave call, <=0 unlimited");
    solve->add_option("--threads", so_threads, "worker threads");
    solve->add_flag("--keep-assignments", so_keep,
                    "retain per-scenario assignments (disables the cutting rule)");
    solve->add_flag("--dump-matrix", so_dump, "embed the requirement matrix in the output");
    solve->add_flag("--pure", so_pure, "disable the cutting rule (solve every cell)");
    solve->add_option("--out", so_out, "output file (stdout when omitted)");

    // pareto
    auto* pareto = app.add_subcommand("pareto", "cost/coverage Pareto front at alpha = 1");
    std::string pa_instance, pa_scenarios, pa_out;
    double pa_time_limit = 300.0;
    int pa_threads = 1;
    pareto->add_option("--instance", pa_instance, "instance file")->required();
    pareto->add_option("--scenarios", pa_scenarios, "scenario bundle file")->required();
    pareto->add_option("--time-limit", pa_time_limit, "seconds per slave call, <=0 unlimited");
    pareto->add_option("--threads", pa_threads, "worker threads");
    pareto->add_option("--out", pa_out, "CSV output file (stdout when omitted)");

    // report
    auto* report = app.add_subcommand("report", "evaluation tables for a finished run");
    std::string re_dir, re_format = "csv";
    report->add_option("--run", re_dir, "run directory with instance/scenarios/solution")
        ->required();
    report->add_option("--format", re_format, "csv|json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen(series, sparsity, divisions, seed, scenario_count, out_dir);
        if (bench->parsed()) return run_bench(bench_seed, bench_scenarios, bench_out);
        if (routes->parsed()) return run_routes(instance_path, profession);
        if (slave->parsed())
            return run_slave(sl_instance, sl_scenarios, sl_index, sl_profession, sl_time_limit);
        if (solve->parsed())
            return run_solve(so_instance, so_scenarios, so_alpha_star, so_alpha, so_time_limit,
                             so_threads, so_keep, so_dump, so_pure, so_out);
        if (pareto->parsed())
            return run_pareto(pa_instance, pa_scenarios, pa_time_limit, pa_threads, pa_out);
        if (report->parsed()) return run_report(re_dir, re_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
