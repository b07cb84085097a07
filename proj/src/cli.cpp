#include "hemu/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "hemu/error.hpp"
#include "hemu/exact_dp.hpp"
#include "hemu/pareto.hpp"
#include "hemu/report.hpp"
#include "hemu/scenario_io.hpp"

namespace hemu {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string scenario;
    std::string algorithm = "dp";
    int depth = 0;
    int iterations = 100;
    std::string objective = "coec";
    std::optional<double> epsilon;
    std::string budget_mode = "per_slot";
    int k2 = 6;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string memory_budget = "2G";
    double discount = 0.99;
    bool no_reduced_set = false;
    double cap = 1e7;
    std::vector<int> cases{1, 2, 3, 4, 5};
    std::vector<std::string> algorithms{"dp", "ola", "tla", "mla:3"};
    std::string scenario_dir = "scenarios";
    bool quiet = false;
};

std::size_t parse_bytes(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw HemuError(ErrorKind::invalid_argument, "bad memory budget '" + text + "'");
    }
    const std::string suffix = text.substr(used);
    double scale = 1.0;
    if (suffix == "K" || suffix == "KiB") {
        scale = 1024.0;
    } else if (suffix == "M" || suffix == "MiB") {
        scale = 1024.0 * 1024.0;
    } else if (suffix == "G" || suffix == "GiB") {
        scale = 1024.0 * 1024.0 * 1024.0;
    } else if (!suffix.empty()) {
        throw HemuError(ErrorKind::invalid_argument, "bad memory budget suffix '" + suffix + "'");
    }
    if (!(value >= 0.0)) throw HemuError(ErrorKind::invalid_argument, "memory budget must be non-negative");
    return static_cast<std::size_t>(value * scale);
}

BudgetMode parse_mode(const std::string& text) {
    if (text == "per_slot") return BudgetMode::per_slot;
    if (text == "accumulated") return BudgetMode::accumulated;
    throw HemuError(ErrorKind::invalid_argument, "budget mode must be per_slot or accumulated");
}

Objective parse_objective(const std::string& text) {
    if (text == "coec") return Objective::coec;
    if (text == "tdl") return Objective::tdl;
    throw HemuError(ErrorKind::invalid_argument, "objective must be coec or tdl");
}

SolverSpec make_solver(const Options& o, const std::string& algorithm) {
    SolverSpec spec = SolverSpec::parse(algorithm);
    if (spec.kind == SolverSpec::Kind::mla && o.depth > 0 && algorithm.rfind("mla", 0) == 0 &&
        algorithm.find(':') == std::string::npos) {
        spec.adp.lookahead_depth = o.depth;
    }
    spec.adp.max_iterations = o.iterations;
    spec.adp.discount = o.discount;
    spec.adp.reduced_set_enabled = !o.no_reduced_set;
    spec.adp.rng_seed = o.seed;
    spec.dp.memory_budget_bytes = parse_bytes(o.memory_budget);
    return spec;
}

fs::path output_dir(const Options& o) {
    fs::path dir = o.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("HEMU_OUT_DIR");
        dir = env && *env ? env : "out";
    }
    fs::create_directories(dir);
    return dir;
}

std::string file_tag(std::string s) {
    for (char& c : s) {
        if (c == ':') c = '-';
    }
    return s;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path);
    if (!out) throw HemuError(ErrorKind::invalid_argument, "cannot write '" + path.string() + "'");
    body(out);
}

json objectives_json(const ObjectivePair& p) { return {{"coec", p.coec}, {"tdl", p.tdl}}; }

int cmd_validate(const Options& o) {
    const Scenario s = load_scenario(o.scenario);
    const StateGrid grid(s, 1);
    std::cout << fmt::format("{}: ok\nslots {}  states {}  decisions {}\n", s.name, s.slots(), grid.cardinality(),
                             nominal_decision_count(s));
    return 0;
}

int cmd_solve(const Options& o) {
    const Scenario s = load_scenario(o.scenario);
    // Spell out "mla" with --depth as mla:<depth>.
    std::string algorithm = o.algorithm;
    if (algorithm == "mla") algorithm = "mla:" + std::to_string(o.depth > 0 ? o.depth : 3);
    const SolverSpec solver = make_solver(o, algorithm);
    const Objective objective = parse_objective(o.objective);
    std::optional<TdlBudget> budget;
    if (o.epsilon) budget = TdlBudget{*o.epsilon, parse_mode(o.budget_mode)};

    const auto start = std::chrono::steady_clock::now();
    const Problem problem(s, objective, budget);
    const SolveResult result = solve(problem, solver);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir = output_dir(o);
    const std::string stem = fmt::format("{}_{}_{}", s.name, file_tag(result.solver), o.objective);
    write_file(dir / (stem + "_schedule.csv"), [&](std::ostream& out) { write_schedule_csv(out, result.schedule, s); });
    json summary = {{"scenario", s.name},
                    {"algorithm", result.solver},
                    {"objective", o.objective},
                    {"objectives", objectives_json(result.schedule.objectives)},
                    {"states", result.states},
                    {"decisions", nominal_decision_count(s)},
                    {"work", result.work},
                    {"seed", o.seed},
                    {"wall_seconds", wall}};
    if (budget) summary["budget"] = {{"epsilon", budget->epsilon}, {"mode", o.budget_mode}};
    if (result.adp) {
        const AdpRunReport& r = *result.adp;
        summary["iterations"] = r.iterations_run;
        summary["converged"] = r.converged;
        summary["best_iteration"] = r.best_iteration;
        summary["max_visited_per_iteration"] = r.max_visited_per_iteration;
        write_file(dir / (stem + "_convergence.csv"), [&](std::ostream& out) { write_convergence_csv(out, r); });
    }
    write_file(dir / (stem + "_summary.json"), [&](std::ostream& out) { out << summary.dump(2) << '\n'; });

    if (!o.quiet) {
        std::cout << fmt::format("{} {} {}: coec {:.6f} {}  tdl {:.6f}  wall {:.3f} s\n", s.name, result.solver,
                                 o.objective, result.schedule.objectives.coec, s.currency,
                                 result.schedule.objectives.tdl, wall);
        std::cout << "wrote " << (dir / (stem + "_schedule.csv")).string() << '\n';
    }
    return 0;
}

int cmd_pareto(const Options& o) {
    const Scenario s = load_scenario(o.scenario);
    if (s.thermal_terms() == 0) {
        throw HemuError(ErrorKind::invalid_range, "scenario has no thermal device; discomfort is always 0");
    }
    std::string algorithm = o.algorithm;
    if (algorithm == "mla") algorithm = "mla:" + std::to_string(o.depth > 0 ? o.depth : 3);
    const SolverSpec solver = make_solver(o, algorithm);
    const auto start = std::chrono::steady_clock::now();
    const ParetoResult result = pareto_front(s, o.k2, solver, parse_mode(o.budget_mode));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const fs::path dir = output_dir(o);
    const std::string stem = fmt::format("{}_{}_pareto", s.name, file_tag(solver.tag()));
    write_file(dir / (stem + ".csv"), [&](std::ostream& out) { write_pareto_csv(out, result); });

    json summary = {{"scenario", s.name},   {"algorithm", solver.tag()}, {"k2", o.k2},
                    {"budget_mode", o.budget_mode}, {"wall_seconds", wall}, {"seed", o.seed}};
    json points = json::array();
    for (const ParetoEntry& e : result.raw) {
        json p = {{"epsilon", e.epsilon}, {"status", e.status}};
        if (e.point) p["objectives"] = objectives_json(e.point->objectives);
        if (!e.message.empty()) p["message"] = e.message;
        points.push_back(p);
    }
    summary["points"] = points;

    if (!result.filtered.empty()) {
        const auto& f = result.filtered;
        const std::vector<std::pair<std::string, const ParetoPoint*>> picks{
            {"min_coec", &f.front()}, {"middle", &f[f.size() / 2]}, {"min_tdl", &f.back()}};
        for (const auto& [name, point] : picks) {
            write_file(dir / (stem + "_" + name + "_schedule.csv"),
                       [&](std::ostream& out) { write_schedule_csv(out, point->schedule, s); });
        }
    }
    write_file(dir / (stem + "_summary.json"), [&](std::ostream& out) { out << summary.dump(2) << '\n'; });

    if (!o.quiet) {
        for (const ParetoEntry& e : result.raw) {
            if (e.point) {
                std::cout << fmt::format("eps {:9.3f}  coec {:10.3f}  tdl {:9.3f}  {}\n", e.epsilon,
                                         e.point->objectives.coec, e.point->objectives.tdl, e.status);
            } else {
                std::cout << fmt::format("eps {:9.3f}  {}  {}\n", e.epsilon, e.status, e.message);
            }
        }
        std::cout << fmt::format("wall {:.3f} s\nwrote {}\n", wall, (dir / (stem + ".csv")).string());
    }
    return 0;
}

int cmd_bench(const Options& o) {
    std::vector<BenchRow> rows;
    for (int c : o.cases) {
        if (c < 1 || c > 5) throw HemuError(ErrorKind::invalid_argument, "case ids run from 1 to 5");
        const Scenario s = load_scenario((fs::path(o.scenario_dir) / fmt::format("case{}.scenario", c)).string());
        const Problem problem(s, Objective::coec);
        std::optional<double> reference;
        for (const std::string& algorithm : o.algorithms) {
            BenchRow row;
            row.case_name = s.name;
            row.states = problem.grid().cardinality();
            row.decisions = nominal_decision_count(s);
            const SolverSpec solver = make_solver(o, algorithm);
            row.algorithm = solver.tag();
            const auto start = std::chrono::steady_clock::now();
            try {
                const SolveResult result = solve(problem, solver);
                row.status = "ok";
                row.coec = result.schedule.objectives.coec;
                row.tdl = result.schedule.objectives.tdl;
                row.work = result.work;
                if (result.adp) {
                    row.iterations = result.adp->iterations_run;
                    row.visited_per_iter = result.adp->max_visited_per_iteration;
                } else {
                    reference = row.coec;
                }
            } catch (const HemuError& e) {
                row.status = std::string("error:") + to_string(e.kind());
            }
            row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (row.status == "ok" && reference && row.coec != 0.0) row.optimality_pct = 100.0 * *reference / row.coec;
            if (!o.quiet) {
                std::cout << fmt::format("{} {:6} {:8} coec {:10.3f}  {:.3f} s\n", row.case_name, row.algorithm,
                                         row.status, row.coec, row.wall_seconds)
                          << std::flush;
            }
            rows.push_back(row);
        }
    }
    const fs::path dir = output_dir(o);
    write_file(dir / "bench.csv", [&](std::ostream& out) { write_bench_csv(out, rows); });
    if (!o.quiet) std::cout << "wrote " << (dir / "bench.csv").string() << '\n';
    return 0;
}

int cmd_oracle(const Options& o) {
    const Scenario s = load_scenario(o.scenario);
    OracleOptions opts;
    opts.objective = parse_objective(o.objective);
    opts.cap = o.cap;
    const OracleResult r = brute_force_oracle(s, opts);
    const fs::path dir = output_dir(o);
    const std::string stem = fmt::format("{}_oracle_{}", s.name, o.objective);
    write_file(dir / (stem + "_schedule.csv"), [&](std::ostream& out) { write_schedule_csv(out, r.schedule, s); });
    std::cout << fmt::format("{} oracle {}: cost {:.6f}  sequences {}  estimate {:.0f}\n", s.name, o.objective, r.cost,
                             r.sequences, r.estimate);
    for (std::size_t t = 0; t < r.schedule.decisions.size(); ++t) {
        const Decision& d = r.schedule.decisions[t];
        std::cout << fmt::format("  t={:<3} dsoc_steps={:+d} on=0x{:x} ac={} ewh={}\n", t, d.battery_steps,
                                 d.appliance_on, d.ac_level, d.ewh_level);
    }
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Home energy scheduler: exact DP and look-ahead ADP with epsilon-constrained Pareto sweeps"};
    app.require_subcommand(1);
    Options o;

    const auto add_scenario = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", o.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    };
    const auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("--depth", o.depth, "Look-ahead depth for --algorithm mla")->check(CLI::PositiveNumber);
        cmd->add_option("--iterations", o.iterations, "ADP iterations")->check(CLI::PositiveNumber);
        cmd->add_option("--memory-budget", o.memory_budget, "DP table budget, e.g. 2G or 512M");
        cmd->add_option("--discount", o.discount, "ADP discount factor in (0, 1]");
        cmd->add_flag("--no-reduced-set", o.no_reduced_set, "Use the full decision set inside the look-ahead");
        cmd->add_option("--seed", o.seed, "Recorded in the summary; the solvers are deterministic");
    };
    const auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", o.out_dir, "Output directory (default $HEMU_OUT_DIR or ./out)");
        cmd->add_flag("--quiet", o.quiet, "Only write files");
    };

    auto* solve_cmd = app.add_subcommand("solve", "Single-objective schedule");
    add_scenario(solve_cmd);
    solve_cmd->add_option("--algorithm", o.algorithm, "dp, ola, tla, mla or mla:<l>");
    solve_cmd->add_option("--objective", o.objective, "coec or tdl");
    solve_cmd->add_option("--epsilon", o.epsilon, "Optional discomfort budget");
    solve_cmd->add_option("--budget-mode", o.budget_mode, "per_slot or accumulated");
    add_solver(solve_cmd);
    add_out(solve_cmd);

    auto* pareto_cmd = app.add_subcommand("pareto", "Epsilon-constrained Pareto sweep");
    add_scenario(pareto_cmd);
    pareto_cmd->add_option("--algorithm", o.algorithm, "dp, ola, tla, mla or mla:<l>");
    pareto_cmd->add_option("--k2", o.k2, "Number of budget intervals")->check(CLI::PositiveNumber);
    pareto_cmd->add_option("--budget-mode", o.budget_mode, "per_slot or accumulated");
    add_solver(pareto_cmd);
    add_out(pareto_cmd);

    auto* bench_cmd = app.add_subcommand("bench", "Cost and work table over the shipped cases");
    bench_cmd->add_option("--case", o.cases, "Case ids (1-5)")->delimiter(',');
    bench_cmd->add_option("--algorithms", o.algorithms, "Algorithms")->delimiter(',');
    bench_cmd->add_option("--scenario-dir", o.scenario_dir, "Directory with case<N>.scenario");
    add_solver(bench_cmd);
    add_out(bench_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive enumeration for toy scenarios");
    add_scenario(oracle_cmd);
    oracle_cmd->add_option("--cap", o.cap, "Largest enumeration allowed");
    oracle_cmd->add_option("--objective", o.objective, "coec or tdl");
    add_out(oracle_cmd);

    auto* validate_cmd = app.add_subcommand("validate", "Load and check a scenario");
    add_scenario(validate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*solve_cmd) return cmd_solve(o);
        if (*pareto_cmd) return cmd_pareto(o);
        if (*bench_cmd) return cmd_bench(o);
        if (*oracle_cmd) return cmd_oracle(o);
        if (*validate_cmd) return cmd_validate(o);
    } catch (const HemuError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}

}  // namespace hemu
