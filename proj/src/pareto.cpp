#include "hemu/pareto.hpp"

#include <cmath>

#include "hemu/error.hpp"

namespace hemu {

SolverSpec SolverSpec::parse(const std::string& text) {
    SolverSpec spec;
    if (text == "dp") return spec;
    spec.kind = Kind::mla;
    if (text == "ola") {
        spec.adp.lookahead_depth = 1;
    } else if (text == "tla") {
        spec.adp.lookahead_depth = 2;
    } else if (text.rfind("mla:", 0) == 0) {
        const std::string digits = text.substr(4);
        std::size_t used = 0;
        int depth = 0;
        try {
            depth = std::stoi(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (digits.empty() || used != digits.size() || depth < 1) {
            throw HemuError(ErrorKind::invalid_argument, "bad look-ahead depth in '" + text + "'");
        }
        spec.adp.lookahead_depth = depth;
    } else {
        throw HemuError(ErrorKind::invalid_argument, "unknown algorithm '" + text + "' (dp, ola, tla, mla:<l>)");
    }
    return spec;
}

std::string SolverSpec::tag() const {
    if (kind == Kind::dp) return "dp";
    return "mla:" + std::to_string(adp.lookahead_depth);
}

SolveResult solve(const Problem& problem, const SolverSpec& solver) {
    SolveResult out;
    out.solver = solver.tag();
    out.states = problem.grid().cardinality();
    if (solver.kind == SolverSpec::Kind::dp) {
        const ValueTable table = backward_solve(problem, solver.dp);
        out.schedule = extract_schedule(table, problem);
        out.work = table.evaluations;
    } else {
        AdpRunReport report = run_adp(problem, solver.adp);
        out.schedule = report.schedule;
        out.work = report.evaluations;
        out.adp = std::move(report);
    }
    return out;
}

EpsilonSweep epsilon_levels(double tdl_min, double tdl_max, int k2) {
    if (!(tdl_max > tdl_min) || k2 < 1) {
        throw HemuError(ErrorKind::invalid_range, "need tdl_max > tdl_min and k2 >= 1");
    }
    EpsilonSweep sweep{k2, tdl_min, tdl_max, {}};
    const double width = (tdl_max - tdl_min) / k2;
    for (int i = 0; i <= k2; ++i) sweep.levels.push_back(tdl_max - width * i);
    // Pin the last level to the lower endpoint.
    sweep.levels.back() = tdl_min;
    return sweep;
}

ParetoPoint solve_epsilon_constrained(const Scenario& scenario, double epsilon, const SolverSpec& solver,
                                      BudgetMode mode) {
    try {
        Problem problem(scenario, Objective::coec, TdlBudget{epsilon, mode});
        SolveResult result = solve(problem, solver);
        ParetoPoint point;
        point.epsilon = epsilon;
        point.objectives = result.schedule.objectives;
        point.schedule = std::move(result.schedule);
        point.solver = result.solver;
        return point;
    } catch (const HemuError& e) {
        switch (e.kind()) {
        case ErrorKind::infeasible_scenario:
        case ErrorKind::dead_end:
        case ErrorKind::unreachable_initial_state:
            throw HemuError(ErrorKind::infeasible_budget, "budget " + std::to_string(epsilon) + " admits no schedule",
                            e.slot());
        default:
            throw;
        }
    }
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
    return a.coec <= b.coec && a.tdl <= b.tdl && (a.coec < b.coec || a.tdl < b.tdl);
}

ParetoResult pareto_front(const Scenario& scenario, int k2, const SolverSpec& solver, BudgetMode mode) {
    ParetoResult out;
    out.sweep = epsilon_levels(tdl_lower_bound(scenario), tdl_upper_bound(scenario), k2);

    std::vector<std::optional<ParetoPoint>> found;
    for (double eps : out.sweep.levels) {
        ParetoEntry entry;
        entry.epsilon = eps;
        try {
            found.push_back(solve_epsilon_constrained(scenario, eps, solver, mode));
        } catch (const HemuError& e) {
            found.emplace_back();
            entry.status = std::string("error:") + to_string(e.kind());
            entry.message = e.what();
        }
        out.raw.push_back(std::move(entry));
    }

    // Any schedule found in the sweep is feasible for every level it fits.
    for (std::size_t i = 0; i < found.size(); ++i) {
        if (!found[i]) continue;
        const double eps = out.raw[i].epsilon;
        std::size_t pick = i;
        for (std::size_t j = 0; j < found.size(); ++j) {
            if (!found[j] || found[j]->objectives.tdl > eps + 1e-9) continue;
            if (found[j]->objectives.coec < found[pick]->objectives.coec) pick = j;
        }
        ParetoPoint p = *found[pick];
        p.epsilon = eps;
        out.raw[i].point = std::move(p);
    }

    for (std::size_t i = 0; i < out.raw.size(); ++i) {
        ParetoEntry& entry = out.raw[i];
        if (!entry.point) continue;
        bool dominated = false;
        for (const ParetoEntry& other : out.raw) {
            if (other.point && dominates(other.point->objectives, entry.point->objectives)) dominated = true;
        }
        if (dominated) {
            entry.status = "dominated";
            continue;
        }
        bool duplicate = false;
        for (const ParetoPoint& kept : out.filtered) {
            if (kept.objectives == entry.point->objectives) duplicate = true;
        }
        if (duplicate) {
            entry.status = "duplicate";
            continue;
        }
        entry.status = "ok";
        out.filtered.push_back(*entry.point);
    }
    return out;
}

}  // namespace hemu
