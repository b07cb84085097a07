#include "hemu/exact_dp.hpp"

#include <cmath>
#include <string>

#include "hemu/error.hpp"

namespace hemu {

std::size_t dp_memory_bytes(const Problem& problem) {
    const std::size_t n = problem.grid().cardinality();
    const auto T = static_cast<std::size_t>(problem.horizon());
    return (T + 1) * n * sizeof(double) + T * n * sizeof(DecisionCode);
}

ValueTable backward_solve(const Problem& problem, const DpOptions& options) {
    const std::size_t bytes = dp_memory_bytes(problem);
    if (bytes > options.memory_budget_bytes) {
        throw HemuError(ErrorKind::budget_exceeded,
                        "value table needs " + std::to_string(bytes) + " bytes for " +
                            std::to_string(problem.grid().cardinality()) + " states per stage, budget is " +
                            std::to_string(options.memory_budget_bytes));
    }
    // Validate the start before spending time on the sweep.
    const std::size_t s0 = problem.initial_index();

    ValueTable table;
    table.horizon = problem.horizon();
    table.states = problem.grid().cardinality();
    const std::size_t n = table.states;
    const auto T = static_cast<std::size_t>(table.horizon);
    table.values.assign((T + 1) * n, 0.0);
    table.best.assign(T * n, kNoDecision);

    std::uint64_t evaluations = 0;
    for (int t = table.horizon - 1; t >= 0; --t) {
        const double* next_row = table.values.data() + (static_cast<std::size_t>(t) + 1) * n;
        double* row = table.values.data() + static_cast<std::size_t>(t) * n;
        DecisionCode* best_row = table.best.data() + static_cast<std::size_t>(t) * n;
        for (std::size_t s = 0; s < n; ++s) {
            double best = kUnreachable;
            DecisionCode arg = kNoDecision;
            problem.for_each_decision(t, s, false, [&](DecisionCode code, double cost, std::size_t next) {
                ++evaluations;
                const double v = cost + next_row[next];
                if (v < best) {
                    best = v;
                    arg = code;
                }
            });
            row[s] = best;
            best_row[s] = arg;
        }
    }
    table.evaluations = evaluations;

    if (!std::isfinite(table.value(0, s0))) {
        throw HemuError(ErrorKind::infeasible_scenario, "no feasible schedule from the initial state", 0);
    }
    return table;
}

Schedule extract_schedule(const ValueTable& table, const Problem& problem) {
    std::size_t s;
    try {
        s = problem.initial_index();
    } catch (const HemuError& e) {
        throw HemuError(ErrorKind::unreachable_initial_state, e.what(), 0);
    }
    if (table.states != problem.grid().cardinality() || table.horizon != problem.horizon()) {
        throw HemuError(ErrorKind::invalid_argument, "value table does not belong to this problem");
    }
    if (!std::isfinite(table.value(0, s))) {
        throw HemuError(ErrorKind::unreachable_initial_state, "initial state has no finite cost-to-go", 0);
    }

    std::vector<Decision> decisions;
    decisions.reserve(static_cast<std::size_t>(table.horizon));
    for (int t = 0; t < table.horizon; ++t) {
        const DecisionCode want = table.decision(t, s);
        std::size_t successor = 0;
        bool found = false;
        problem.for_each_decision(t, s, false, [&](DecisionCode code, double, std::size_t next) {
            if (code == want) {
                successor = next;
                found = true;
            }
        });
        if (!found) throw HemuError(ErrorKind::unreachable_initial_state, "stored decision is not feasible", t);
        decisions.push_back(problem.decode_decision(want));
        s = successor;
    }
    return evaluate_schedule(decisions, problem.scenario());
}

// ---------------------------------------------------------------------------

double oracle_size_estimate(const Scenario& scenario) {
    double estimate = 1.0;
    for (int t = 0; t < scenario.slots(); ++t) estimate *= static_cast<double>(slot_decision_bound(scenario, t));
    return estimate;
}

namespace {

struct OracleSearch {
    const Scenario& scenario;
    const OracleOptions& options;
    int horizon;
    double slot_cap = 0.0;
    std::uint64_t sequences = 0;

    double stage_cost(const SystemState& s, const Decision& d) const {
        return options.objective == Objective::coec ? stage_cost_coec(s, d, scenario) : tdl_stage(s.thermal, scenario);
    }

    // Cost-to-go summed back to front, like the backward sweep, so equal
    // schedules give bit-identical totals. `spent` is the discomfort so far.
    double search(const SystemState& s, double spent, std::vector<Decision>& best_suffix) {
        const int t = s.slot;
        if (t == horizon) {
            if (options.budget && options.budget->mode == BudgetMode::accumulated &&
                spent > options.budget->epsilon + 1e-9) {
                return kUnreachable;
            }
            ++sequences;
            best_suffix.clear();
            return 0.0;
        }
        const double here = tdl_stage(s.thermal, scenario);
        double best = kUnreachable;
        std::vector<Decision> suffix;
        for (const Decision& d : enumerate_feasible_decisions(s, scenario)) {
            SystemState next = system_transition(s, d, scenario);
            if (options.budget && options.budget->mode == BudgetMode::per_slot && t + 1 < horizon &&
                tdl_stage(next.thermal, scenario) > slot_cap) {
                continue;
            }
            const double g = stage_cost(s, d);
            const double v = g + search(next, spent + here, suffix);
            if (v < best) {
                best = v;
                best_suffix.clear();
                best_suffix.push_back(d);
                best_suffix.insert(best_suffix.end(), suffix.begin(), suffix.end());
            }
        }
        return best;
    }
};

}  // namespace

OracleResult brute_force_oracle(const Scenario& scenario, const OracleOptions& options) {
    validate(scenario);
    OracleResult out;
    out.estimate = oracle_size_estimate(scenario);
    if (out.estimate > options.cap) {
        throw HemuError(ErrorKind::too_large, "estimated " + std::to_string(out.estimate) +
                                                  " decision sequences exceeds the cap of " +
                                                  std::to_string(options.cap));
    }
    OracleSearch search{scenario, options, scenario.slots()};
    const SystemState s0 = initial_state(scenario);
    if (options.budget && options.budget->mode == BudgetMode::per_slot) {
        search.slot_cap = per_slot_tdl_cap(options.budget->epsilon, scenario.slots());
        if (tdl_stage(s0.thermal, scenario) > search.slot_cap) {
            throw HemuError(ErrorKind::infeasible_budget, "initial temperatures exceed the per-slot budget", 0);
        }
    }
    std::vector<Decision> best;
    out.cost = search.search(s0, 0.0, best);
    out.sequences = search.sequences;
    if (!std::isfinite(out.cost)) {
        throw HemuError(ErrorKind::infeasible_scenario, "no feasible decision sequence");
    }
    out.schedule = evaluate_schedule(best, scenario);
    return out;
}

}  // namespace hemu
