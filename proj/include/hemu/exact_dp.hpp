#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hemu/objectives.hpp"
#include "hemu/problem.hpp"

namespace hemu {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Dense cost-to-go arrays, one row of `states` entries per stage.
/// Row T is all zeros; states without a feasible decision hold +inf.
struct ValueTable {
    int horizon = 0;
    std::size_t states = 0;
    std::vector<double> values;      // (T + 1) * states
    std::vector<DecisionCode> best;  // T * states
    std::uint64_t evaluations = 0;   // decisions scored during the sweep

    double value(int t, std::size_t s) const { return values[static_cast<std::size_t>(t) * states + s]; }
    DecisionCode decision(int t, std::size_t s) const { return best[static_cast<std::size_t>(t) * states + s]; }
};

struct DpOptions {
    std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

/// Bytes held by the ValueTable of `problem`.
std::size_t dp_memory_bytes(const Problem& problem);

/// Backward induction over every grid state. Ties keep the first decision in
/// canonical order. Throws budget-exceeded when the table would not fit and
/// infeasible-scenario when the initial state has no finite cost-to-go.
ValueTable backward_solve(const Problem& problem, const DpOptions& options = {});

/// Follows the stored argmins from the initial state and rescores the result
/// with evaluate_schedule. Throws unreachable-initial-state.
Schedule extract_schedule(const ValueTable& table, const Problem& problem);

struct OracleOptions {
    Objective objective = Objective::coec;
    double cap = 1e7;
    /// per_slot budgets prune exactly like the solvers; accumulated budgets
    /// are checked as the plain horizon constraint TDL <= epsilon.
    std::optional<TdlBudget> budget;
};

struct OracleResult {
    double cost = 0.0;
    Schedule schedule;
    std::uint64_t sequences = 0;  // complete feasible sequences visited
    double estimate = 0.0;        // product of per-slot decision bounds
};

/// Product of per-slot decision bounds; an upper bound on the number of
/// sequences the oracle would enumerate.
double oracle_size_estimate(const Scenario& scenario);

/// Exhaustive enumeration on the pure route. Throws too-large when the
/// estimate exceeds the cap and infeasible-scenario when no sequence exists.
OracleResult brute_force_oracle(const Scenario& scenario, const OracleOptions& options = {});

}  // namespace hemu
