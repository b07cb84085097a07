#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hemu/adp.hpp"
#include "hemu/exact_dp.hpp"
#include "hemu/objectives.hpp"
#include "hemu/problem.hpp"

namespace hemu {

/// Which solver to run: exact DP or a look-ahead ADP of some depth.
struct SolverSpec {
    enum class Kind { dp, mla };
    Kind kind = Kind::dp;
    AdpConfig adp;  ///< used when kind == mla
    DpOptions dp;

    /// "dp", "ola", "tla" or "mla:<l>". Throws invalid-argument.
    static SolverSpec parse(const std::string& text);
    /// Canonical tag, e.g. "dp" or "mla:3".
    std::string tag() const;
};

struct SolveResult {
    Schedule schedule;
    std::string solver;
    std::optional<AdpRunReport> adp;
    std::uint64_t work = 0;  ///< decisions scored
    std::size_t states = 0;  ///< grid states per stage
};

/// Single-objective solve of `problem` with the chosen solver.
SolveResult solve(const Problem& problem, const SolverSpec& solver);

struct EpsilonSweep {
    int k2 = 0;
    double tdl_min = 0.0;
    double tdl_max = 0.0;
    std::vector<double> levels;  ///< strictly decreasing, k2 + 1 entries
};

/// eps_i = tdl_max - (tdl_max - tdl_min) / k2 * i. Throws invalid-range.
EpsilonSweep epsilon_levels(double tdl_min, double tdl_max, int k2);

struct ParetoPoint {
    double epsilon = 0.0;
    ObjectivePair objectives;
    Schedule schedule;
    std::string solver;
};

/// Minimises CoEC with discomfort bounded by epsilon. Infeasibility of the
/// constrained problem is reported as infeasible-budget.
ParetoPoint solve_epsilon_constrained(const Scenario& scenario, double epsilon, const SolverSpec& solver,
                                      BudgetMode mode = BudgetMode::per_slot);

struct ParetoEntry {
    double epsilon = 0.0;
    std::optional<ParetoPoint> point;
    std::string status;  ///< ok | dominated | duplicate | error:<kind>
    std::string message;
};

struct ParetoResult {
    EpsilonSweep sweep;
    std::vector<ParetoEntry> raw;       ///< one entry per level, epsilon descending
    std::vector<ParetoPoint> filtered;  ///< non-dominated, duplicates collapsed, epsilon descending
};

/// Sweeps the budget over [terms*T, terms*T*e]. For each level the cheapest
/// schedule found anywhere in the sweep that satisfies the level is kept,
/// then dominated and duplicate points are filtered out. A failing level is
/// recorded and the sweep continues.
ParetoResult pareto_front(const Scenario& scenario, int k2, const SolverSpec& solver,
                          BudgetMode mode = BudgetMode::per_slot);

/// True when `a` is no worse than `b` in both objectives and better in one.
bool dominates(const ObjectivePair& a, const ObjectivePair& b);

}  // namespace hemu
