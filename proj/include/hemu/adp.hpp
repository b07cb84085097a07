#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hemu/objectives.hpp"
#include "hemu/problem.hpp"

namespace hemu {

struct AdpConfig {
    int lookahead_depth = 1;
    int max_iterations = 100;
    double discount = 0.99;
    double initial_stepsize = 1.0;
    double convergence_tol = 1e-4;
    bool reduced_set_enabled = true;
    std::uint64_t rng_seed = 0;  ///< reserved; the algorithm is deterministic
    /// Value written for a state where a forward pass got stuck.
    double dead_end_penalty = 1e9;
};

/// Throws invalid-argument when a field is out of range.
void validate(const AdpConfig& cfg);

/// Sparse per-stage table of approximate cost-to-go; unvisited states read 0.
class ValueApproximation {
public:
    explicit ValueApproximation(int horizon = 0) : stages_(static_cast<std::size_t>(horizon) + 1) {}

    double get(int t, std::size_t state) const;
    void set(int t, std::size_t state, double value);
    std::size_t size(int t) const { return stages_[static_cast<std::size_t>(t)].size(); }
    int horizon() const { return static_cast<int>(stages_.size()) - 1; }

private:
    std::vector<std::unordered_map<std::size_t, double>> stages_;
};

/// alpha^k = alpha^0 * (1 / (2 iterMax))^(k / iterMax).
double stepsize(int k, const AdpConfig& cfg);

struct LookaheadResult {
    DecisionCode decision = kNoDecision;
    double value = 0.0;           ///< +inf when no decision is feasible
    std::size_t next_state = 0;
    std::uint64_t evaluations = 0;
};

/// Depth-limited minimisation from (t, state). The leaf reads the
/// approximation at t + depth (0 at the horizon). Inner levels use the
/// reduced decision set when enabled; the root always uses the full set.
LookaheadResult lookahead_value(const Problem& problem, const ValueApproximation& approx, int t, std::size_t state,
                                int depth, const AdpConfig& cfg);

/// J(s) <- (1 - alpha) J(s) + alpha v.
void update_approximation(ValueApproximation& approx, int t, std::size_t state, double observed, double alpha);

/// Feasible decisions with the battery held at a zero SOC delta.
std::vector<Decision> reduced_decision_set(const SystemState& state, const Scenario& scenario);

struct AdpIteration {
    int k = 0;
    bool feasible = false;
    double cost = 0.0;      ///< trajectory cost in the problem's objective; NaN if stuck
    double stepsize = 0.0;
    std::size_t visited = 0;
    std::uint64_t evaluations = 0;
    int dead_end_slot = -1;
};

struct AdpRunReport {
    std::vector<AdpIteration> iterations;
    Schedule schedule;
    double best_cost = 0.0;  ///< best trajectory cost in the problem's objective
    int best_iteration = 0;
    int iterations_run = 0;
    bool converged = false;
    double wall_seconds = 0.0;
    std::size_t max_visited_per_iteration = 0;
    std::uint64_t evaluations = 0;
};

/// Forward iterations of the look-ahead policy with tabular updates. Returns
/// the cheapest complete trajectory seen. Throws dead-end (with slot) when no
/// iteration reached the horizon.
AdpRunReport run_adp(const Problem& problem, const AdpConfig& cfg);

}  // namespace hemu
