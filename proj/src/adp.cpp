#include "hemu/adp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "hemu/error.hpp"

namespace hemu {

void validate(const AdpConfig& cfg) {
    if (cfg.lookahead_depth < 1) throw HemuError(ErrorKind::invalid_argument, "lookahead depth must be >= 1");
    if (cfg.max_iterations < 1) throw HemuError(ErrorKind::invalid_argument, "iterations must be >= 1");
    if (!(cfg.discount > 0.0 && cfg.discount <= 1.0)) {
        throw HemuError(ErrorKind::invalid_argument, "discount must lie in (0, 1]");
    }
    if (!(cfg.initial_stepsize > 0.0 && cfg.initial_stepsize <= 1.0)) {
        throw HemuError(ErrorKind::invalid_argument, "initial stepsize must lie in (0, 1]");
    }
    if (!(cfg.convergence_tol > 0.0)) throw HemuError(ErrorKind::invalid_argument, "tolerance must be positive");
}

double ValueApproximation::get(int t, std::size_t state) const {
    const auto& stage = stages_[static_cast<std::size_t>(t)];
    auto it = stage.find(state);
    return it == stage.end() ? 0.0 : it->second;
}

void ValueApproximation::set(int t, std::size_t state, double value) {
    stages_[static_cast<std::size_t>(t)][state] = value;
}

double stepsize(int k, const AdpConfig& cfg) {
    const double n = cfg.max_iterations;
    return cfg.initial_stepsize * std::pow(1.0 / (2.0 * n), static_cast<double>(k) / n);
}

void update_approximation(ValueApproximation& approx, int t, std::size_t state, double observed, double alpha) {
    const double old = approx.get(t, state);
    approx.set(t, state, (1.0 - alpha) * old + alpha * observed);
}

std::vector<Decision> reduced_decision_set(const SystemState& state, const Scenario& scenario) {
    std::vector<Decision> out;
    for (const Decision& d : enumerate_feasible_decisions(state, scenario)) {
        if (d.battery_steps == 0) out.push_back(d);
    }
    return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Lookahead {
public:
    Lookahead(const Problem& problem, const ValueApproximation& approx, const AdpConfig& cfg, int depth)
        : problem_(problem), approx_(approx), cfg_(cfg), horizon_(problem.horizon()),
          memo_(static_cast<std::size_t>(depth)) {}

    LookaheadResult root(int t, std::size_t state, int depth) {
        LookaheadResult out;
        out.value = kInf;
        problem_.for_each_decision(t, state, false, [&](DecisionCode code, double cost, std::size_t next) {
            ++evaluations_;
            const double v = cost + cfg_.discount * tail(t + 1, next, depth - 1);
            if (v < out.value) {
                out.value = v;
                out.decision = code;
                out.next_state = next;
                stage_cost_ = cost;
            }
        });
        out.evaluations = evaluations_;
        return out;
    }

    double stage_cost() const { return stage_cost_; }

private:
    double tail(int t, std::size_t state, int depth) {
        if (t >= horizon_) return 0.0;
        if (depth == 0) return approx_.get(t, state);
        auto& memo = memo_[static_cast<std::size_t>(depth)];
        if (auto it = memo.find(state); it != memo.end()) return it->second;
        double best = kInf;
        problem_.for_each_decision(t, state, cfg_.reduced_set_enabled, [&](DecisionCode, double cost, std::size_t next) {
            ++evaluations_;
            const double v = cost + cfg_.discount * tail(t + 1, next, depth - 1);
            if (v < best) best = v;
        });
        memo.emplace(state, best);
        return best;
    }

    const Problem& problem_;
    const ValueApproximation& approx_;
    const AdpConfig& cfg_;
    int horizon_;
    // memo_[d] caches subtrees with d levels left; each level is one slot.
    std::vector<std::unordered_map<std::size_t, double>> memo_;
    std::uint64_t evaluations_ = 0;
    double stage_cost_ = 0.0;
};

}  // namespace

LookaheadResult lookahead_value(const Problem& problem, const ValueApproximation& approx, int t, std::size_t state,
                                int depth, const AdpConfig& cfg) {
    if (depth < 1) throw HemuError(ErrorKind::invalid_argument, "lookahead depth must be >= 1");
    Lookahead search(problem, approx, cfg, depth);
    return search.root(t, state, depth);
}

AdpRunReport run_adp(const Problem& problem, const AdpConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const int horizon = problem.horizon();
    const std::size_t s0 = problem.initial_index();

    AdpRunReport report;
    ValueApproximation approx(horizon);
    double best = kInf;
    int streak = 0;
    bool have_previous = false;
    double previous = 0.0;
    int last_dead_end = -1;

    for (int k = 1; k <= cfg.max_iterations; ++k) {
        AdpIteration it;
        it.k = k;
        it.stepsize = stepsize(k, cfg);

        std::vector<Decision> decisions;
        decisions.reserve(static_cast<std::size_t>(horizon));
        std::size_t s = s0;
        double trajectory = 0.0;
        bool stuck = false;
        for (int t = 0; t < horizon; ++t) {
            Lookahead search(problem, approx, cfg, cfg.lookahead_depth);
            const LookaheadResult r = search.root(t, s, cfg.lookahead_depth);
            it.evaluations += r.evaluations;
            ++it.visited;
            if (!std::isfinite(r.value) || r.decision == kNoDecision) {
                approx.set(t, s, cfg.dead_end_penalty);
                it.dead_end_slot = t;
                last_dead_end = t;
                stuck = true;
                break;
            }
            update_approximation(approx, t, s, r.value, it.stepsize);
            trajectory += search.stage_cost();
            decisions.push_back(problem.decode_decision(r.decision));
            s = r.next_state;
        }
        report.evaluations += it.evaluations;
        report.max_visited_per_iteration = std::max(report.max_visited_per_iteration, it.visited);

        if (stuck) {
            it.cost = std::numeric_limits<double>::quiet_NaN();
            have_previous = false;
            streak = 0;
        } else {
            it.feasible = true;
            it.cost = trajectory;
            if (trajectory < best) {
                best = trajectory;
                report.best_iteration = k;
                report.schedule = evaluate_schedule(decisions, problem.scenario());
            }
            if (have_previous) {
                const double scale = std::max(std::abs(previous), 1e-12);
                streak = std::abs(trajectory - previous) / scale < cfg.convergence_tol ? streak + 1 : 0;
            }
            previous = trajectory;
            have_previous = true;
        }
        report.iterations.push_back(it);
        report.iterations_run = k;
        if (streak >= 3) {
            report.converged = true;
            break;
        }
    }

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!std::isfinite(best)) {
        throw HemuError(ErrorKind::dead_end, "no iteration reached the horizon", last_dead_end);
    }
    report.best_cost = best;
    return report;
}

}  // namespace hemu
