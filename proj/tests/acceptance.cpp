// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hemu/adp.hpp"
#include "hemu/error.hpp"
#include "hemu/exact_dp.hpp"
#include "hemu/pareto.hpp"
#include "hemu/report.hpp"
#include "hemu/scenario_io.hpp"

using namespace hemu;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Scenario shipped(int n) {
    return load_scenario(std::string(HEMU_SOURCE_DIR) + "/scenarios/case" + std::to_string(n) + ".scenario");
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
    Outcome out;
    const auto t0 = Clock::now();
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("%s %d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
}

// Same generator as the unit tests: T <= 6, at most `cap` enumerable sequences.
Scenario random_toy(std::mt19937_64& rng, double cap) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const int T = 2 + static_cast<int>(rng() % 5);
        Scenario s;
        s.name = "toy";
        s.horizon = {T, 0.5};
        for (int t = 0; t < T; ++t) {
            s.tariff.push_back(TariffSlot{std::round(5.0 + 25.0 * unit(rng)), 6.0});
            s.exogenous.push_back(ExogenousSlot{std::round(30.0 * unit(rng)) / 10.0,
                                                0.2 + std::round(10.0 * unit(rng)) / 10.0,
                                                std::round(200.0 + 80.0 * unit(rng)) / 10.0,
                                                unit(rng) < 0.2 ? 85.0 : std::round(40.0 * unit(rng)) / 10.0});
        }
        if (unit(rng) < 0.5) {
            BatterySetup b;
            b.initial_soc = 0.2 + 0.1 * static_cast<double>(rng() % 7);
            b.config.replacement_cost = unit(rng) < 0.5 ? 150000.0 : 1500.0;
            s.battery = b;
        }
        const int n_app = static_cast<int>(rng() % 3);
        for (int a = 0; a < n_app; ++a) {
            const int start = static_cast<int>(rng() % static_cast<unsigned>(T));
            const int end = start + static_cast<int>(rng() % static_cast<unsigned>(T - start));
            const int len = end - start + 1;
            if (rng() % 2 == 0) {
                std::vector<double> profile;
                const int dur = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(len, 3)));
                for (int k = 0; k < dur; ++k) profile.push_back(0.3 + std::round(20.0 * unit(rng)) / 10.0);
                s.appliances.emplace_back(NonInterruptibleAppliance{"ni" + std::to_string(a), profile, start, end});
            } else {
                const int need = 1 + static_cast<int>(rng() % static_cast<unsigned>(len));
                s.appliances.emplace_back(
                    InterruptibleAppliance{"in" + std::to_string(a), 1.0 + std::round(30.0 * unit(rng)) / 10.0, start, end, need});
            }
        }
        if (unit(rng) < 0.5) {
            AcSetup ac;
            ac.initial_temp_c = 20.0 + 0.5 * static_cast<double>(rng() % 9);
            s.ac = ac;
        }
        if (unit(rng) < 0.5) {
            EwhSetup ewh;
            ewh.initial_temp_c = 55.0 + static_cast<double>(rng() % 11);
            s.ewh = ewh;
        }
        if (oracle_size_estimate(s) <= cap) return s;
    }
}

/// Case 5 with constant weather, no hot-water draw and the given start temperatures.
Scenario steady_case5(double outdoor, double indoor0, double water0) {
    Scenario s = shipped(5);
    for (auto& e : s.exogenous) {
        e.outdoor_temp_c = outdoor;
        e.water_draw_kg_per_h = 0.0;
    }
    s.ac->initial_temp_c = indoor0;
    s.ewh->initial_temp_c = water0;
    return s;
}

/// Rolls forward with the battery idle and both thermal devices off,
/// deferring appliances while allowed.
Schedule idle_thermal_schedule(const Scenario& s) {
    SystemState st = initial_state(s);
    std::vector<Decision> ds;
    for (int t = 0; t < s.slots(); ++t) {
        const Decision* pick = nullptr;
        const auto options = feasible_decisions(st, s);
        for (const Decision& d : options) {
            if (d.battery_steps == 0 && d.ac_level == 0 && d.ewh_level == 0) {
                pick = &d;
                break;
            }
        }
        if (!pick) throw HemuError(ErrorKind::dead_end, "thermal devices cannot stay off", t);
        ds.push_back(*pick);
        st = system_transition(st, ds.back(), s);
    }
    return evaluate_schedule(ds, s);
}

template <class F>
std::string csv(F&& write) {
    std::ostringstream out;
    write(out);
    return out.str();
}

}  // namespace

int main() {
    report(1, "state and decision cardinality", [] {
        const std::size_t states[] = {180, 1620, 17820, 11340, 124740};
        const std::size_t decisions[] = {8, 40, 80, 280, 560};
        Outcome out;
        for (int c = 1; c <= 5; ++c) {
            const Scenario s = shipped(c);
            const std::size_t n = StateGrid(s, 1).cardinality();
            const std::size_t d = nominal_decision_count(s);
            out.pass = out.pass && n == states[c - 1] && d == decisions[c - 1];
            out.detail += fmt::format("case{} {}/{} ", c, n, d);
        }
        return out;
    });

    report(2, "oracle equivalence on 50 random toys", [] {
        std::mt19937_64 rng(20200611);
        int compared = 0, infeasible = 0, mismatches = 0;
        double worst = 0.0;
        while (compared < 50) {
            const Scenario s = random_toy(rng, 1e6);
            std::optional<OracleResult> oracle;
            try {
                oracle = brute_force_oracle(s);
            } catch (const HemuError& e) {
                if (e.kind() != ErrorKind::infeasible_scenario) throw;
                ++infeasible;
                continue;
            }
            const Problem p(s, Objective::coec);
            const ValueTable table = backward_solve(p);
            const double dp = table.value(0, p.initial_index());
            AdpConfig cfg;
            cfg.lookahead_depth = s.slots();
            cfg.discount = 1.0;
            cfg.reduced_set_enabled = false;
            cfg.max_iterations = 1;
            const AdpRunReport run = run_adp(p, cfg);
            const double mla = run.iterations.at(0).cost;
            if (dp != oracle->cost) ++mismatches;
            const double gap = std::abs(mla - dp);
            worst = std::max(worst, gap);
            if (gap > 1e-9) ++mismatches;
            ++compared;
        }
        return Outcome{mismatches == 0,
                       fmt::format("{} scenarios, DP == oracle exactly, worst |MLA - DP| {:.1e}, {} infeasible skipped",
                                   compared, worst, infeasible)};
    });

    report(3, "look-ahead runs never beat the DP optimum on cases 1-4", [] {
        Outcome out;
        int runs = 0;
        for (int c = 1; c <= 4; ++c) {
            const Problem p(shipped(c), Objective::coec);
            const double optimum = extract_schedule(backward_solve(p), p).objectives.coec;
            std::string line = fmt::format("case{} dp {:.2f}:", c, optimum);
            for (const char* algo : {"ola", "tla", "mla:3"}) {
                for (int iters : {10, 100, 500}) {
                    SolverSpec spec = SolverSpec::parse(algo);
                    spec.adp.max_iterations = iters;
                    const double cost = solve(p, spec).schedule.objectives.coec;
                    out.pass = out.pass && cost >= optimum - 1e-9;
                    ++runs;
                    if (iters == 500) line += fmt::format(" {} {:.1f}%", algo, 100.0 * optimum / cost);
                }
            }
            out.detail += line + "; ";
        }
        out.detail += fmt::format("{} runs", runs);
        return out;
    });

    report(4, "discomfort range with both thermal devices", [] {
        const Scenario s = shipped(5);
        std::mt19937_64 rng(48);
        int rollouts = 0, attempts = 0;
        double lo = 1e300, hi = -1e300;
        bool inside = true;
        while (rollouts < 1000 && attempts < 100000) {
            ++attempts;
            SystemState st = initial_state(s);
            std::vector<Decision> ds;
            for (int t = 0; t < s.slots(); ++t) {
                const auto options = enumerate_feasible_decisions(st, s);
                if (options.empty()) break;
                ds.push_back(options[rng() % options.size()]);
                st = system_transition(st, ds.back(), s);
            }
            if (ds.size() != static_cast<std::size_t>(s.slots())) continue;
            const double tdl = evaluate_schedule(ds, s).objectives.tdl;
            lo = std::min(lo, tdl);
            hi = std::max(hi, tdl);
            inside = inside && tdl >= 96.0 && tdl <= 96.0 * std::exp(1.0);
            ++rollouts;
        }
        const double ideal = idle_thermal_schedule(steady_case5(22.0, 22.0, 60.0)).objectives.tdl;
        const double edge = idle_thermal_schedule(steady_case5(24.0, 24.0, 65.0)).objectives.tdl;
        const bool pass = rollouts >= 1000 && inside && ideal == 96.0 && std::abs(edge - 260.95) <= 0.01;
        return Outcome{pass, fmt::format("{} rollouts in [{:.2f}, {:.2f}], pinned at ideal {:.6f}, pinned at edge {:.4f}",
                                         rollouts, lo, hi, ideal, edge)};
    });

    report(5, "stepsize law", [] {
        Outcome out;
        for (int n : {10, 50, 200}) {
            AdpConfig cfg;
            cfg.max_iterations = n;
            const double ratio = stepsize(1, cfg) / stepsize(0, cfg);
            double worst = 0.0;
            for (int k = 1; k <= n; ++k) worst = std::max(worst, std::abs(stepsize(k, cfg) / stepsize(k - 1, cfg) - ratio));
            const double end_gap = std::abs(stepsize(n, cfg) - cfg.initial_stepsize / (2.0 * n));
            out.pass = out.pass && worst <= 1e-12 && end_gap <= 1e-12;
            out.detail += fmt::format("N={} ratio drift {:.1e} end gap {:.1e}; ", n, worst, end_gap);
        }
        return out;
    });

    report(6, "epsilon sweep on case 5 with mla:3 at 200 iterations", [] {
        const Scenario s = shipped(5);
        SolverSpec spec = SolverSpec::parse("mla:3");
        spec.adp.max_iterations = 200;
        const ParetoResult front = pareto_front(s, 6, spec);
        bool pass = front.filtered.size() <= 7;
        bool budgets = true, monotone = true, ideal = false;
        double prev = -1e300;
        for (const ParetoEntry& e : front.raw) {
            if (!e.point) continue;
            budgets = budgets && e.point->objectives.tdl <= e.epsilon + 1e-9;
            monotone = monotone && e.point->objectives.coec >= prev - 1e-9;
            prev = e.point->objectives.coec;
        }
        const ParetoEntry& last = front.raw.back();
        if (last.point && last.epsilon == 96.0) {
            ideal = true;
            for (int t = 0; t < s.slots(); ++t) {
                const ThermalState& th = last.point->schedule.states[static_cast<std::size_t>(t)].thermal;
                ideal = ideal && th.indoor_temp_c == 22.0 && th.water_temp_c == 60.0;
            }
        }
        pass = pass && budgets && monotone && ideal;
        return Outcome{pass, fmt::format("{} points, tdl<=eps {}, coec monotone {}, eps=96 holds 22/60 {}",
                                         front.filtered.size(), budgets, monotone, ideal)};
    });

    report(7, "scaling: DP work super-linear, ADP visits at most T states per iteration", [] {
        Outcome out;
        double prev_per_state = 0.0;
        for (int c = 1; c <= 4; ++c) {
            const Problem p(shipped(c), Objective::coec);
            const auto t0 = Clock::now();
            const ValueTable table = backward_solve(p);
            const double wall = seconds_since(t0);
            const double per_state = static_cast<double>(table.evaluations) / static_cast<double>(table.states);
            out.pass = out.pass && per_state > prev_per_state;
            prev_per_state = per_state;
            AdpConfig cfg;
            cfg.lookahead_depth = 2;
            cfg.max_iterations = 20;
            const AdpRunReport run = run_adp(p, cfg);
            out.pass = out.pass && run.max_visited_per_iteration <= static_cast<std::size_t>(p.horizon());
            out.detail += fmt::format("case{} N={} dp evals {} ({:.1f}/state, {:.3f} s) tla visited/iter {} evals/iter {}; ",
                                      c, table.states, table.evaluations, per_state, wall,
                                      run.max_visited_per_iteration, run.evaluations / run.iterations.size());
        }
        return out;
    });

    report(8, "bit-identical CSVs across two runs", [] {
        Outcome out;
        int compared = 0;
        for (int c : {1, 3, 4}) {
            const Scenario s = shipped(c);
            for (const char* algo : {"dp", "ola", "tla", "mla:3"}) {
                std::string first;
                for (int run = 0; run < 2; ++run) {
                    const Problem p(s, Objective::coec);
                    const SolveResult r = solve(p, SolverSpec::parse(algo));
                    std::string text = csv([&](std::ostream& o) { write_schedule_csv(o, r.schedule, s); });
                    if (r.adp) text += csv([&](std::ostream& o) { write_convergence_csv(o, *r.adp); });
                    if (run == 0) {
                        first = std::move(text);
                    } else {
                        out.pass = out.pass && text == first;
                        ++compared;
                    }
                }
            }
        }
        const Scenario s = shipped(4);
        const std::string a = csv([&](std::ostream& o) { write_pareto_csv(o, pareto_front(s, 6, SolverSpec::parse("tla"))); });
        const std::string b = csv([&](std::ostream& o) { write_pareto_csv(o, pareto_front(s, 6, SolverSpec::parse("tla"))); });
        out.pass = out.pass && a == b;
        out.detail = fmt::format("{} schedule/convergence pairs and one pareto pair identical: {}", compared + 1,
                                 out.pass ? "yes" : "no");
        return out;
    });

    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
