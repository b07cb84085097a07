#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hemu/adp.hpp"
#include "hemu/objectives.hpp"
#include "hemu/pareto.hpp"
#include "hemu/scenario.hpp"

namespace hemu {

/// Per-slot schedule table. Header:
/// slot,time,price,feed_in,pv_kw,uncontrollable_kw,outdoor_c,water_draw_kg_per_h,
/// soc,dsoc,battery_kw,<name>_on,<name>_kw...,ac_kw,indoor_c,ewh_kw,water_c,
/// load_kw,stage_coec,stage_tdl
/// States are taken at the start of each slot. Throws invalid-argument if the
/// stage columns do not add up to the schedule totals.
void write_schedule_csv(std::ostream& out, const Schedule& schedule, const Scenario& scenario);
std::string schedule_csv_header(const Scenario& scenario);

/// k,feasible,cost,stepsize,visited,evaluations
void write_convergence_csv(std::ostream& out, const AdpRunReport& report);

/// epsilon,coec,tdl,solver,status -- one row per sweep level.
void write_pareto_csv(std::ostream& out, const ParetoResult& result);

struct BenchRow {
    std::string case_name;
    std::size_t states = 0;
    std::size_t decisions = 0;
    std::string algorithm;
    int iterations = 0;
    std::string status;
    double coec = 0.0;
    double tdl = 0.0;
    double optimality_pct = -1.0;  ///< negative when there is no DP reference
    std::uint64_t work = 0;
    std::size_t visited_per_iter = 0;
    double wall_seconds = 0.0;
};

inline constexpr const char* kBenchHeader =
    "case,states,decisions,algorithm,iterations,status,coec,tdl,optimality_pct,work,visited_per_iter,wall_s";
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Clock time of the start of slot t as "HH:MM".
std::string slot_time(int t, double slot_hours);

}  // namespace hemu
