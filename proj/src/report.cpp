#include "hemu/report.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hemu/error.hpp"

namespace hemu {

namespace {

std::string num(double v) {
    if (v == 0.0) v = 0.0;  // drop negative zero
    return fmt::format("{:.6f}", v);
}

}  // namespace

std::string slot_time(int t, double slot_hours) {
    const long minutes = std::lround(t * slot_hours * 60.0);
    return fmt::format("{:02d}:{:02d}", (minutes / 60) % 24, minutes % 60);
}

std::string schedule_csv_header(const Scenario& scenario) {
    std::string h = "slot,time,price,feed_in,pv_kw,uncontrollable_kw,outdoor_c,water_draw_kg_per_h,soc,dsoc,battery_kw";
    for (const auto& a : scenario.appliances) {
        h += "," + appliance_name(a) + "_on," + appliance_name(a) + "_kw";
    }
    h += ",ac_kw,indoor_c,ewh_kw,water_c,load_kw,stage_coec,stage_tdl";
    return h;
}

void write_schedule_csv(std::ostream& out, const Schedule& schedule, const Scenario& scenario) {
    double coec = 0.0, tdl = 0.0;
    for (const auto& s : schedule.stages) {
        coec += s.coec;
        tdl += s.tdl;
    }
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (!close(coec, schedule.objectives.coec) || !close(tdl, schedule.objectives.tdl)) {
        throw HemuError(ErrorKind::invalid_argument, "stage columns do not add up to the schedule totals");
    }

    out << schedule_csv_header(scenario) << '\n';
    for (std::size_t t = 0; t < schedule.decisions.size(); ++t) {
        const SystemState& s = schedule.states[t];
        const Decision& d = schedule.decisions[t];
        const TariffSlot& tariff = scenario.tariff[t];
        const ExogenousSlot& exo = scenario.exogenous[t];
        std::string row = fmt::format("{},{},{},{},{},{},{},{}", t, slot_time(static_cast<int>(t), scenario.dt()),
                                      num(tariff.price), num(tariff.feed_in), num(exo.pv_kw),
                                      num(exo.uncontrollable_kw), num(exo.outdoor_temp_c),
                                      num(exo.water_draw_kg_per_h));
        row += "," + num(s.battery.soc) + "," + num(battery_dsoc(d, scenario)) + "," +
               num(decision_battery_power(s, d, scenario));
        for (std::size_t i = 0; i < scenario.appliances.size(); ++i) {
            const bool on = d.appliance(i);
            const double kw = on ? appliance_power_kw(scenario.appliances[i], s.appliances[i].progress) : 0.0;
            row += fmt::format(",{},{}", on ? 1 : 0, num(kw));
        }
        row += "," + num(ac_power_kw(d, scenario)) + "," + num(s.thermal.indoor_temp_c) + "," +
               num(ewh_power_kw(d, scenario)) + "," + num(s.thermal.water_temp_c) + "," +
               num(total_load(s, d, scenario)) + "," + num(schedule.stages[t].coec) + "," +
               num(schedule.stages[t].tdl);
        out << row << '\n';
    }
}

void write_convergence_csv(std::ostream& out, const AdpRunReport& report) {
    out << "k,feasible,cost,stepsize,visited,evaluations\n";
    for (const AdpIteration& it : report.iterations) {
        out << fmt::format("{},{},{},{:.12f},{},{}\n", it.k, it.feasible ? 1 : 0, it.feasible ? num(it.cost) : "",
                           it.stepsize, it.visited, it.evaluations);
    }
}

void write_pareto_csv(std::ostream& out, const ParetoResult& result) {
    out << "epsilon,coec,tdl,solver,status\n";
    for (const ParetoEntry& e : result.raw) {
        if (e.point) {
            out << fmt::format("{},{},{},{},{}\n", num(e.epsilon), num(e.point->objectives.coec),
                               num(e.point->objectives.tdl), e.point->solver, e.status);
        } else {
            out << fmt::format("{},,,,{}\n", num(e.epsilon), e.status);
        }
    }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << kBenchHeader << '\n';
    for (const BenchRow& r : rows) {
        const bool ok = r.status == "ok";
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{:.3f}\n", r.case_name, r.states, r.decisions, r.algorithm,
                           r.iterations, r.status, ok ? num(r.coec) : "", ok ? num(r.tdl) : "",
                           ok && r.optimality_pct >= 0.0 ? fmt::format("{:.2f}", r.optimality_pct) : "", r.work,
                           r.visited_per_iter, r.wall_seconds);
    }
}

}  // namespace hemu
