#include "hemu/objectives.hpp"

#include <cmath>

#include "hemu/error.hpp"

namespace hemu {

double total_load(const SystemState& state, const Decision& decision, const Scenario& scenario) {
    const auto& exo = scenario.exogenous.at(static_cast<std::size_t>(state.slot));
    double load = 0.0;
    for (std::size_t i = 0; i < scenario.appliances.size(); ++i) {
        if (decision.appliance(i)) load += appliance_power_kw(scenario.appliances[i], state.appliances.at(i).progress);
    }
    load += ac_power_kw(decision, scenario);
    load += ewh_power_kw(decision, scenario);
    load += exo.uncontrollable_kw;
    load += decision_battery_power(state, decision, scenario);
    load -= exo.pv_kw;
    return load;
}

double degradation_cost_rate(double dod, double temp_c, const BatteryConfig& cfg) {
    if (!(dod > 0.0)) throw HemuError(ErrorKind::invalid_dod, "depth of discharge must be positive");
    const double life_temp = cfg.temp_life_curve(temp_c);
    const double life_dod = cfg.dod_life_curve(dod);
    return cfg.replacement_cost * cfg.nominal_life_cycles / (life_temp * life_dod * cfg.capacity_kwh * dod);
}

double battery_temperature(const SystemState& state, const Scenario& scenario) {
    if (scenario.battery && scenario.battery->location == BatteryLocation::indoor && scenario.ac) {
        return state.thermal.indoor_temp_c;
    }
    return scenario.exogenous.at(static_cast<std::size_t>(state.slot)).outdoor_temp_c;
}

double decision_battery_power(const SystemState& state, const Decision& decision, const Scenario& scenario) {
    if (!scenario.battery) return 0.0;
    const BatteryConfig& cfg = scenario.battery->config;
    const BatteryState next = battery_transition(state.battery, decision.battery_steps * cfg.soc_step, cfg);
    return battery_power(state.battery.soc, next.soc, cfg, scenario.dt());
}

double stage_cost_coec(const SystemState& state, const Decision& decision, const Scenario& scenario) {
    const auto t = static_cast<std::size_t>(state.slot);
    const double load = total_load(state, decision, scenario);
    const double battery_kw = decision_battery_power(state, decision, scenario);
    double rate = 0.0;
    if (battery_kw != 0.0) {
        rate = degradation_cost_rate(1.0 - state.battery.soc, battery_temperature(state, scenario),
                                     scenario.battery->config);
    }
    return coec_from_parts(scenario.tariff.at(t).price, scenario.tariff.at(t).feed_in, load, rate, battery_kw,
                           scenario.dt());
}

double tdl_stage(const ThermalState& thermal, const AcConfig* ac, const EwhConfig* ewh) {
    double total = 0.0;
    if (ac) total += std::exp(std::abs(thermal.indoor_temp_c - ac->temp_ideal_c) / ac->temp_tolerance_c);
    if (ewh) total += std::exp(std::abs(thermal.water_temp_c - ewh->temp_ideal_c) / ewh->temp_tolerance_c);
    return total;
}

double tdl_stage(const ThermalState& thermal, const Scenario& scenario) {
    return tdl_stage(thermal, scenario.ac ? &scenario.ac->config : nullptr,
                     scenario.ewh ? &scenario.ewh->config : nullptr);
}

double tdl_lower_bound(const Scenario& scenario) {
    return static_cast<double>(scenario.thermal_terms()) * scenario.slots();
}

double tdl_upper_bound(const Scenario& scenario) {
    return static_cast<double>(scenario.thermal_terms()) * scenario.slots() * std::exp(1.0);
}

Schedule evaluate_schedule(const std::vector<Decision>& decisions, const Scenario& scenario) {
    const int horizon = scenario.slots();
    if (decisions.size() != static_cast<std::size_t>(horizon)) {
        throw HemuError(ErrorKind::infeasible_schedule, "expected " + std::to_string(horizon) + " decisions, got " +
                                                            std::to_string(decisions.size()));
    }
    Schedule out;
    out.decisions = decisions;
    out.states.reserve(decisions.size() + 1);
    out.states.push_back(initial_state(scenario));
    for (int t = 0; t < horizon; ++t) {
        const SystemState& state = out.states.back();
        const Decision& d = decisions[static_cast<std::size_t>(t)];
        SystemState next;
        try {
            next = system_transition(state, d, scenario);
        } catch (const HemuError& e) {
            if (e.kind() != ErrorKind::infeasible_decision) throw;
            throw HemuError(ErrorKind::infeasible_schedule, e.what(), t);
        }
        ObjectivePair stage{stage_cost_coec(state, d, scenario), tdl_stage(state.thermal, scenario)};
        out.objectives.coec += stage.coec;
        out.objectives.tdl += stage.tdl;
        out.stages.push_back(stage);
        out.states.push_back(std::move(next));
    }
    for (std::size_t i = 0; i < scenario.appliances.size(); ++i) {
        if (out.states.back().appliances[i].progress != required_slots(scenario.appliances[i])) {
            throw HemuError(ErrorKind::infeasible_schedule,
                            "appliance '" + appliance_name(scenario.appliances[i]) + "' did not complete", horizon);
        }
    }
    return out;
}

ObjectivePair evaluate(const Schedule& schedule, const Scenario& scenario) {
    return evaluate_schedule(schedule.decisions, scenario).objectives;
}

}  // namespace hemu
