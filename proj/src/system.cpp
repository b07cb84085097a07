#include "hemu/system.hpp"

#include <cmath>

#include "hemu/error.hpp"

namespace hemu {

double battery_dsoc(const Decision& decision, const Scenario& scenario) {
    return scenario.battery ? decision.battery_steps * scenario.battery->config.soc_step : 0.0;
}

double ac_power_kw(const Decision& decision, const Scenario& scenario) {
    return scenario.ac ? scenario.ac->config.power_levels_kw.at(static_cast<std::size_t>(decision.ac_level)) : 0.0;
}

double ewh_power_kw(const Decision& decision, const Scenario& scenario) {
    return scenario.ewh ? scenario.ewh->config.power_levels_kw.at(static_cast<std::size_t>(decision.ewh_level)) : 0.0;
}

SystemState initial_state(const Scenario& scenario) {
    SystemState s;
    if (scenario.battery) {
        const Grid g = soc_grid(scenario.battery->config);
        s.battery.soc = g.value(g.nearest(scenario.battery->initial_soc, scenario.battery->initial_soc));
    }
    s.appliances.assign(scenario.appliances.size(), ApplianceState{});
    if (scenario.ac) {
        const AcConfig& c = scenario.ac->config;
        s.thermal.indoor_temp_c =
            snap_temperature(scenario.ac->initial_temp_c, c.temp_ideal_c, c.temp_tolerance_c, c.temp_step_c);
    } else if (!scenario.exogenous.empty()) {
        // Without an AC model the house follows the outdoor temperature.
        s.thermal.indoor_temp_c = scenario.exogenous.front().outdoor_temp_c;
    }
    if (scenario.ewh) {
        const EwhConfig& c = scenario.ewh->config;
        s.thermal.water_temp_c =
            snap_temperature(scenario.ewh->initial_temp_c, c.temp_ideal_c, c.temp_tolerance_c, c.temp_step_c);
    }
    return s;
}

namespace {

std::vector<int> feasible_ac_levels(const ThermalState& state, const ExogenousSlot& exo, const Scenario& scenario) {
    if (!scenario.ac) return {0};
    const AcConfig& c = scenario.ac->config;
    std::vector<int> out;
    for (std::size_t l = 0; l < c.power_levels_kw.size(); ++l) {
        const double next = indoor_temp_transition(state, c.power_levels_kw[l], exo.outdoor_temp_c, c);
        if (within_band(next, c.temp_ideal_c, c.temp_tolerance_c)) out.push_back(static_cast<int>(l));
    }
    return out;
}

std::vector<int> feasible_ewh_levels(const ThermalState& state, const ExogenousSlot& exo, const Scenario& scenario) {
    if (!scenario.ewh) return {0};
    const EwhConfig& c = scenario.ewh->config;
    std::vector<int> out;
    for (std::size_t l = 0; l < c.power_levels_kw.size(); ++l) {
        const double next =
            water_temp_transition(state, c.power_levels_kw[l], exo.water_draw_kg_per_h, c, scenario.dt());
        if (within_band(next, c.temp_ideal_c, c.temp_tolerance_c)) out.push_back(static_cast<int>(l));
    }
    return out;
}

}  // namespace

std::vector<std::pair<int, int>> enumerate_thermal_decisions(const ThermalState& state, const ExogenousSlot& exo,
                                                             const Scenario& scenario) {
    std::vector<std::pair<int, int>> pairs;
    const auto ac = feasible_ac_levels(state, exo, scenario);
    const auto ewh = feasible_ewh_levels(state, exo, scenario);
    for (int a : ac) {
        for (int w : ewh) pairs.emplace_back(a, w);
    }
    return pairs;
}

std::vector<std::pair<int, int>> thermal_feasible_decisions(const ThermalState& state, const ExogenousSlot& exo,
                                                            const Scenario& scenario, int t) {
    auto pairs = enumerate_thermal_decisions(state, exo, scenario);
    if (pairs.empty()) throw HemuError(ErrorKind::dead_end, "no thermal decision keeps temperatures in band", t);
    return pairs;
}

std::vector<Decision> enumerate_feasible_decisions(const SystemState& state, const Scenario& scenario) {
    const int t = state.slot;
    const int horizon = scenario.slots();
    if (t < 0 || t >= horizon) return {};

    std::vector<int> battery_steps{0};
    if (scenario.battery) {
        battery_steps.clear();
        for (double dsoc : battery_feasible_decisions(state.battery, scenario.battery->config)) {
            battery_steps.push_back(soc_delta_to_steps(dsoc, scenario.battery->config));
        }
    }

    std::vector<std::uint32_t> masks{0u};
    for (std::size_t i = 0; i < scenario.appliances.size(); ++i) {
        const SwitchOptions options =
            appliance_feasible_decisions(state.appliances.at(i), scenario.appliances[i], t, horizon);
        if (options.empty()) return {};
        std::vector<std::uint32_t> next;
        for (std::uint32_t m : masks) {
            if (options.allow_off) next.push_back(m);
            if (options.allow_on) next.push_back(m | (1u << i));
        }
        masks = std::move(next);
    }

    const auto thermal = enumerate_thermal_decisions(state.thermal, scenario.exogenous.at(static_cast<std::size_t>(t)),
                                                     scenario);
    std::vector<Decision> out;
    out.reserve(battery_steps.size() * masks.size() * thermal.size());
    for (int b : battery_steps) {
        for (std::uint32_t m : masks) {
            for (const auto& [ac, ewh] : thermal) out.push_back(Decision{b, m, ac, ewh});
        }
    }
    return out;
}

std::vector<Decision> feasible_decisions(const SystemState& state, const Scenario& scenario) {
    auto out = enumerate_feasible_decisions(state, scenario);
    if (out.empty()) throw HemuError(ErrorKind::dead_end, "no feasible decision", state.slot);
    return out;
}

SystemState system_transition(const SystemState& state, const Decision& decision, const Scenario& scenario) {
    const int t = state.slot;
    const int horizon = scenario.slots();
    if (t < 0 || t >= horizon) throw HemuError(ErrorKind::infeasible_decision, "slot outside horizon", t);

    SystemState next = state;
    next.slot = t + 1;

    if (scenario.battery) {
        const BatteryConfig& cfg = scenario.battery->config;
        next.battery = battery_transition(state.battery, decision.battery_steps * cfg.soc_step, cfg);
    } else if (decision.battery_steps != 0) {
        throw HemuError(ErrorKind::infeasible_decision, "battery action without a battery", t);
    }

    if (state.appliances.size() != scenario.appliances.size()) {
        throw HemuError(ErrorKind::infeasible_decision, "appliance state count mismatch", t);
    }
    if (scenario.appliances.size() < 32 && (decision.appliance_on >> scenario.appliances.size()) != 0u) {
        throw HemuError(ErrorKind::infeasible_decision, "switch bit for a non-existent appliance", t);
    }
    for (std::size_t i = 0; i < scenario.appliances.size(); ++i) {
        next.appliances[i] =
            appliance_transition(state.appliances[i], decision.appliance(i), scenario.appliances[i], t, horizon);
    }

    const ExogenousSlot& exo = scenario.exogenous.at(static_cast<std::size_t>(t));
    if (scenario.ac) {
        const AcConfig& c = scenario.ac->config;
        if (decision.ac_level < 0 || static_cast<std::size_t>(decision.ac_level) >= c.power_levels_kw.size()) {
            throw HemuError(ErrorKind::infeasible_decision, "unknown AC level", t);
        }
        next.thermal.indoor_temp_c = indoor_temp_transition(state.thermal, ac_power_kw(decision, scenario),
                                                            exo.outdoor_temp_c, c);
        if (!within_band(next.thermal.indoor_temp_c, c.temp_ideal_c, c.temp_tolerance_c)) {
            throw HemuError(ErrorKind::infeasible_decision, "indoor temperature leaves the comfort band", t);
        }
    } else {
        if (decision.ac_level != 0) throw HemuError(ErrorKind::infeasible_decision, "AC action without an AC", t);
        if (static_cast<std::size_t>(t + 1) < scenario.exogenous.size()) {
            next.thermal.indoor_temp_c = scenario.exogenous[static_cast<std::size_t>(t + 1)].outdoor_temp_c;
        }
    }

    if (scenario.ewh) {
        const EwhConfig& c = scenario.ewh->config;
        if (decision.ewh_level < 0 || static_cast<std::size_t>(decision.ewh_level) >= c.power_levels_kw.size()) {
            throw HemuError(ErrorKind::infeasible_decision, "unknown EWH level", t);
        }
        next.thermal.water_temp_c = water_temp_transition(state.thermal, ewh_power_kw(decision, scenario),
                                                          exo.water_draw_kg_per_h, c, scenario.dt());
        if (!within_band(next.thermal.water_temp_c, c.temp_ideal_c, c.temp_tolerance_c)) {
            throw HemuError(ErrorKind::infeasible_decision, "water temperature leaves the comfort band", t);
        }
    } else if (decision.ewh_level != 0) {
        throw HemuError(ErrorKind::infeasible_decision, "EWH action without an EWH", t);
    }
    return next;
}

std::size_t nominal_decision_count(const Scenario& scenario) {
    std::size_t count = 1;
    if (scenario.battery) count *= soc_delta_steps(scenario.battery->config).size();
    count <<= scenario.appliances.size();
    if (scenario.ac) count *= scenario.ac->config.power_levels_kw.size();
    if (scenario.ewh) count *= scenario.ewh->config.power_levels_kw.size();
    return count;
}

std::size_t slot_decision_bound(const Scenario& scenario, int t) {
    std::size_t count = 1;
    if (scenario.battery) count *= soc_delta_steps(scenario.battery->config).size();
    for (const auto& a : scenario.appliances) count *= in_window(a, t, scenario.slots()) ? 2 : 1;
    if (scenario.ac) count *= scenario.ac->config.power_levels_kw.size();
    if (scenario.ewh) count *= scenario.ewh->config.power_levels_kw.size();
    return count;
}

}  // namespace hemu
