#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hemu/devices.hpp"
#include "hemu/scenario.hpp"

namespace hemu {

/// Composite per-slot state. Components of devices absent from the scenario
/// are carried along unchanged and ignored.
struct SystemState {
    BatteryState battery;
    std::vector<ApplianceState> appliances;
    ThermalState thermal;
    int slot = 0;
    int tdl_bucket = 0;  ///< used only by the accumulated discomfort-budget mode

    friend bool operator==(const SystemState&, const SystemState&) = default;
};

/// Composite per-slot control, stored as grid/level indices so every value is
/// on its configured set by construction.
struct Decision {
    int battery_steps = 0;          ///< SOC delta in units of soc_step
    std::uint32_t appliance_on = 0; ///< bit i switches appliance i on
    int ac_level = 0;               ///< index into AcConfig::power_levels_kw
    int ewh_level = 0;              ///< index into EwhConfig::power_levels_kw

    bool appliance(std::size_t i) const { return ((appliance_on >> i) & 1u) != 0; }
    friend bool operator==(const Decision&, const Decision&) = default;
};

inline constexpr std::size_t kMaxAppliances = 8;

double battery_dsoc(const Decision& decision, const Scenario& scenario);
double ac_power_kw(const Decision& decision, const Scenario& scenario);
double ewh_power_kw(const Decision& decision, const Scenario& scenario);

SystemState initial_state(const Scenario& scenario);

/// Feasible (AC level, EWH level) pairs; a missing device contributes level 0.
/// May be empty.
std::vector<std::pair<int, int>> enumerate_thermal_decisions(const ThermalState& state, const ExogenousSlot& exo,
                                                             const Scenario& scenario);
/// As above but throws dead-end when no pair keeps both temperatures in band.
std::vector<std::pair<int, int>> thermal_feasible_decisions(const ThermalState& state, const ExogenousSlot& exo,
                                                            const Scenario& scenario, int t);

/// Cartesian product of the per-device feasible sets in canonical order:
/// battery delta ascending, then appliance bits (appliance 0 most
/// significant, off before on), then AC level, then EWH level. May be empty.
std::vector<Decision> enumerate_feasible_decisions(const SystemState& state, const Scenario& scenario);
/// As above but throws dead-end when the set is empty.
std::vector<Decision> feasible_decisions(const SystemState& state, const Scenario& scenario);

/// Component-wise application of the device transitions; the slot index is
/// taken from `state.slot`. Throws infeasible-decision.
SystemState system_transition(const SystemState& state, const Decision& decision, const Scenario& scenario);

/// Product of the per-device level counts ignoring state: what each device
/// could choose when fully available.
std::size_t nominal_decision_count(const Scenario& scenario);

/// Upper bound on feasible decisions at slot t over all states.
std::size_t slot_decision_bound(const Scenario& scenario, int t);

}  // namespace hemu
