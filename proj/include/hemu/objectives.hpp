#pragma once

#include <vector>

#include "hemu/scenario.hpp"
#include "hemu/system.hpp"

namespace hemu {

struct ObjectivePair {
    double coec = 0.0;  ///< daily electricity cost (scenario currency)
    double tdl = 0.0;   ///< daily thermal discomfort (dimensionless)

    friend bool operator==(const ObjectivePair&, const ObjectivePair&) = default;
};

enum class Objective { coec, tdl };

/// Net household demand in kW for one slot; negative means export.
double total_load(const SystemState& state, const Decision& decision, const Scenario& scenario);

/// Battery degradation cost per kWh of throughput at the given depth of
/// discharge and cell temperature. Throws invalid-dod for dod <= 0.
double degradation_cost_rate(double dod, double temp_c, const BatteryConfig& cfg);

/// Temperature used for the cycle-life lookup in slot `state.slot`.
double battery_temperature(const SystemState& state, const Scenario& scenario);

/// Battery bus power implied by the decision (0 without a battery).
double decision_battery_power(const SystemState& state, const Decision& decision, const Scenario& scenario);

/// Cost of one slot from its parts. Import is charged at `price`, export is
/// credited at `feed_in`, and degradation is charged on |battery power|.
inline double coec_from_parts(double price, double feed_in, double load_kw, double degradation_rate,
                              double battery_kw, double dt) {
    const double import_kw = load_kw > 0.0 ? load_kw : 0.0;
    const double export_kw = load_kw < 0.0 ? load_kw : 0.0;
    const double battery_abs = battery_kw < 0.0 ? -battery_kw : battery_kw;
    return price * import_kw * dt + feed_in * export_kw * dt + degradation_rate * battery_abs * dt;
}

double stage_cost_coec(const SystemState& state, const Decision& decision, const Scenario& scenario);

/// Discomfort of a thermal state: one exp(|dev| / tolerance) term per
/// thermal device present; 0 when the scenario has none.
double tdl_stage(const ThermalState& thermal, const AcConfig* ac, const EwhConfig* ewh);
double tdl_stage(const ThermalState& thermal, const Scenario& scenario);

/// Smallest and largest daily discomfort for the scenario's thermal devices.
double tdl_lower_bound(const Scenario& scenario);
double tdl_upper_bound(const Scenario& scenario);

/// Length-T decision sequence with the induced state trajectory.
struct Schedule {
    std::vector<Decision> decisions;
    std::vector<SystemState> states;  ///< T + 1 entries; states[0] is the initial state
    std::vector<ObjectivePair> stages; ///< per-slot contributions
    ObjectivePair objectives;
};

/// Replays `decisions` from the scenario's initial state and sums both
/// objectives. Throws infeasible-schedule naming the first offending slot.
Schedule evaluate_schedule(const std::vector<Decision>& decisions, const Scenario& scenario);

/// Rescores an existing schedule from its decisions.
ObjectivePair evaluate(const Schedule& schedule, const Scenario& scenario);

}  // namespace hemu
