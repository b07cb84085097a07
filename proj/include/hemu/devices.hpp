#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hemu {

/// Uniform 1-D lattice `origin + i * step`. Indices outside [0, count) are
/// representable so out-of-band successors can be detected after snapping.
struct Grid {
    double origin = 0.0;
    double step = 1.0;
    int count = 1;

    double value(int index) const { return origin + step * index; }
    bool contains(int index) const { return index >= 0 && index < count; }

    /// Nearest lattice index; an exact midpoint goes to the neighbour closer
    /// to `tie_target`.
    int nearest(double x, double tie_target) const;
};

/// Piecewise-linear lookup table, clamped to the end values outside the
/// tabulated range.
class LifeCurve {
public:
    LifeCurve() = default;
    explicit LifeCurve(std::vector<std::pair<double, double>> points);

    double operator()(double x) const;
    const std::vector<std::pair<double, double>>& points() const { return points_; }
    bool empty() const { return points_.empty(); }

    friend bool operator==(const LifeCurve&, const LifeCurve&) = default;

private:
    std::vector<std::pair<double, double>> points_;
};

// ---------------------------------------------------------------------------
// Battery storage

/// Cycle-life tables normalised so L(25 degC) = L(0.85 DoD) = 3000 cycles.
LifeCurve default_temp_life_curve();
LifeCurve default_dod_life_curve();

struct BatteryConfig {
    double capacity_kwh = 5.0;
    double soc_min = 0.2;
    double soc_max = 0.8;
    double soc_step = 0.1;
    double dsoc_min = -0.3;
    double dsoc_max = 0.3;
    double eta_charge = 0.95;
    double eta_discharge = 0.95;
    double eta_selfdischarge = 1.0;  ///< per-slot SOC retention factor
    double replacement_cost = 1500.0;
    double nominal_life_cycles = 3000.0;
    LifeCurve temp_life_curve = default_temp_life_curve();  ///< cell temperature (degC) -> cycles
    LifeCurve dod_life_curve = default_dod_life_curve();    ///< depth of discharge -> cycles

    friend bool operator==(const BatteryConfig&, const BatteryConfig&) = default;
};

struct BatteryState {
    double soc = 0.5;
    friend bool operator==(const BatteryState&, const BatteryState&) = default;
};

Grid soc_grid(const BatteryConfig& cfg);
/// SOC-delta choices expressed in grid steps, ascending (e.g. -3..3).
std::vector<int> soc_delta_steps(const BatteryConfig& cfg);
/// Converts an SOC delta to grid steps; throws infeasible-decision when the
/// delta is off the delta grid or outside [dsoc_min, dsoc_max].
int soc_delta_to_steps(double dsoc, const BatteryConfig& cfg);

BatteryState battery_transition(const BatteryState& state, double dsoc, const BatteryConfig& cfg);

/// Battery power seen by the home bus (+ charging, - discharging).
double battery_power(double prev_soc, double new_soc, const BatteryConfig& cfg, double dt);

/// All grid deltas that keep the SOC within bounds, ascending.
std::vector<double> battery_feasible_decisions(const BatteryState& state, const BatteryConfig& cfg);

// ---------------------------------------------------------------------------
// Deferrable appliances

/// Runs its whole power profile in consecutive slots inside [window_start, window_end].
struct NonInterruptibleAppliance {
    std::string name;
    std::vector<double> power_profile_kw;
    int window_start = 0;
    int window_end = 0;

    int duration() const { return static_cast<int>(power_profile_kw.size()); }
    friend bool operator==(const NonInterruptibleAppliance&, const NonInterruptibleAppliance&) = default;
};

/// Needs `required_slots` on-slots anywhere in its window. A window with
/// window_end < window_start wraps past midnight: [start, T-1] and [0, end].
struct InterruptibleAppliance {
    std::string name;
    double power_kw = 0.0;
    int window_start = 0;
    int window_end = 0;
    int required_slots = 0;

    friend bool operator==(const InterruptibleAppliance&, const InterruptibleAppliance&) = default;
};

using DeferrableAppliance = std::variant<NonInterruptibleAppliance, InterruptibleAppliance>;

struct ApplianceState {
    int progress = 0;
    friend bool operator==(const ApplianceState&, const ApplianceState&) = default;
};

/// Allowed values of one appliance on/off bit.
struct SwitchOptions {
    bool allow_off = false;
    bool allow_on = false;

    bool contains(bool on) const { return on ? allow_on : allow_off; }
    bool empty() const { return !allow_off && !allow_on; }
    std::size_t size() const { return std::size_t{allow_off} + std::size_t{allow_on}; }
    friend bool operator==(const SwitchOptions&, const SwitchOptions&) = default;
};

const std::string& appliance_name(const DeferrableAppliance& appliance);
int required_slots(const DeferrableAppliance& appliance);
bool in_window(const DeferrableAppliance& appliance, int t, int horizon);
/// Window slots in [t, horizon).
int remaining_window_slots(const DeferrableAppliance& appliance, int t, int horizon);
/// Power drawn in a slot where the appliance is on with the given progress.
double appliance_power_kw(const DeferrableAppliance& appliance, int progress);

/// Empty when the task can no longer be completed inside its window.
SwitchOptions appliance_feasible_decisions(const ApplianceState& state, const DeferrableAppliance& appliance,
                                           int t, int horizon);

ApplianceState appliance_transition(const ApplianceState& state, bool on, const DeferrableAppliance& appliance,
                                    int t, int horizon);

// ---------------------------------------------------------------------------
// Thermal loads

struct AcConfig {
    std::vector<double> power_levels_kw{0.0, 1.0, 1.5, 2.0, 2.5};
    double temp_ideal_c = 22.0;
    double temp_tolerance_c = 2.0;
    double temp_step_c = 0.5;
    double sigma = 0.93;
    double cop = 2.5;
    double thermal_conductivity = 2.0;  ///< kW/degC

    friend bool operator==(const AcConfig&, const AcConfig&) = default;
};

struct EwhConfig {
    std::vector<double> power_levels_kw{0.0, 4.0};
    double temp_ideal_c = 60.0;
    double temp_tolerance_c = 5.0;
    double temp_step_c = 1.0;
    double tank_mass_kg = 300.0;
    double specific_heat = 0.001163;  ///< kWh/(kg degC)
    double inlet_temp_c = 20.0;
    double thermal_conductance = 0.001;  ///< kW/degC

    friend bool operator==(const EwhConfig&, const EwhConfig&) = default;
};

struct ThermalState {
    double indoor_temp_c = 22.0;
    double water_temp_c = 60.0;
    friend bool operator==(const ThermalState&, const ThermalState&) = default;
};

/// Band [ideal - tolerance, ideal + tolerance] as a lattice.
Grid temperature_grid(double ideal, double tolerance, double step);
inline Grid temperature_grid(const AcConfig& cfg) {
    return temperature_grid(cfg.temp_ideal_c, cfg.temp_tolerance_c, cfg.temp_step_c);
}
inline Grid temperature_grid(const EwhConfig& cfg) {
    return temperature_grid(cfg.temp_ideal_c, cfg.temp_tolerance_c, cfg.temp_step_c);
}

/// Nearest lattice temperature, ties toward the ideal. May lie outside the band.
double snap_temperature(double temp_c, double ideal, double tolerance, double step);
bool within_band(double temp_c, double ideal, double tolerance);

/// One slot of the indoor model before snapping.
double indoor_temp_raw(double indoor_c, double ac_kw, double outdoor_c, const AcConfig& cfg);
double indoor_temp_transition(const ThermalState& state, double ac_kw, double outdoor_c, const AcConfig& cfg);

/// One slot of the tank model before snapping. The tank ambient is the
/// indoor temperature of `state` (before this slot's AC update).
/// `draw_kg_per_h` is the hot-water flow drawn during the slot.
double water_temp_raw(const ThermalState& state, double ewh_kw, double draw_kg_per_h, const EwhConfig& cfg,
                      double dt);
double water_temp_transition(const ThermalState& state, double ewh_kw, double draw_kg_per_h, const EwhConfig& cfg,
                             double dt);

}  // namespace hemu
