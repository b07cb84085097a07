#include "hemu/devices.hpp"

#include <algorithm>
#include <cmath>

#include "hemu/error.hpp"

namespace hemu {

namespace {

constexpr double kGridEps = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

int Grid::nearest(double x, double tie_target) const {
    const double pos = (x - origin) / step;
    const double lower = std::floor(pos);
    const double frac = pos - lower;
    if (std::abs(frac - 0.5) < kGridEps) {
        const double target = (tie_target - origin) / step;
        const double up = lower + 1.0;
        return static_cast<int>(std::abs(up - target) < std::abs(lower - target) ? up : lower);
    }
    return static_cast<int>(frac < 0.5 ? lower : lower + 1.0);
}

LifeCurve::LifeCurve(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
}

double LifeCurve::operator()(double x) const {
    if (points_.empty()) return 0.0;
    if (x <= points_.front().first) return points_.front().second;
    if (x >= points_.back().first) return points_.back().second;
    auto hi = std::upper_bound(points_.begin(), points_.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double w = (x - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

// Synthetic NiMH-like shapes; only the 25 degC / 85 % anchors are meaningful.
LifeCurve default_temp_life_curve() {
    return LifeCurve({{0.0, 2100.0}, {10.0, 2600.0}, {25.0, 3000.0}, {35.0, 2700.0}, {45.0, 2000.0}, {55.0, 1200.0}});
}

LifeCurve default_dod_life_curve() {
    return LifeCurve({{0.1, 25000.0},
                      {0.2, 13000.0},
                      {0.3, 8800.0},
                      {0.4, 6600.0},
                      {0.5, 5300.0},
                      {0.6, 4400.0},
                      {0.7, 3800.0},
                      {0.85, 3000.0},
                      {1.0, 2500.0}});
}

// ---------------------------------------------------------------------------
// Battery

Grid soc_grid(const BatteryConfig& cfg) {
    const int intervals = static_cast<int>(std::lround((cfg.soc_max - cfg.soc_min) / cfg.soc_step));
    return Grid{cfg.soc_min, cfg.soc_step, intervals + 1};
}

std::vector<int> soc_delta_steps(const BatteryConfig& cfg) {
    const int lo = static_cast<int>(std::lround(cfg.dsoc_min / cfg.soc_step));
    const int hi = static_cast<int>(std::lround(cfg.dsoc_max / cfg.soc_step));
    std::vector<int> steps;
    for (int k = lo; k <= hi; ++k) steps.push_back(k);
    return steps;
}

int soc_delta_to_steps(double dsoc, const BatteryConfig& cfg) {
    const double pos = dsoc / cfg.soc_step;
    const long k = std::lround(pos);
    if (std::abs(pos - static_cast<double>(k)) > 1e-6) {
        throw HemuError(ErrorKind::infeasible_decision, "SOC delta " + std::to_string(dsoc) + " is off the delta grid");
    }
    if (dsoc < cfg.dsoc_min - kGridEps || dsoc > cfg.dsoc_max + kGridEps) {
        throw HemuError(ErrorKind::infeasible_decision, "SOC delta " + std::to_string(dsoc) + " outside rate limits");
    }
    return static_cast<int>(k);
}

BatteryState battery_transition(const BatteryState& state, double dsoc, const BatteryConfig& cfg) {
    const int steps = soc_delta_to_steps(dsoc, cfg);
    const Grid grid = soc_grid(cfg);
    const double raw = cfg.eta_selfdischarge * state.soc + steps * cfg.soc_step;
    const int index = grid.nearest(raw, state.soc);
    if (!grid.contains(index)) {
        throw HemuError(ErrorKind::infeasible_decision, "SOC " + std::to_string(raw) + " outside bounds");
    }
    return BatteryState{grid.value(index)};
}

double battery_power(double prev_soc, double new_soc, const BatteryConfig& cfg, double dt) {
    const double delta = new_soc - cfg.eta_selfdischarge * prev_soc;
    const double charge = std::max(0.0, delta);
    const double discharge = std::min(0.0, delta);
    return cfg.capacity_kwh / (cfg.eta_charge * dt) * charge + cfg.capacity_kwh * cfg.eta_discharge / dt * discharge;
}

std::vector<double> battery_feasible_decisions(const BatteryState& state, const BatteryConfig& cfg) {
    const Grid grid = soc_grid(cfg);
    std::vector<double> out;
    for (int k : soc_delta_steps(cfg)) {
        const double raw = cfg.eta_selfdischarge * state.soc + k * cfg.soc_step;
        if (grid.contains(grid.nearest(raw, state.soc))) out.push_back(k * cfg.soc_step);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Deferrable appliances

const std::string& appliance_name(const DeferrableAppliance& appliance) {
    return std::visit([](const auto& a) -> const std::string& { return a.name; }, appliance);
}

int required_slots(const DeferrableAppliance& appliance) {
    return std::visit(overloaded{[](const NonInterruptibleAppliance& a) { return a.duration(); },
                                 [](const InterruptibleAppliance& a) { return a.required_slots; }},
                      appliance);
}

namespace {

bool cyclic_contains(int start, int end, int t) {
    return start <= end ? (t >= start && t <= end) : (t >= start || t <= end);
}

}  // namespace

bool in_window(const DeferrableAppliance& appliance, int t, int horizon) {
    if (t < 0 || t >= horizon) return false;
    return std::visit([t](const auto& a) { return cyclic_contains(a.window_start, a.window_end, t); }, appliance);
}

int remaining_window_slots(const DeferrableAppliance& appliance, int t, int horizon) {
    int count = 0;
    for (int s = std::max(t, 0); s < horizon; ++s) count += in_window(appliance, s, horizon) ? 1 : 0;
    return count;
}

double appliance_power_kw(const DeferrableAppliance& appliance, int progress) {
    return std::visit(overloaded{[progress](const NonInterruptibleAppliance& a) {
                                     return a.power_profile_kw.at(static_cast<std::size_t>(progress));
                                 },
                                 [](const InterruptibleAppliance& a) { return a.power_kw; }},
                      appliance);
}

SwitchOptions appliance_feasible_decisions(const ApplianceState& state, const DeferrableAppliance& appliance, int t,
                                           int horizon) {
    const int required = required_slots(appliance);
    if (state.progress >= required) return {true, false};
    const int remaining = required - state.progress;
    const int slots_left = remaining_window_slots(appliance, t, horizon);
    if (slots_left < remaining) return {};
    const bool inside = in_window(appliance, t, horizon);

    return std::visit(overloaded{[&](const NonInterruptibleAppliance&) -> SwitchOptions {
                                     if (state.progress > 0) return inside ? SwitchOptions{false, true} : SwitchOptions{};
                                     if (!inside) return {true, false};
                                     return {slots_left > remaining, true};
                                 },
                                 [&](const InterruptibleAppliance&) -> SwitchOptions {
                                     if (!inside) return {true, false};
                                     return {slots_left - 1 >= remaining, true};
                                 }},
                      appliance);
}

ApplianceState appliance_transition(const ApplianceState& state, bool on, const DeferrableAppliance& appliance, int t,
                                    int horizon) {
    if (!appliance_feasible_decisions(state, appliance, t, horizon).contains(on)) {
        throw HemuError(ErrorKind::infeasible_decision,
                        "appliance '" + appliance_name(appliance) + "' cannot be switched " + (on ? "on" : "off"), t);
    }
    return ApplianceState{state.progress + (on ? 1 : 0)};
}

// ---------------------------------------------------------------------------
// Thermal loads

Grid temperature_grid(double ideal, double tolerance, double step) {
    const int intervals = static_cast<int>(std::lround(2.0 * tolerance / step));
    return Grid{ideal - tolerance, step, intervals + 1};
}

double snap_temperature(double temp_c, double ideal, double tolerance, double step) {
    const Grid grid = temperature_grid(ideal, tolerance, step);
    return grid.value(grid.nearest(temp_c, ideal));
}

bool within_band(double temp_c, double ideal, double tolerance) {
    return temp_c >= ideal - tolerance - kGridEps && temp_c <= ideal + tolerance + kGridEps;
}

double indoor_temp_raw(double indoor_c, double ac_kw, double outdoor_c, const AcConfig& cfg) {
    return cfg.sigma * indoor_c + (1.0 - cfg.sigma) * (outdoor_c - cfg.cop * ac_kw / cfg.thermal_conductivity);
}

double indoor_temp_transition(const ThermalState& state, double ac_kw, double outdoor_c, const AcConfig& cfg) {
    return snap_temperature(indoor_temp_raw(state.indoor_temp_c, ac_kw, outdoor_c, cfg), cfg.temp_ideal_c,
                            cfg.temp_tolerance_c, cfg.temp_step_c);
}

double water_temp_raw(const ThermalState& state, double ewh_kw, double draw_kg_per_h, const EwhConfig& cfg,
                      double dt) {
    const double tank = state.water_temp_c;
    const double heat_flow = ewh_kw + draw_kg_per_h * cfg.specific_heat * (cfg.inlet_temp_c - tank) +
                             cfg.thermal_conductance * (state.indoor_temp_c - tank);
    return tank + heat_flow * dt / (cfg.tank_mass_kg * cfg.specific_heat);
}

double water_temp_transition(const ThermalState& state, double ewh_kw, double draw_kg_per_h, const EwhConfig& cfg,
                             double dt) {
    return snap_temperature(water_temp_raw(state, ewh_kw, draw_kg_per_h, cfg, dt), cfg.temp_ideal_c,
                            cfg.temp_tolerance_c, cfg.temp_step_c);
}

}  // namespace hemu
