#include "hemu/scenario.hpp"

#include <cmath>
#include <set>
#include <string>

#include "hemu/error.hpp"
#include "hemu/system.hpp"

namespace hemu {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
    throw HemuError(ErrorKind::validation_error, path + ": " + reason);
}

void require(bool ok, const std::string& path, const std::string& reason) {
    if (!ok) fail(path, reason);
}

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

bool is_multiple(double value, double step) {
    const double q = value / step;
    return std::abs(q - std::round(q)) < 1e-6;
}

bool on_grid(double value, const Grid& grid) {
    const double q = (value - grid.origin) / grid.step;
    const long k = std::lround(q);
    return std::abs(q - static_cast<double>(k)) < 1e-6 && k >= 0 && k < grid.count;
}

void validate_curve(const LifeCurve& curve, const std::string& path) {
    require(!curve.empty(), path, "lifetime curve needs at least one point");
    for (std::size_t i = 0; i < curve.points().size(); ++i) {
        require(curve.points()[i].second > 0.0, indexed(path, i), "cycle life must be strictly positive");
    }
}

void validate_battery(const BatterySetup& setup) {
    const BatteryConfig& b = setup.config;
    require(b.capacity_kwh > 0.0, "battery.capacity_kwh", "must be positive");
    require(b.soc_min >= 0.0 && b.soc_min < b.soc_max && b.soc_max <= 1.0, "battery.soc_min",
            "need 0 <= soc_min < soc_max <= 1");
    require(b.soc_step > 0.0, "battery.soc_step", "must be positive");
    require(is_multiple(b.soc_max - b.soc_min, b.soc_step), "battery.soc_step", "must divide soc_max - soc_min");
    require(b.dsoc_min < 0.0 && b.dsoc_max > 0.0, "battery.dsoc_min", "need dsoc_min < 0 < dsoc_max");
    require(is_multiple(b.dsoc_min, b.soc_step), "battery.dsoc_min", "must be a multiple of soc_step");
    require(is_multiple(b.dsoc_max, b.soc_step), "battery.dsoc_max", "must be a multiple of soc_step");
    require(b.eta_charge > 0.0 && b.eta_charge <= 1.0, "battery.eta_charge", "must lie in (0, 1]");
    require(b.eta_discharge > 0.0 && b.eta_discharge <= 1.0, "battery.eta_discharge", "must lie in (0, 1]");
    require(b.eta_selfdischarge > 0.0 && b.eta_selfdischarge <= 1.0, "battery.eta_selfdischarge",
            "must lie in (0, 1]");
    require(b.replacement_cost >= 0.0, "battery.replacement_cost", "must be non-negative");
    require(b.nominal_life_cycles > 0.0, "battery.nominal_life_cycles", "must be positive");
    validate_curve(b.temp_life_curve, "battery.temp_life_curve");
    validate_curve(b.dod_life_curve, "battery.dod_life_curve");
    require(on_grid(setup.initial_soc, soc_grid(b)), "battery.initial_soc", "must lie on the SOC grid");
}

void validate_levels(const std::vector<double>& levels, const std::string& path) {
    require(!levels.empty() && levels.front() == 0.0, path, "first power level must be 0");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        require(levels[i] > levels[i - 1], indexed(path, i), "power levels must be strictly increasing");
    }
}

void validate_band(double tolerance, double step, const std::string& prefix) {
    require(tolerance > 0.0, prefix + ".temp_tolerance_c", "must be positive");
    require(step > 0.0, prefix + ".temp_step_c", "must be positive");
    require(is_multiple(2.0 * tolerance, step), prefix + ".temp_step_c", "must divide twice the tolerance");
}

void validate_appliance(const DeferrableAppliance& appliance, std::size_t i, int slots) {
    const std::string path = indexed("appliances", i);
    require(!appliance_name(appliance).empty(), path + ".name", "must not be empty");
    if (const auto* a = std::get_if<NonInterruptibleAppliance>(&appliance)) {
        require(!a->power_profile_kw.empty(), path + ".power_profile_kw", "must not be empty");
        for (std::size_t k = 0; k < a->power_profile_kw.size(); ++k) {
            require(a->power_profile_kw[k] >= 0.0, indexed(path + ".power_profile_kw", k), "must be non-negative");
        }
        require(a->window_start >= 0 && a->window_start < slots, path + ".window", "start outside horizon");
        require(a->window_end >= a->window_start && a->window_end < slots, path + ".window",
                "end must lie in [start, T) (no wrap for non-interruptible appliances)");
        require(a->window_end - a->window_start + 1 >= a->duration(), path + ".window",
                "shorter than the power profile");
    } else {
        const auto& f = std::get<InterruptibleAppliance>(appliance);
        require(f.power_kw >= 0.0, path + ".power_kw", "must be non-negative");
        require(f.required_slots >= 1, path + ".required_slots", "must be at least 1");
        require(f.window_start >= 0 && f.window_start < slots && f.window_end >= 0 && f.window_end < slots,
                path + ".window", "outside horizon");
        require(remaining_window_slots(appliance, 0, slots) >= f.required_slots, path + ".window",
                "fewer window slots than required_slots");
    }
}

}  // namespace

void validate(const Scenario& s) {
    require(s.horizon.slots >= 1, "horizon.slots", "must be at least 1");
    require(s.horizon.slot_hours > 0.0, "horizon.slot_hours", "must be positive");
    const auto slots = static_cast<std::size_t>(s.horizon.slots);
    require(s.tariff.size() == slots, "tariff",
            "expected " + std::to_string(slots) + " slots, got " + std::to_string(s.tariff.size()));
    require(s.exogenous.size() == slots, "exogenous",
            "expected " + std::to_string(slots) + " slots, got " + std::to_string(s.exogenous.size()));
    for (std::size_t t = 0; t < slots; ++t) {
        require(s.tariff[t].price >= 0.0, indexed("tariff.price", t), "must be non-negative");
        require(s.tariff[t].feed_in >= 0.0, indexed("tariff.feed_in", t), "must be non-negative");
        require(s.exogenous[t].pv_kw >= 0.0, indexed("exogenous.pv_kw", t), "must be non-negative");
        require(s.exogenous[t].uncontrollable_kw >= 0.0, indexed("exogenous.uncontrollable_kw", t),
                "must be non-negative");
        require(s.exogenous[t].water_draw_kg_per_h >= 0.0, indexed("exogenous.water_draw_kg_per_h", t),
                "must be non-negative");
    }

    if (s.battery) validate_battery(*s.battery);

    require(s.appliances.size() <= kMaxAppliances, "appliances",
            "at most " + std::to_string(kMaxAppliances) + " appliances are supported");
    std::set<std::string> names;
    for (std::size_t i = 0; i < s.appliances.size(); ++i) {
        validate_appliance(s.appliances[i], i, s.horizon.slots);
        require(names.insert(appliance_name(s.appliances[i])).second, indexed("appliances", i) + ".name",
                "duplicate appliance name");
    }

    if (s.ac) {
        const AcConfig& c = s.ac->config;
        validate_levels(c.power_levels_kw, "ac.power_levels_kw");
        validate_band(c.temp_tolerance_c, c.temp_step_c, "ac");
        require(c.sigma >= 0.0 && c.sigma <= 1.0, "ac.sigma", "must lie in [0, 1]");
        require(c.cop > 0.0, "ac.cop", "must be positive");
        require(c.thermal_conductivity > 0.0, "ac.thermal_conductivity", "must be positive");
        require(on_grid(s.ac->initial_temp_c, temperature_grid(c)), "ac.initial_temp_c",
                "must lie on the indoor temperature grid");
    }
    if (s.ewh) {
        const EwhConfig& c = s.ewh->config;
        validate_levels(c.power_levels_kw, "ewh.power_levels_kw");
        validate_band(c.temp_tolerance_c, c.temp_step_c, "ewh");
        require(c.tank_mass_kg > 0.0, "ewh.tank_mass_kg", "must be positive");
        require(c.specific_heat > 0.0, "ewh.specific_heat", "must be positive");
        require(c.thermal_conductance >= 0.0, "ewh.thermal_conductance", "must be non-negative");
        require(on_grid(s.ewh->initial_temp_c, temperature_grid(c)), "ewh.initial_temp_c",
                "must lie on the water temperature grid");
    }
}

}  // namespace hemu
