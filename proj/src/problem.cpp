#include "hemu/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hemu/error.hpp"

namespace hemu {

namespace {

int exact_index(const Grid& grid, double value, const char* what) {
    const int i = grid.nearest(value, value);
    if (!grid.contains(i) || std::abs(grid.value(i) - value) > 1e-9) {
        throw HemuError(ErrorKind::invalid_argument, std::string(what) + " " + std::to_string(value) + " is off its grid");
    }
    return i;
}

}  // namespace

double per_slot_tdl_cap(double epsilon, int horizon) {
    const double cap = epsilon / horizon;
    return cap + 1e-12 * std::max(1.0, std::abs(cap));
}

StateGrid::StateGrid(const Scenario& scenario, int budget_buckets)
    : scenario_(&scenario),
      has_battery_(scenario.battery.has_value()),
      has_ac_(scenario.ac.has_value()),
      has_ewh_(scenario.ewh.has_value()),
      buckets_(std::max(1, budget_buckets)) {
    if (has_battery_) soc_ = hemu::soc_grid(scenario.battery->config);
    if (has_ac_) indoor_ = temperature_grid(scenario.ac->config);
    if (has_ewh_) water_ = temperature_grid(scenario.ewh->config);
    if (scenario.appliances.size() > kMaxAppliances) {
        throw HemuError(ErrorKind::invalid_argument, "too many appliances");
    }

    std::size_t stride = 1;
    stride_soc_ = stride;
    stride *= static_cast<std::size_t>(soc_.count);
    for (std::size_t a = 0; a < scenario.appliances.size(); ++a) {
        radix_progress_.push_back(required_slots(scenario.appliances[a]) + 1);
        stride_progress_[a] = stride;
        stride *= static_cast<std::size_t>(radix_progress_.back());
    }
    stride_indoor_ = stride;
    stride *= static_cast<std::size_t>(indoor_.count);
    stride_water_ = stride;
    stride *= static_cast<std::size_t>(water_.count);
    stride_bucket_ = stride;
    stride *= static_cast<std::size_t>(buckets_);
    cardinality_ = stride;
}

void StateGrid::unpack(std::size_t index, Components& out) const {
    out.soc = static_cast<int>(index % static_cast<std::size_t>(soc_.count));
    index /= static_cast<std::size_t>(soc_.count);
    for (std::size_t a = 0; a < radix_progress_.size(); ++a) {
        const auto r = static_cast<std::size_t>(radix_progress_[a]);
        out.progress[a] = static_cast<int>(index % r);
        index /= r;
    }
    out.indoor = static_cast<int>(index % static_cast<std::size_t>(indoor_.count));
    index /= static_cast<std::size_t>(indoor_.count);
    out.water = static_cast<int>(index % static_cast<std::size_t>(water_.count));
    index /= static_cast<std::size_t>(water_.count);
    out.bucket = static_cast<int>(index);
}

std::size_t StateGrid::pack(const Components& c) const {
    std::size_t index = static_cast<std::size_t>(c.soc) * stride_soc_;
    for (std::size_t a = 0; a < radix_progress_.size(); ++a) {
        index += static_cast<std::size_t>(c.progress[a]) * stride_progress_[a];
    }
    index += static_cast<std::size_t>(c.indoor) * stride_indoor_;
    index += static_cast<std::size_t>(c.water) * stride_water_;
    index += static_cast<std::size_t>(c.bucket) * stride_bucket_;
    return index;
}

std::size_t StateGrid::encode(const SystemState& state) const {
    Components c;
    if (has_battery_) c.soc = exact_index(soc_, state.battery.soc, "SOC");
    if (state.appliances.size() != radix_progress_.size()) {
        throw HemuError(ErrorKind::invalid_argument, "appliance count mismatch");
    }
    for (std::size_t a = 0; a < radix_progress_.size(); ++a) {
        const int p = state.appliances[a].progress;
        if (p < 0 || p >= radix_progress_[a]) throw HemuError(ErrorKind::invalid_argument, "progress out of range");
        c.progress[a] = p;
    }
    if (has_ac_) c.indoor = exact_index(indoor_, state.thermal.indoor_temp_c, "indoor temperature");
    if (has_ewh_) c.water = exact_index(water_, state.thermal.water_temp_c, "water temperature");
    if (state.tdl_bucket < 0 || state.tdl_bucket >= buckets_) {
        throw HemuError(ErrorKind::invalid_argument, "budget bucket out of range");
    }
    c.bucket = state.tdl_bucket;
    return pack(c);
}

SystemState StateGrid::decode(std::size_t index, int slot) const {
    Components c;
    unpack(index, c);
    SystemState s;
    if (has_battery_) s.battery.soc = soc_.value(c.soc);
    s.appliances.resize(radix_progress_.size());
    for (std::size_t a = 0; a < radix_progress_.size(); ++a) s.appliances[a].progress = c.progress[a];
    if (has_ac_) {
        s.thermal.indoor_temp_c = indoor_.value(c.indoor);
    } else if (!scenario_->exogenous.empty()) {
        const auto last = static_cast<int>(scenario_->exogenous.size()) - 1;
        s.thermal.indoor_temp_c = scenario_->exogenous[static_cast<std::size_t>(std::clamp(slot, 0, last))].outdoor_temp_c;
    }
    if (has_ewh_) s.thermal.water_temp_c = water_.value(c.water);
    s.slot = slot;
    s.tdl_bucket = c.bucket;
    return s;
}

// ---------------------------------------------------------------------------

Problem::Problem(const Scenario& scenario, Objective objective, std::optional<TdlBudget> budget)
    : scenario_(scenario), objective_(objective), budget_(budget) {
    validate(scenario_);
    horizon_ = scenario_.slots();
    dt_ = scenario_.dt();

    int buckets = 1;
    if (budget_ && budget_->mode == BudgetMode::accumulated) {
        if (budget_->accumulated_points < 2) {
            throw HemuError(ErrorKind::invalid_argument, "accumulated budget needs at least 2 grid points");
        }
        buckets = budget_->accumulated_points;
    }
    grid_ = StateGrid(scenario_, buckets);

    const auto T = static_cast<std::size_t>(horizon_);
    const Grid& sg = grid_.soc_grid();
    const Grid& ig = grid_.indoor_grid();
    const Grid& wg = grid_.water_grid();
    const auto n_soc = static_cast<std::size_t>(sg.count);
    const auto n_in = static_cast<std::size_t>(ig.count);
    const auto n_w = static_cast<std::size_t>(wg.count);

    // Battery moves and degradation rates.
    battery_moves_.assign(n_soc, {});
    if (scenario_.battery) {
        const BatteryConfig& cfg = scenario_.battery->config;
        soc_deltas_ = soc_delta_steps(cfg);
        if (soc_deltas_.size() > 255) throw HemuError(ErrorKind::invalid_argument, "too many SOC deltas");
        for (std::size_t j = 0; j < soc_deltas_.size(); ++j) {
            if (soc_deltas_[j] == 0) zero_delta_index_ = static_cast<int>(j);
        }
        for (std::size_t i = 0; i < n_soc; ++i) {
            const BatteryState here{sg.value(static_cast<int>(i))};
            for (std::size_t j = 0; j < soc_deltas_.size(); ++j) {
                BatteryState next;
                try {
                    next = battery_transition(here, soc_deltas_[j] * cfg.soc_step, cfg);
                } catch (const HemuError&) {
                    continue;
                }
                const double power = battery_power(here.soc, next.soc, cfg, dt_);
                if (power != 0.0 && !(1.0 - here.soc > 0.0)) {
                    throw HemuError(ErrorKind::invalid_dod, "battery can move away from SOC = 1");
                }
                battery_moves_[i].push_back(BatteryMove{static_cast<int>(j), exact_index(sg, next.soc, "SOC"), power});
            }
        }
        degradation_.assign(T * n_soc * n_in, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t i = 0; i < n_soc; ++i) {
                const double soc = sg.value(static_cast<int>(i));
                if (!(1.0 - soc > 0.0)) continue;
                for (std::size_t k = 0; k < n_in; ++k) {
                    SystemState probe;
                    probe.slot = static_cast<int>(t);
                    probe.thermal.indoor_temp_c = ig.value(static_cast<int>(k));
                    degradation_[(t * n_soc + i) * n_in + k] =
                        degradation_cost_rate(1.0 - soc, battery_temperature(probe, scenario_), cfg);
                }
            }
        }
    } else {
        soc_deltas_ = {0};
        zero_delta_index_ = 0;
        battery_moves_[0].push_back(BatteryMove{0, 0, 0.0});
    }

    // Appliances.
    const std::size_t n_app = scenario_.appliances.size();
    allowed_.assign(T, std::vector<std::vector<std::uint8_t>>(n_app));
    on_power_.assign(n_app, {});
    for (std::size_t a = 0; a < n_app; ++a) {
        const auto& appliance = scenario_.appliances[a];
        const int required = required_slots(appliance);
        for (int p = 0; p <= required; ++p) {
            on_power_[a].push_back(p < required ? appliance_power_kw(appliance, p) : 0.0);
        }
        for (std::size_t t = 0; t < T; ++t) {
            for (int p = 0; p <= required; ++p) {
                const SwitchOptions o =
                    appliance_feasible_decisions(ApplianceState{p}, appliance, static_cast<int>(t), horizon_);
                allowed_[t][a].push_back(static_cast<std::uint8_t>((o.allow_off ? 1 : 0) | (o.allow_on ? 2 : 0)));
            }
        }
    }

    // Thermal moves.
    ac_moves_.assign(T * n_in, {});
    ewh_moves_.assign(T * n_w * n_in, {});
    for (std::size_t t = 0; t < T; ++t) {
        const ExogenousSlot& exo = scenario_.exogenous[t];
        for (std::size_t k = 0; k < n_in; ++k) {
            auto& moves = ac_moves_[t * n_in + k];
            if (!scenario_.ac) {
                moves.push_back(ThermalMove{0, 0, 0.0});
                continue;
            }
            const AcConfig& c = scenario_.ac->config;
            if (c.power_levels_kw.size() > 64) throw HemuError(ErrorKind::invalid_argument, "too many AC levels");
            ThermalState here;
            here.indoor_temp_c = ig.value(static_cast<int>(k));
            for (std::size_t l = 0; l < c.power_levels_kw.size(); ++l) {
                const double next = indoor_temp_transition(here, c.power_levels_kw[l], exo.outdoor_temp_c, c);
                if (!within_band(next, c.temp_ideal_c, c.temp_tolerance_c)) continue;
                moves.push_back(ThermalMove{static_cast<int>(l), exact_index(ig, next, "indoor temperature"),
                                            c.power_levels_kw[l]});
            }
        }
        for (std::size_t w = 0; w < n_w; ++w) {
            for (std::size_t k = 0; k < n_in; ++k) {
                auto& moves = ewh_moves_[(t * n_w + w) * n_in + k];
                if (!scenario_.ewh) {
                    moves.push_back(ThermalMove{0, 0, 0.0});
                    continue;
                }
                const EwhConfig& c = scenario_.ewh->config;
                if (c.power_levels_kw.size() > 64) throw HemuError(ErrorKind::invalid_argument, "too many EWH levels");
                ThermalState here;
                here.indoor_temp_c = scenario_.ac ? ig.value(static_cast<int>(k)) : exo.outdoor_temp_c;
                here.water_temp_c = wg.value(static_cast<int>(w));
                for (std::size_t l = 0; l < c.power_levels_kw.size(); ++l) {
                    const double next =
                        water_temp_transition(here, c.power_levels_kw[l], exo.water_draw_kg_per_h, c, dt_);
                    if (!within_band(next, c.temp_ideal_c, c.temp_tolerance_c)) continue;
                    moves.push_back(ThermalMove{static_cast<int>(l), exact_index(wg, next, "water temperature"),
                                                c.power_levels_kw[l]});
                }
            }
        }
    }

    // Discomfort per thermal cell and budget bookkeeping.
    tdl_.assign(n_in * n_w, 0.0);
    units_.assign(n_in * n_w, 0);
    for (std::size_t k = 0; k < n_in; ++k) {
        for (std::size_t w = 0; w < n_w; ++w) {
            ThermalState cell;
            cell.indoor_temp_c = ig.value(static_cast<int>(k));
            cell.water_temp_c = wg.value(static_cast<int>(w));
            tdl_[k * n_w + w] = tdl_stage(cell, scenario_);
        }
    }
    if (budget_) {
        const double eps = budget_->epsilon;
        per_slot_cap_ = per_slot_tdl_cap(eps, horizon_);
        const double terms = scenario_.thermal_terms();
        const double excess_budget = eps - terms * horizon_;
        bucket_width_ = excess_budget > 1e-9 ? excess_budget / (buckets - 1) : 0.0;
        for (std::size_t cell = 0; cell < tdl_.size(); ++cell) {
            const double excess = std::max(0.0, tdl_[cell] - terms);
            int units;
            if (bucket_width_ > 0.0) {
                units = static_cast<int>(std::ceil(excess / bucket_width_ - 1e-9));
            } else {
                units = excess <= 1e-12 ? 0 : buckets;
            }
            units_[cell] = std::clamp(units, 0, buckets);
        }
    }
}

std::size_t Problem::initial_index() const {
    SystemState s0 = initial_state(scenario_);
    if (budget_) {
        StateGrid::Components c;
        grid_.unpack(grid_.encode(s0), c);
        const double tdl0 = tdl_[static_cast<std::size_t>(c.indoor) * static_cast<std::size_t>(grid_.water_grid().count) +
                                 static_cast<std::size_t>(c.water)];
        if (budget_->mode == BudgetMode::per_slot) {
            if (tdl0 > per_slot_cap_) {
                throw HemuError(ErrorKind::infeasible_budget, "initial temperatures exceed the per-slot budget", 0);
            }
        } else {
            if (budget_->epsilon < scenario_.thermal_terms() * horizon_ - 1e-9) {
                throw HemuError(ErrorKind::infeasible_budget, "budget is below the smallest possible discomfort", 0);
            }
            const int units = units_for(c.indoor, c.water);
            if (units >= grid_.buckets()) {
                throw HemuError(ErrorKind::infeasible_budget, "initial temperatures exceed the budget", 0);
            }
            s0.tdl_bucket = units;
        }
    }
    return grid_.encode(s0);
}

Decision Problem::decode_decision(DecisionCode code) const {
    Decision d;
    d.battery_steps = soc_deltas_.at((code >> 24) & 0xFFu);
    d.appliance_on = (code >> 12) & 0xFFFu;
    d.ac_level = static_cast<int>((code >> 6) & 0x3Fu);
    d.ewh_level = static_cast<int>(code & 0x3Fu);
    return d;
}

}  // namespace hemu
