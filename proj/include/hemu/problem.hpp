#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hemu/objectives.hpp"
#include "hemu/scenario.hpp"
#include "hemu/system.hpp"

namespace hemu {

enum class BudgetMode { per_slot, accumulated };

/// Upper bound epsilon on daily discomfort. `per_slot` prunes decisions whose
/// successor discomfort exceeds epsilon / T; `accumulated` tracks the spent
/// excess above the minimum on a coarse grid of `accumulated_points` values.
struct TdlBudget {
    double epsilon = 0.0;
    BudgetMode mode = BudgetMode::per_slot;
    int accumulated_points = 32;
};

/// Largest stage discomfort a per-slot budget admits, with a relative slack
/// of 1e-12 so that epsilon = terms * T admits the ideal cell exactly.
double per_slot_tdl_cap(double epsilon, int horizon);

/// Mixed-radix enumeration of the discretised composite state space:
/// SOC x appliance progress x indoor x water (x budget bucket).
class StateGrid {
public:
    struct Components {
        int soc = 0;
        std::array<int, kMaxAppliances> progress{};
        int indoor = 0;
        int water = 0;
        int bucket = 0;
    };

    StateGrid() = default;
    StateGrid(const Scenario& scenario, int budget_buckets);

    std::size_t cardinality() const { return cardinality_; }
    std::size_t appliance_count() const { return radix_progress_.size(); }

    void unpack(std::size_t index, Components& out) const;
    std::size_t pack(const Components& c) const;

    /// Throws invalid-argument when a component is off its grid.
    std::size_t encode(const SystemState& state) const;
    /// Rebuilds the pure-route state for `index` at slot `slot`.
    SystemState decode(std::size_t index, int slot) const;

    const Grid& soc_grid() const { return soc_; }
    const Grid& indoor_grid() const { return indoor_; }
    const Grid& water_grid() const { return water_; }
    int buckets() const { return buckets_; }

    std::size_t soc_stride() const { return stride_soc_; }
    std::size_t progress_stride(std::size_t a) const { return stride_progress_[a]; }
    std::size_t indoor_stride() const { return stride_indoor_; }
    std::size_t water_stride() const { return stride_water_; }
    std::size_t bucket_stride() const { return stride_bucket_; }

private:
    const Scenario* scenario_ = nullptr;
    bool has_battery_ = false, has_ac_ = false, has_ewh_ = false;
    Grid soc_{0.0, 1.0, 1}, indoor_{0.0, 1.0, 1}, water_{0.0, 1.0, 1};
    std::vector<int> radix_progress_;
    int buckets_ = 1;
    std::size_t stride_soc_ = 1, stride_indoor_ = 1, stride_water_ = 1, stride_bucket_ = 1;
    std::array<std::size_t, kMaxAppliances> stride_progress_{};
    std::size_t cardinality_ = 1;
};

/// Packed decision: battery delta index, appliance mask, AC level, EWH level.
using DecisionCode = std::uint32_t;
inline constexpr DecisionCode kNoDecision = 0xFFFFFFFFu;

/// A scenario compiled into lookup tables for the solvers. Transitions and
/// stage costs are produced by the same device and objective functions as the
/// pure route, so both routes agree bit for bit.
class Problem {
public:
    Problem(const Scenario& scenario, Objective objective, std::optional<TdlBudget> budget = std::nullopt);

    Problem(const Problem&) = delete;
    Problem& operator=(const Problem&) = delete;

    const Scenario& scenario() const { return scenario_; }
    Objective objective() const { return objective_; }
    const std::optional<TdlBudget>& budget() const { return budget_; }
    const StateGrid& grid() const { return grid_; }
    int horizon() const { return horizon_; }

    /// Grid index of the scenario's initial state; throws infeasible-budget
    /// when the initial temperatures already violate the budget.
    std::size_t initial_index() const;

    Decision decode_decision(DecisionCode code) const;
    SystemState state_at(std::size_t index, int slot) const { return grid_.decode(index, slot); }

    /// Visits every feasible decision of `state` at slot `t` in canonical
    /// order as visit(code, stage_cost, successor_index). `reduced` freezes
    /// the battery at a zero SOC delta.
    template <class Visitor>
    void for_each_decision(int t, std::size_t state, bool reduced, Visitor&& visit) const;

private:
    struct BatteryMove {
        int delta_index;
        int next_soc;
        double power_kw;
    };
    struct Combo {
        std::uint32_t mask;
        double power_kw;
        std::size_t offset;
    };
    struct ThermalMove {
        int level;
        int next;
        double power_kw;
    };

    int units_for(int indoor, int water) const {
        return units_[static_cast<std::size_t>(indoor) * static_cast<std::size_t>(grid_.water_grid().count) +
                      static_cast<std::size_t>(water)];
    }

    Scenario scenario_;
    Objective objective_;
    std::optional<TdlBudget> budget_;
    StateGrid grid_;
    int horizon_ = 0;
    double dt_ = 0.0;

    // battery[soc][delta]
    std::vector<int> soc_deltas_;
    int zero_delta_index_ = -1;
    std::vector<std::vector<BatteryMove>> battery_moves_;
    std::vector<double> degradation_;  // [t][soc][indoor]

    // appliances: allowed[t][a][progress] bit0 = off, bit1 = on
    std::vector<std::vector<std::vector<std::uint8_t>>> allowed_;
    std::vector<std::vector<double>> on_power_;  // [a][progress]

    // thermal moves
    std::vector<std::vector<ThermalMove>> ac_moves_;   // [t * n_in + in]
    std::vector<std::vector<ThermalMove>> ewh_moves_;  // [(t * n_w + w) * n_in + in]
    std::vector<double> tdl_;                          // [in * n_w + w]
    std::vector<int> units_;                           // accumulated-budget units per cell
    double per_slot_cap_ = 0.0;
    double bucket_width_ = 0.0;
};

// ---------------------------------------------------------------------------

template <class Visitor>
void Problem::for_each_decision(int t, std::size_t state, bool reduced, Visitor&& visit) const {
    if (t < 0 || t >= horizon_) return;
    StateGrid::Components c;
    grid_.unpack(state, c);

    const std::size_t n_app = grid_.appliance_count();
    std::array<Combo, (1u << kMaxAppliances)> combos;
    std::size_t n_combo = 1;
    combos[0] = Combo{0u, 0.0, 0};
    const auto& allowed_t = allowed_[static_cast<std::size_t>(t)];
    for (std::size_t a = 0; a < n_app; ++a) {
        const int p = c.progress[a];
        const std::uint8_t opts = allowed_t[a][static_cast<std::size_t>(p)];
        if (opts == 0) return;
        if (opts == 1) continue;
        const double pw = on_power_[a][static_cast<std::size_t>(p)];
        const std::size_t stride = grid_.progress_stride(a);
        const std::uint32_t bit = 1u << a;
        if (opts == 2) {
            for (std::size_t i = 0; i < n_combo; ++i) {
                combos[i].mask |= bit;
                combos[i].power_kw += pw;
                combos[i].offset += stride;
            }
            continue;
        }
        for (std::size_t i = n_combo; i-- > 0;) {
            const Combo off = combos[i];
            combos[2 * i] = off;
            combos[2 * i + 1] = Combo{off.mask | bit, off.power_kw + pw, off.offset + stride};
        }
        n_combo *= 2;
    }

    const std::size_t n_in = static_cast<std::size_t>(grid_.indoor_grid().count);
    const std::size_t n_w = static_cast<std::size_t>(grid_.water_grid().count);
    const auto ts = static_cast<std::size_t>(t);
    const auto& ac = ac_moves_[ts * n_in + static_cast<std::size_t>(c.indoor)];
    const auto& ewh = ewh_moves_[(ts * n_w + static_cast<std::size_t>(c.water)) * n_in + static_cast<std::size_t>(c.indoor)];
    if (ac.empty() || ewh.empty()) return;

    const auto& moves = battery_moves_[static_cast<std::size_t>(c.soc)];
    const bool last = t + 1 >= horizon_;
    const TariffSlot& tariff = scenario_.tariff[ts];
    const ExogenousSlot& exo = scenario_.exogenous[ts];
    const double tdl_now = tdl_[static_cast<std::size_t>(c.indoor) * n_w + static_cast<std::size_t>(c.water)];

    const auto soc_stride = static_cast<std::int64_t>(grid_.soc_stride());
    const auto in_stride = static_cast<std::int64_t>(grid_.indoor_stride());
    const auto w_stride = static_cast<std::int64_t>(grid_.water_stride());
    const auto b_stride = static_cast<std::int64_t>(grid_.bucket_stride());
    const auto base = static_cast<std::int64_t>(state);

    for (const BatteryMove& bm : moves) {
        if (reduced && bm.delta_index != zero_delta_index_) continue;
        double rate = 0.0;
        if (bm.power_kw != 0.0) {
            rate = degradation_[(ts * static_cast<std::size_t>(grid_.soc_grid().count) + static_cast<std::size_t>(c.soc)) * n_in +
                                static_cast<std::size_t>(c.indoor)];
        }
        const std::int64_t after_battery = base + (bm.next_soc - c.soc) * soc_stride;
        for (std::size_t ci = 0; ci < n_combo; ++ci) {
            const Combo& combo = combos[ci];
            const std::int64_t after_app = after_battery + static_cast<std::int64_t>(combo.offset);
            for (const ThermalMove& am : ac) {
                for (const ThermalMove& wm : ewh) {
                    std::int64_t next = after_app + (am.next - c.indoor) * in_stride + (wm.next - c.water) * w_stride;
                    if (budget_ && !last) {
                        const std::size_t cell = static_cast<std::size_t>(am.next) * n_w + static_cast<std::size_t>(wm.next);
                        if (budget_->mode == BudgetMode::per_slot) {
                            if (tdl_[cell] > per_slot_cap_) continue;
                        } else {
                            const int bucket = c.bucket + units_for(am.next, wm.next);
                            if (bucket >= grid_.buckets()) continue;
                            next += (bucket - c.bucket) * b_stride;
                        }
                    }
                    double cost;
                    if (objective_ == Objective::coec) {
                        double load = combo.power_kw;
                        load += am.power_kw;
                        load += wm.power_kw;
                        load += exo.uncontrollable_kw;
                        load += bm.power_kw;
                        load -= exo.pv_kw;
                        cost = coec_from_parts(tariff.price, tariff.feed_in, load, rate, bm.power_kw, dt_);
                    } else {
                        cost = tdl_now;
                    }
                    const DecisionCode code = (static_cast<DecisionCode>(bm.delta_index) << 24) | (combo.mask << 12) |
                                              (static_cast<DecisionCode>(am.level) << 6) |
                                              static_cast<DecisionCode>(wm.level);
                    visit(code, cost, static_cast<std::size_t>(next));
                }
            }
        }
    }
}

}  // namespace hemu
