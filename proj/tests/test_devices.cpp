#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <set>

#include "hemu/devices.hpp"
#include "hemu/error.hpp"
#include "hemu/objectives.hpp"
#include "hemu/problem.hpp"
#include "hemu/system.hpp"
#include "support.hpp"

using namespace hemu;
using hemu::test::kind_of;
using doctest::Approx;

namespace {

// Every on/off pattern (bit t = on at slot t) reachable through the feasible sets.
std::set<unsigned> reachable_patterns(const Scenario& s) {
    std::set<unsigned> out;
    std::function<void(const SystemState&, unsigned)> walk = [&](const SystemState& st, unsigned bits) {
        if (st.slot == s.slots()) {
            out.insert(bits);
            return;
        }
        for (const Decision& d : enumerate_feasible_decisions(st, s)) {
            walk(system_transition(st, d, s), bits | (d.appliance(0) ? 1u << st.slot : 0u));
        }
    };
    walk(initial_state(s), 0);
    return out;
}

}  // namespace

TEST_CASE("battery transition on the SOC grid") {
    BatteryConfig cfg;
    CHECK(battery_transition({0.5}, 0.0, cfg).soc == Approx(0.5));
    CHECK(battery_transition({0.5}, 0.1, cfg).soc == Approx(0.6));
    CHECK(kind_of([&] { battery_transition({0.8}, 0.1, cfg); }) == ErrorKind::infeasible_decision);
    CHECK(kind_of([&] { battery_transition({0.5}, 0.4, cfg); }) == ErrorKind::infeasible_decision);
    CHECK(kind_of([&] { battery_transition({0.5}, 0.05, cfg); }) == ErrorKind::infeasible_decision);
}

TEST_CASE("battery power follows the charge and discharge branches") {
    BatteryConfig cfg;
    CHECK(battery_power(0.5, 0.5, cfg, 0.5) == 0.0);
    CHECK(battery_power(0.5, 0.6, cfg, 0.5) == Approx(1.0526).epsilon(1e-4));
    CHECK(battery_power(0.6, 0.5, cfg, 0.5) == Approx(-0.95));
}

TEST_CASE("battery power sign and energy bookkeeping") {
    BatteryConfig cfg;
    const double dt = 0.5;
    for (int i = 0; i < 7; ++i) {
        const double soc = 0.2 + 0.1 * i;
        for (double dsoc : battery_feasible_decisions({soc}, cfg)) {
            const double next = battery_transition({soc}, dsoc, cfg).soc;
            const double p = battery_power(soc, next, cfg, dt);
            if (dsoc > 1e-12) {
                CHECK(p > 0.0);
                CHECK(p * cfg.eta_charge * dt / cfg.capacity_kwh == Approx(next - soc));
            } else if (dsoc < -1e-12) {
                CHECK(p < 0.0);
                CHECK(p * dt / (cfg.capacity_kwh * cfg.eta_discharge) == Approx(next - soc));
            } else {
                CHECK(p == 0.0);
            }
        }
    }
}

TEST_CASE("battery feasible deltas at the bounds and inside") {
    BatteryConfig cfg;
    auto top = battery_feasible_decisions({0.8}, cfg);
    REQUIRE(top.size() == 4);
    CHECK(top.front() == Approx(-0.3));
    CHECK(top.back() == Approx(0.0));
    CHECK(battery_feasible_decisions({0.5}, cfg).size() == 7);
    auto bottom = battery_feasible_decisions({0.2}, cfg);
    REQUIRE(bottom.size() == 4);
    CHECK(bottom.front() == Approx(0.0));
    CHECK(bottom.back() == Approx(0.3));
    for (int i = 0; i < 7; ++i) {
        auto set = battery_feasible_decisions({0.2 + 0.1 * i}, cfg);
        CHECK(std::count_if(set.begin(), set.end(), [](double d) { return std::abs(d) < 1e-12; }) == 1);
    }
}

TEST_CASE("appliance transitions") {
    const DeferrableAppliance wm = test::washer(18, 35);
    CHECK(appliance_transition({0}, false, wm, 10, 48).progress == 0);
    CHECK(appliance_transition({2}, true, wm, 20, 48).progress == 3);
    CHECK(kind_of([&] { appliance_transition({3}, true, wm, 21, 48); }) == ErrorKind::infeasible_decision);
    CHECK(kind_of([&] { appliance_transition({0}, true, wm, 5, 48); }) == ErrorKind::infeasible_decision);
}

TEST_CASE("appliance feasible sets") {
    const DeferrableAppliance wm = test::washer(18, 35);
    SUBCASE("mid-run non-interruptible must stay on") {
        CHECK(appliance_feasible_decisions({1}, wm, 20, 48) == SwitchOptions{false, true});
    }
    SUBCASE("outside the window only off") {
        CHECK(appliance_feasible_decisions({0}, wm, 5, 48) == SwitchOptions{true, false});
        CHECK(appliance_feasible_decisions({0}, wm, 40, 48).empty());
        const DeferrableAppliance ev = test::pev(36, 11, 8);
        CHECK(appliance_feasible_decisions({0}, ev, 20, 48) == SwitchOptions{true, false});
    }
    SUBCASE("latest start forces the start") {
        CHECK(appliance_feasible_decisions({0}, wm, 32, 48) == SwitchOptions{true, true});
        CHECK(appliance_feasible_decisions({0}, wm, 33, 48) == SwitchOptions{false, true});
    }
    SUBCASE("completed device idles") {
        CHECK(appliance_feasible_decisions({3}, wm, 25, 48) == SwitchOptions{true, false});
    }
    SUBCASE("interruptible at the boundary where slots left equal work left") {
        const DeferrableAppliance ev = test::pev(1, 4, 3);
        // t = beta - (I - progress) + 1 = 4 - 2 + 1 = 3 with progress 1
        CHECK(appliance_feasible_decisions({1}, ev, 3, 6) == SwitchOptions{false, true});
        CHECK(appliance_feasible_decisions({1}, ev, 2, 6) == SwitchOptions{true, true});
        CHECK(appliance_feasible_decisions({0}, ev, 3, 6).empty());
    }
}

TEST_CASE("non-interruptible schedules are single contiguous blocks inside the window") {
    for (int start = 0; start < 6; ++start) {
        for (int end = start; end < 6; ++end) {
            for (int dur = 1; dur <= end - start + 1; ++dur) {
                Scenario s = test::flat(6);
                s.appliances.emplace_back(test::washer(start, end, std::vector<double>(static_cast<std::size_t>(dur), 1.0)));
                std::set<unsigned> expected;
                for (int b = start; b + dur - 1 <= end; ++b) expected.insert(((1u << dur) - 1u) << b);
                CHECK(reachable_patterns(s) == expected);
            }
        }
    }
}

TEST_CASE("interruptible schedules have exactly I on-slots inside the window") {
    for (int start = 0; start < 6; ++start) {
        for (int end = start; end < 6; ++end) {
            for (int need = 1; need <= end - start + 1; ++need) {
                Scenario s = test::flat(6);
                s.appliances.emplace_back(test::pev(start, end, need));
                std::set<unsigned> expected;
                const unsigned window = ((1u << (end - start + 1)) - 1u) << start;
                for (unsigned bits = 0; bits < 64; ++bits) {
                    if ((bits & ~window) == 0 && std::popcount(bits) == need) expected.insert(bits);
                }
                CHECK(reachable_patterns(s) == expected);
            }
        }
    }
}

TEST_CASE("wrapping interruptible window") {
    Scenario s = test::flat(6);
    s.appliances.emplace_back(test::pev(4, 1, 2));  // slots 4, 5, 0, 1
    for (unsigned bits : reachable_patterns(s)) {
        CHECK((bits & 0b001100u) == 0u);
        CHECK(std::popcount(bits) == 2);
    }
    CHECK(reachable_patterns(s).size() == 6);
}

TEST_CASE("indoor temperature model") {
    AcConfig cfg;
    ThermalState st{22.0, 60.0};
    cfg.sigma = 1.0;
    CHECK(indoor_temp_transition(st, 2.5, 30.0, cfg) == 22.0);
    cfg.sigma = 0.0;
    CHECK(indoor_temp_transition(st, 0.0, 23.0, cfg) == 23.0);
    cfg.sigma = 0.9;
    CHECK(indoor_temp_raw(22.0, 2.0, 30.0, cfg) == Approx(22.55));
    CHECK(indoor_temp_transition(st, 2.0, 30.0, cfg) == 22.5);
}

TEST_CASE("snapping goes to the nearest point with ties toward the ideal") {
    CHECK(snap_temperature(22.74, 22.0, 2.0, 0.5) == 22.5);
    CHECK(snap_temperature(22.76, 22.0, 2.0, 0.5) == 23.0);
    CHECK(snap_temperature(22.75, 22.0, 2.0, 0.5) == 22.5);
    CHECK(snap_temperature(21.25, 22.0, 2.0, 0.5) == 21.5);
    CHECK(snap_temperature(25.1, 22.0, 2.0, 0.5) == 25.0);  // outside the band stays outside
}

TEST_CASE("indoor model relaxes monotonically toward the outdoor temperature") {
    AcConfig cfg;
    double t = 20.0;
    for (int i = 0; i < 200; ++i) {
        const double next = indoor_temp_raw(t, 0.0, 30.0, cfg);
        CHECK(next > t);
        CHECK(next < 30.0);
        t = next;
    }
    CHECK(t == Approx(30.0).epsilon(1e-4));
}

TEST_CASE("water temperature model") {
    EwhConfig cfg;
    CHECK(water_temp_raw({60.0, 60.0}, 0.0, 0.0, cfg, 0.5) == 60.0);
    EwhConfig heat = cfg;
    heat.tank_mass_kg = 150.0;
    heat.thermal_conductance = 0.0;
    CHECK(water_temp_raw({22.0, 55.0}, 4.0, 0.0, heat, 0.5) - 55.0 == Approx(11.46).epsilon(1e-3));
    CHECK(water_temp_raw({22.0, 60.0}, 0.0, 30.0, cfg, 0.5) < 60.0);
}

TEST_CASE("tank ambient is the indoor temperature before the AC update") {
    Scenario s = test::flat(2);
    s.exogenous[0].outdoor_temp_c = 20.0;
    s.exogenous[0].water_draw_kg_per_h = 0.0;
    s.ac = AcSetup{};
    s.ac->initial_temp_c = 24.0;
    s.ewh = EwhSetup{};
    s.ewh->config.thermal_conductance = 0.02;  // exaggerated so the ambient matters
    const SystemState s0 = initial_state(s);
    const SystemState s1 = system_transition(s0, Decision{0, 0, 4, 0}, s);
    CHECK(s1.thermal.indoor_temp_c == indoor_temp_transition(s0.thermal, 2.5, 20.0, s.ac->config));
    CHECK(s1.thermal.indoor_temp_c != s0.thermal.indoor_temp_c);
    CHECK(s1.thermal.water_temp_c == water_temp_transition(s0.thermal, 0.0, 0.0, s.ewh->config, 0.5));
    CHECK(water_temp_raw(s0.thermal, 0.0, 0.0, s.ewh->config, 0.5) != water_temp_raw(s1.thermal, 0.0, 0.0, s.ewh->config, 0.5));
}

TEST_CASE("thermal feasible pairs") {
    Scenario s = test::flat(1);
    s.ac = AcSetup{};
    s.ewh = EwhSetup{};
    SUBCASE("mild conditions keep every pair") {
        const auto pairs = thermal_feasible_decisions({22.0, 59.0}, ExogenousSlot{0, 0, 24.0, 2.0}, s, 0);
        CHECK(pairs.size() == 10);
    }
    SUBCASE("heat leaves only full cooling") {
        const auto pairs = thermal_feasible_decisions({24.0, 59.0}, ExogenousSlot{0, 0, 30.4, 2.0}, s, 0);
        REQUIRE(pairs.size() == 2);
        for (const auto& p : pairs) CHECK(p.first == 4);
    }
    SUBCASE("cooling that would undershoot the lower edge is excluded") {
        const auto pairs = enumerate_thermal_decisions({20.0, 60.0}, ExogenousSlot{0, 0, 18.0, 2.0}, s);
        std::set<int> ac;
        for (const auto& p : pairs) ac.insert(p.first);
        CHECK(ac == std::set<int>{0, 1});
    }
    SUBCASE("no pair at all is a dead end") {
        CHECK(kind_of([&] { thermal_feasible_decisions({24.0, 60.0}, ExogenousSlot{0, 0, 40.0, 2.0}, s, 7); }) ==
              ErrorKind::dead_end);
    }
}

TEST_CASE("system transition") {
    SUBCASE("idle at equilibrium only advances the slot") {
        Scenario s = test::flat(3);
        s.exogenous.assign(3, ExogenousSlot{0.0, 0.4, 22.0, 0.0});
        s.ac = AcSetup{};
        s.ewh = EwhSetup{};
        s.ewh->config.thermal_conductance = 0.0;
        s.battery = BatterySetup{};
        const SystemState s0 = initial_state(s);
        SystemState s1 = system_transition(s0, Decision{}, s);
        CHECK(s1.slot == 1);
        s1.slot = 0;
        CHECK(s1 == s0);
    }
    SUBCASE("washing machine started at its window start") {
        Scenario s = test::flat(48);
        s.appliances.emplace_back(test::washer(18, 35));
        SystemState st = initial_state(s);
        st.slot = 18;
        const Decision on{0, 1u, 0, 0};
        CHECK(system_transition(st, on, s).appliances[0].progress == 1);
        CHECK(total_load(st, on, s) == Approx(0.5 + 0.4));
    }
    SUBCASE("infeasible component propagates") {
        Scenario s = test::flat(2);
        s.battery = BatterySetup{};
        s.battery->initial_soc = 0.8;
        CHECK(kind_of([&] { system_transition(initial_state(s), Decision{1, 0, 0, 0}, s); }) ==
              ErrorKind::infeasible_decision);
    }
}

TEST_CASE("decision counts") {
    SUBCASE("all devices at an interior state") {
        Scenario s = test::shipped(5);
        for (auto& a : s.appliances) {
            std::visit([](auto& x) { x.window_start = 0; x.window_end = 47; }, a);
        }
        SystemState st = initial_state(s);
        st.slot = 10;
        st.thermal = {22.0, 59.0};
        s.exogenous[10] = ExogenousSlot{0.0, 0.4, 24.0, 2.0};
        CHECK(feasible_decisions(st, s).size() == 560);
        CHECK(nominal_decision_count(s) == 560);
    }
    SUBCASE("deferrable appliances only") {
        Scenario s = test::shipped(1);
        for (auto& a : s.appliances) {
            std::visit([](auto& x) { x.window_start = 0; x.window_end = 47; }, a);
        }
        SystemState st = initial_state(s);
        st.slot = 10;
        CHECK(feasible_decisions(st, s).size() == 8);
    }
    SUBCASE("everything finished and nothing else to control") {
        Scenario s = test::flat(4);
        s.appliances.emplace_back(test::washer(0, 1, {1.0}));
        SystemState st = initial_state(s);
        st.slot = 2;
        st.appliances[0].progress = 1;
        const auto d = feasible_decisions(st, s);
        REQUIRE(d.size() == 1);
        CHECK(d[0] == Decision{});
    }
    SUBCASE("nominal counts for the five cases") {
        const std::size_t expected[] = {8, 40, 80, 280, 560};
        for (int c = 1; c <= 5; ++c) CHECK(nominal_decision_count(test::shipped(c)) == expected[c - 1]);
    }
}

TEST_CASE("state grid cardinality per case") {
    const std::size_t expected[] = {180, 1620, 17820, 11340, 124740};
    for (int c = 1; c <= 5; ++c) {
        const Scenario s = test::shipped(c);
        CHECK(StateGrid(s, 1).cardinality() == expected[c - 1]);
    }
}

TEST_CASE("state grid encodes and decodes losslessly") {
    const Scenario s = test::shipped(5);
    const StateGrid grid(s, 1);
    for (std::size_t i = 0; i < grid.cardinality(); i += 37) {
        const SystemState st = grid.decode(i, 5);
        CHECK(grid.encode(st) == i);
    }
    SystemState off = grid.decode(0, 0);
    off.battery.soc = 0.55;
    CHECK(kind_of([&] { grid.encode(off); }) == ErrorKind::invalid_argument);
}

TEST_CASE("random rollouts stay inside every band") {
    std::mt19937_64 rng(7);
    for (int c : {3, 5}) {
        const Scenario s = test::shipped(c);
        for (int run = 0; run < 40; ++run) {
            SystemState st = initial_state(s);
            for (int t = 0; t < s.slots(); ++t) {
                const auto options = enumerate_feasible_decisions(st, s);
                if (options.empty()) break;
                st = system_transition(st, options[rng() % options.size()], s);
                CHECK(within_band(st.thermal.indoor_temp_c, 22.0, 2.0));
                CHECK(within_band(st.thermal.water_temp_c, 60.0, 5.0));
                if (s.battery) CHECK((st.battery.soc >= 0.2 - 1e-9 && st.battery.soc <= 0.8 + 1e-9));
                for (std::size_t a = 0; a < s.appliances.size(); ++a) {
                    CHECK(st.appliances[a].progress <= required_slots(s.appliances[a]));
                }
            }
        }
    }
}
