#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "hemu/error.hpp"
#include "hemu/exact_dp.hpp"
#include "hemu/scenario.hpp"
#include "hemu/scenario_io.hpp"
#include "hemu/system.hpp"

#ifndef HEMU_SOURCE_DIR
#define HEMU_SOURCE_DIR "."
#endif

namespace hemu::test {

/// Kind of the HemuError thrown by `f`; fails the test when nothing is thrown.
inline ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const HemuError& e) {
        return e.kind();
    }
    FAIL("expected a HemuError");
    return ErrorKind::invalid_argument;
}

inline std::string scenario_path(const std::string& name) {
    return std::string(HEMU_SOURCE_DIR) + "/scenarios/" + name + ".scenario";
}

inline Scenario shipped(int n) { return load_scenario(scenario_path("case" + std::to_string(n))); }

/// Flat day: constant price, no PV, small base load, mild weather.
inline Scenario flat(int slots, double price = 10.0) {
    Scenario s;
    s.name = "flat";
    s.horizon = {slots, 0.5};
    s.tariff.assign(static_cast<std::size_t>(slots), TariffSlot{price, 6.0});
    s.exogenous.assign(static_cast<std::size_t>(slots), ExogenousSlot{0.0, 0.4, 24.0, 2.0});
    return s;
}

inline NonInterruptibleAppliance washer(int start, int end, std::vector<double> profile = {0.5, 2.0, 1.2}) {
    return NonInterruptibleAppliance{"washer", std::move(profile), start, end};
}

inline InterruptibleAppliance pev(int start, int end, int slots, double kw = 3.2) {
    return InterruptibleAppliance{"pev", kw, start, end, slots};
}

/// Random instance with T <= 6 and at most `cap` enumerable sequences.
inline Scenario random_toy(std::mt19937_64& rng, double cap = 1e6) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const int T = 2 + static_cast<int>(rng() % 5);
        Scenario s;
        s.name = "toy";
        s.horizon = {T, 0.5};
        for (int t = 0; t < T; ++t) {
            s.tariff.push_back(TariffSlot{std::round(5.0 + 25.0 * unit(rng)), 6.0});
            s.exogenous.push_back(ExogenousSlot{std::round(30.0 * unit(rng)) / 10.0, 0.2 + std::round(10.0 * unit(rng)) / 10.0,
                                                std::round(200.0 + 80.0 * unit(rng)) / 10.0,
                                                unit(rng) < 0.2 ? 85.0 : std::round(40.0 * unit(rng)) / 10.0});
        }
        if (unit(rng) < 0.5) {
            BatterySetup b;
            b.initial_soc = 0.2 + 0.1 * static_cast<double>(rng() % 7);
            b.config.replacement_cost = unit(rng) < 0.5 ? 150000.0 : 1500.0;
            s.battery = b;
        }
        const int n_app = static_cast<int>(rng() % 3);
        for (int a = 0; a < n_app; ++a) {
            const int start = static_cast<int>(rng() % static_cast<unsigned>(T));
            const int end = start + static_cast<int>(rng() % static_cast<unsigned>(T - start));
            const int len = end - start + 1;
            if (rng() % 2 == 0) {
                std::vector<double> profile;
                const int dur = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(len, 3)));
                for (int k = 0; k < dur; ++k) profile.push_back(0.3 + std::round(20.0 * unit(rng)) / 10.0);
                s.appliances.emplace_back(NonInterruptibleAppliance{"ni" + std::to_string(a), profile, start, end});
            } else {
                const int need = 1 + static_cast<int>(rng() % static_cast<unsigned>(len));
                s.appliances.emplace_back(InterruptibleAppliance{"in" + std::to_string(a), 1.0 + std::round(30.0 * unit(rng)) / 10.0,
                                                                 start, end, need});
            }
        }
        if (unit(rng) < 0.5) {
            AcSetup ac;
            ac.initial_temp_c = 20.0 + 0.5 * static_cast<double>(rng() % 9);
            s.ac = ac;
        }
        if (unit(rng) < 0.5) {
            EwhSetup ewh;
            ewh.initial_temp_c = 55.0 + static_cast<double>(rng() % 11);
            s.ewh = ewh;
        }
        if (oracle_size_estimate(s) <= cap) return s;
    }
}

}  // namespace hemu::test
