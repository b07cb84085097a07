#!/usr/bin/env python3
"""Writes the shipped case1..case5 scenarios and the toy scenario.

All profiles are synthetic and pinned to SEED; they only loosely follow a
summer day (two price peaks, midday PV, morning and evening hot-water draws).
"""
import argparse
import json
import math
from pathlib import Path

import numpy as np

SEED = 20200611
T = 48
DT = 0.5


def hours():
    return np.arange(T) * DT


def price_profile(rng):
    h = hours()
    base = 9.0 + 6.0 * np.exp(-((h - 8.0) / 1.5) ** 2) + 15.0 * np.exp(-((h - 19.0) / 2.0) ** 2)
    base += 4.0 * np.exp(-((h - 13.0) / 3.0) ** 2)
    return np.round(base + rng.uniform(-0.8, 0.8, T), 2)


def pv_profile(rng):
    h = hours()
    shape = np.clip(np.sin((h - 6.0) / 13.0 * math.pi), 0.0, None)
    clouds = rng.uniform(0.75, 1.0, T)
    return np.round(5.6 * shape * clouds, 3)


def demand_profile(rng):
    h = hours()
    base = 0.35 + 0.5 * np.exp(-((h - 7.5) / 1.2) ** 2) + 0.9 * np.exp(-((h - 20.0) / 2.0) ** 2)
    return np.round(base + rng.uniform(0.0, 0.15, T), 3)


def outdoor_profile(rng):
    # Kept inside roughly [19, 28] degC so the AC can hold the ideal set point.
    h = hours()
    base = 23.5 + 3.8 * np.sin((h - 9.0) / 24.0 * 2.0 * math.pi)
    return np.round(np.clip(base + rng.uniform(-0.3, 0.3, T), 19.2, 27.6), 2)


def draw_profile(rng):
    # Either a trickle the tank absorbs idle, or a shower-sized flow the 4 kW
    # element can just replace; nothing in between.
    draw = np.round(rng.uniform(0.0, 4.0, T), 2)
    for slot in (14, 15, 40, 41):
        draw[slot] = 85.0
    return draw


def deferrables():
    return [
        {"type": "non_interruptible", "name": "washing_machine",
         "power_profile_kw": [0.5, 2.0, 1.2], "window": ["09:00", "18:00"]},
        {"type": "non_interruptible", "name": "dishwasher",
         "power_profile_kw": [2.2, 0.3, 1.4, 0.3], "window": ["09:00", "18:00"]},
        {"type": "interruptible", "name": "pev", "power_kw": 3.2, "required_slots": 8,
         "window": ["18:00", "06:00"]},
    ]


BATTERY = {
    "capacity_kwh": 5.0, "soc_min": 0.2, "soc_max": 0.8, "soc_step": 0.1,
    "dsoc_min": -0.3, "dsoc_max": 0.3, "eta_charge": 0.95, "eta_discharge": 0.95,
    "eta_selfdischarge": 1.0, "replacement_cost": 150000.0, "nominal_life_cycles": 3000.0,
    "temp_life_curve": [[0, 2100], [10, 2600], [25, 3000], [35, 2700], [45, 2000], [55, 1200]],
    "dod_life_curve": [[0.1, 25000], [0.2, 13000], [0.3, 8800], [0.4, 6600], [0.5, 5300],
                       [0.6, 4400], [0.7, 3800], [0.85, 3000], [1.0, 2500]],
    "initial_soc": 0.5, "location": "indoor",
}

AC = {
    "power_levels_kw": [0, 1, 1.5, 2, 2.5], "temp_ideal_c": 22, "temp_tolerance_c": 2,
    "temp_step_c": 0.5, "sigma": 0.93, "cop": 2.5, "thermal_conductivity": 2.0, "initial_temp_c": 22,
}

EWH = {
    "power_levels_kw": [0, 4], "temp_ideal_c": 60, "temp_tolerance_c": 5, "temp_step_c": 1,
    "tank_mass_kg": 300, "specific_heat": 0.001163, "inlet_temp_c": 20,
    "thermal_conductance": 0.001, "initial_temp_c": 60,
}

CASES = {
    1: ("deferrable appliances only", False, False, False),
    2: ("deferrable appliances and AC", False, True, False),
    3: ("deferrable appliances, AC and EWH", False, True, True),
    4: ("deferrable appliances, AC and battery", True, True, False),
    5: ("all devices", True, True, True),
}


def case(n, profiles):
    desc, battery, ac, ewh = CASES[n]
    doc = {
        "name": f"case{n}",
        "description": f"{desc}; synthetic profiles (seed {SEED})",
        "currency": "cents",
        "horizon": {"slots": T, "slot_hours": DT},
        "tariff": {"price": profiles["price"], "feed_in": [6.0] * T},
        "exogenous": {k: profiles[k] for k in ("pv_kw", "uncontrollable_kw", "outdoor_temp_c",
                                               "water_draw_kg_per_h")},
        "appliances": deferrables(),
    }
    if battery:
        doc["battery"] = BATTERY
    if ac:
        doc["ac"] = AC
    if ewh:
        doc["ewh"] = EWH
    return doc


def toy():
    return {
        "name": "toy",
        "description": "four-slot toy with one non-interruptible appliance",
        "currency": "cents",
        "horizon": {"slots": 4, "slot_hours": 0.5},
        "tariff": {"price": [10, 30, 5, 20], "feed_in": [6, 6, 6, 6]},
        "exogenous": {"pv_kw": [0, 0.5, 0, 0], "uncontrollable_kw": [0.4, 0.4, 0.4, 0.4],
                      "outdoor_temp_c": [24, 24, 24, 24]},
        "appliances": [{"type": "non_interruptible", "name": "washer",
                        "power_profile_kw": [1.0, 2.0], "window_slots": [0, 3]}],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "scenarios"))
    args = ap.parse_args()
    rng = np.random.default_rng(SEED)
    profiles = {
        "price": price_profile(rng).tolist(),
        "pv_kw": pv_profile(rng).tolist(),
        "uncontrollable_kw": demand_profile(rng).tolist(),
        "outdoor_temp_c": outdoor_profile(rng).tolist(),
        "water_draw_kg_per_h": draw_profile(rng).tolist(),
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n in CASES:
        (out / f"case{n}.scenario").write_text(json.dumps(case(n, profiles), indent=2) + "\n")
    (out / "toy.scenario").write_text(json.dumps(toy(), indent=2) + "\n")


if __name__ == "__main__":
    main()
