#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hemu/devices.hpp"

namespace hemu {

struct HorizonConfig {
    int slots = 48;
    double slot_hours = 0.5;

    friend bool operator==(const HorizonConfig&, const HorizonConfig&) = default;
};

struct TariffSlot {
    double price = 0.0;    ///< currency per kWh imported
    double feed_in = 0.0;  ///< currency per kWh exported

    friend bool operator==(const TariffSlot&, const TariffSlot&) = default;
};

struct ExogenousSlot {
    double pv_kw = 0.0;
    double uncontrollable_kw = 0.0;
    double outdoor_temp_c = 20.0;
    double water_draw_kg_per_h = 0.0;

    friend bool operator==(const ExogenousSlot&, const ExogenousSlot&) = default;
};

enum class BatteryLocation { indoor, outdoor };

struct BatterySetup {
    BatteryConfig config;
    double initial_soc = 0.5;
    BatteryLocation location = BatteryLocation::indoor;

    friend bool operator==(const BatterySetup&, const BatterySetup&) = default;
};

struct AcSetup {
    AcConfig config;
    double initial_temp_c = 22.0;

    friend bool operator==(const AcSetup&, const AcSetup&) = default;
};

struct EwhSetup {
    EwhConfig config;
    double initial_temp_c = 60.0;

    friend bool operator==(const EwhSetup&, const EwhSetup&) = default;
};

/// A full day-ahead problem instance. Appliance order defines the order of
/// appliance entries in SystemState and of the bits in Decision.
struct Scenario {
    std::string name;
    std::string description;
    std::string currency = "cents";
    HorizonConfig horizon;
    std::vector<TariffSlot> tariff;
    std::vector<ExogenousSlot> exogenous;
    std::optional<BatterySetup> battery;
    std::vector<DeferrableAppliance> appliances;
    std::optional<AcSetup> ac;
    std::optional<EwhSetup> ewh;

    int slots() const { return horizon.slots; }
    double dt() const { return horizon.slot_hours; }
    /// Number of temperature terms entering the discomfort objective.
    int thermal_terms() const { return (ac ? 1 : 0) + (ewh ? 1 : 0); }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Checks every structural invariant; throws validation-error naming the
/// offending field path (e.g. `exogenous.pv_kw`).
void validate(const Scenario& scenario);

}  // namespace hemu
