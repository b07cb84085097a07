#include "hemu/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hemu/error.hpp"

namespace hemu {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& reason) {
    throw HemuError(ErrorKind::validation_error, path + ": " + reason);
}

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string at_index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) bad(join(path, it.key()), "unknown field");
    }
}

const json& object_at(const json& j, const std::string& path) {
    if (!j.is_object()) bad(path.empty() ? "<root>" : path, "expected an object");
    return j;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "must be finite");
    return v;
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) bad(path, "expected a string");
    return j.get<std::string>();
}

void read_number(const json& obj, const std::string& path, const char* key, double& out) {
    if (obj.contains(key)) out = number(obj.at(key), join(path, key));
}

void read_int(const json& obj, const std::string& path, const char* key, int& out) {
    if (obj.contains(key)) out = integer(obj.at(key), join(path, key));
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], at_index(path, i)));
    return out;
}

LifeCurve curve(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array of [x, life] pairs");
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = at_index(path, i);
        if (!j[i].is_array() || j[i].size() != 2) bad(p, "expected [x, life]");
        points.emplace_back(number(j[i][0], p + "[0]"), number(j[i][1], p + "[1]"));
    }
    return LifeCurve(std::move(points));
}

std::vector<double> slot_series(const json& obj, const std::string& path, const char* key, std::size_t slots,
                                bool required, double fallback) {
    if (!obj.contains(key)) {
        if (required) bad(join(path, key), "missing");
        return std::vector<double>(slots, fallback);
    }
    auto values = numbers(obj.at(key), join(path, key));
    if (values.size() != slots) {
        bad(join(path, key), "expected " + std::to_string(slots) + " values, got " + std::to_string(values.size()));
    }
    return values;
}

// [start, end] in slots; a "HH:MM" pair names the interval start..end time.
std::pair<int, int> window(const json& obj, const std::string& path, const HorizonConfig& horizon) {
    const bool has_times = obj.contains("window");
    const bool has_slots = obj.contains("window_slots");
    if (has_times == has_slots) bad(join(path, "window"), "give exactly one of window or window_slots");
    if (has_slots) {
        const json& w = obj.at("window_slots");
        const std::string p = join(path, "window_slots");
        if (!w.is_array() || w.size() != 2) bad(p, "expected [start, end]");
        return {integer(w[0], p + "[0]"), integer(w[1], p + "[1]")};
    }
    const json& w = obj.at("window");
    const std::string p = join(path, "window");
    if (!w.is_array() || w.size() != 2) bad(p, "expected [\"HH:MM\", \"HH:MM\"]");
    const int start = time_to_slot(text(w[0], p + "[0]"), horizon.slot_hours, p + "[0]");
    int end = time_to_slot(text(w[1], p + "[1]"), horizon.slot_hours, p + "[1]") - 1;
    if (end < 0) end += horizon.slots;
    return {start % std::max(1, horizon.slots), end};
}

}  // namespace

int time_to_slot(const std::string& hhmm, double slot_hours, const std::string& path) {
    int h = 0, m = 0;
    char colon = 0;
    std::istringstream in(hhmm);
    if (!(in >> h >> colon >> m) || colon != ':' || !in.eof() || h < 0 || h > 24 || m < 0 || m >= 60 ||
        (h == 24 && m != 0)) {
        bad(path, "expected HH:MM, got '" + hhmm + "'");
    }
    const double slots = (h * 60.0 + m) / (slot_hours * 60.0);
    const long k = std::lround(slots);
    if (std::abs(slots - static_cast<double>(k)) > 1e-9) bad(path, "'" + hhmm + "' is not on a slot boundary");
    return static_cast<int>(k);
}

Scenario parse_scenario(const std::string& source) {
    json root;
    try {
        root = json::parse(source);
    } catch (const json::parse_error& e) {
        throw HemuError(ErrorKind::parse_error, e.what());
    }
    object_at(root, "");
    only_keys(root, "", {"name", "description", "currency", "horizon", "tariff", "exogenous", "battery", "appliances",
                         "ac", "ewh"});

    Scenario s;
    if (root.contains("name")) s.name = text(root["name"], "name");
    if (root.contains("description")) s.description = text(root["description"], "description");
    if (root.contains("currency")) s.currency = text(root["currency"], "currency");
    if (root.contains("horizon")) {
        const json& h = object_at(root["horizon"], "horizon");
        only_keys(h, "horizon", {"slots", "slot_hours"});
        read_int(h, "horizon", "slots", s.horizon.slots);
        read_number(h, "horizon", "slot_hours", s.horizon.slot_hours);
    }
    if (s.horizon.slots < 1) bad("horizon.slots", "must be at least 1");
    if (!(s.horizon.slot_hours > 0.0)) bad("horizon.slot_hours", "must be positive");
    const auto slots = static_cast<std::size_t>(s.horizon.slots);

    if (!root.contains("tariff")) bad("tariff", "missing");
    {
        const json& t = object_at(root["tariff"], "tariff");
        only_keys(t, "tariff", {"price", "feed_in"});
        const auto price = slot_series(t, "tariff", "price", slots, true, 0.0);
        const auto feed_in = slot_series(t, "tariff", "feed_in", slots, false, 0.0);
        s.tariff.resize(slots);
        for (std::size_t i = 0; i < slots; ++i) s.tariff[i] = TariffSlot{price[i], feed_in[i]};
    }

    if (!root.contains("exogenous")) bad("exogenous", "missing");
    {
        const json& e = object_at(root["exogenous"], "exogenous");
        only_keys(e, "exogenous", {"pv_kw", "uncontrollable_kw", "outdoor_temp_c", "water_draw_kg_per_h"});
        const auto pv = slot_series(e, "exogenous", "pv_kw", slots, false, 0.0);
        const auto un = slot_series(e, "exogenous", "uncontrollable_kw", slots, false, 0.0);
        const auto out = slot_series(e, "exogenous", "outdoor_temp_c", slots, true, 0.0);
        const auto draw = slot_series(e, "exogenous", "water_draw_kg_per_h", slots, false, 0.0);
        s.exogenous.resize(slots);
        for (std::size_t i = 0; i < slots; ++i) s.exogenous[i] = ExogenousSlot{pv[i], un[i], out[i], draw[i]};
    }

    if (root.contains("battery") && !root["battery"].is_null()) {
        const std::string p = "battery";
        const json& b = object_at(root[p], p);
        only_keys(b, p, {"capacity_kwh", "soc_min", "soc_max", "soc_step", "dsoc_min", "dsoc_max", "eta_charge",
                         "eta_discharge", "eta_selfdischarge", "replacement_cost", "nominal_life_cycles",
                         "temp_life_curve", "dod_life_curve", "initial_soc", "location"});
        BatterySetup setup;
        BatteryConfig& c = setup.config;
        read_number(b, p, "capacity_kwh", c.capacity_kwh);
        read_number(b, p, "soc_min", c.soc_min);
        read_number(b, p, "soc_max", c.soc_max);
        read_number(b, p, "soc_step", c.soc_step);
        read_number(b, p, "dsoc_min", c.dsoc_min);
        read_number(b, p, "dsoc_max", c.dsoc_max);
        read_number(b, p, "eta_charge", c.eta_charge);
        read_number(b, p, "eta_discharge", c.eta_discharge);
        read_number(b, p, "eta_selfdischarge", c.eta_selfdischarge);
        read_number(b, p, "replacement_cost", c.replacement_cost);
        read_number(b, p, "nominal_life_cycles", c.nominal_life_cycles);
        if (b.contains("temp_life_curve")) c.temp_life_curve = curve(b["temp_life_curve"], p + ".temp_life_curve");
        if (b.contains("dod_life_curve")) c.dod_life_curve = curve(b["dod_life_curve"], p + ".dod_life_curve");
        read_number(b, p, "initial_soc", setup.initial_soc);
        if (b.contains("location")) {
            const std::string loc = text(b["location"], p + ".location");
            if (loc == "indoor") {
                setup.location = BatteryLocation::indoor;
            } else if (loc == "outdoor") {
                setup.location = BatteryLocation::outdoor;
            } else {
                bad(p + ".location", "expected indoor or outdoor");
            }
        }
        s.battery = setup;
    }

    if (root.contains("appliances")) {
        const json& list = root["appliances"];
        if (!list.is_array()) bad("appliances", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = at_index("appliances", i);
            const json& a = object_at(list[i], p);
            if (!a.contains("type")) bad(p + ".type", "missing");
            const std::string type = text(a["type"], p + ".type");
            if (type == "non_interruptible") {
                only_keys(a, p, {"type", "name", "power_profile_kw", "window", "window_slots"});
                NonInterruptibleAppliance d;
                if (a.contains("name")) d.name = text(a["name"], p + ".name");
                if (!a.contains("power_profile_kw")) bad(p + ".power_profile_kw", "missing");
                d.power_profile_kw = numbers(a["power_profile_kw"], p + ".power_profile_kw");
                std::tie(d.window_start, d.window_end) = window(a, p, s.horizon);
                s.appliances.emplace_back(std::move(d));
            } else if (type == "interruptible") {
                only_keys(a, p, {"type", "name", "power_kw", "required_slots", "window", "window_slots"});
                InterruptibleAppliance d;
                if (a.contains("name")) d.name = text(a["name"], p + ".name");
                if (!a.contains("power_kw")) bad(p + ".power_kw", "missing");
                d.power_kw = number(a["power_kw"], p + ".power_kw");
                if (!a.contains("required_slots")) bad(p + ".required_slots", "missing");
                d.required_slots = integer(a["required_slots"], p + ".required_slots");
                std::tie(d.window_start, d.window_end) = window(a, p, s.horizon);
                s.appliances.emplace_back(std::move(d));
            } else {
                bad(p + ".type", "expected non_interruptible or interruptible");
            }
        }
    }

    if (root.contains("ac") && !root["ac"].is_null()) {
        const std::string p = "ac";
        const json& a = object_at(root[p], p);
        only_keys(a, p, {"power_levels_kw", "temp_ideal_c", "temp_tolerance_c", "temp_step_c", "sigma", "cop",
                         "thermal_conductivity", "initial_temp_c"});
        AcSetup setup;
        AcConfig& c = setup.config;
        if (a.contains("power_levels_kw")) c.power_levels_kw = numbers(a["power_levels_kw"], p + ".power_levels_kw");
        read_number(a, p, "temp_ideal_c", c.temp_ideal_c);
        read_number(a, p, "temp_tolerance_c", c.temp_tolerance_c);
        read_number(a, p, "temp_step_c", c.temp_step_c);
        read_number(a, p, "sigma", c.sigma);
        read_number(a, p, "cop", c.cop);
        read_number(a, p, "thermal_conductivity", c.thermal_conductivity);
        setup.initial_temp_c = c.temp_ideal_c;
        read_number(a, p, "initial_temp_c", setup.initial_temp_c);
        s.ac = setup;
    }

    if (root.contains("ewh") && !root["ewh"].is_null()) {
        const std::string p = "ewh";
        const json& w = object_at(root[p], p);
        only_keys(w, p, {"power_levels_kw", "temp_ideal_c", "temp_tolerance_c", "temp_step_c", "tank_mass_kg",
                         "specific_heat", "inlet_temp_c", "thermal_conductance", "initial_temp_c"});
        EwhSetup setup;
        EwhConfig& c = setup.config;
        if (w.contains("power_levels_kw")) c.power_levels_kw = numbers(w["power_levels_kw"], p + ".power_levels_kw");
        read_number(w, p, "temp_ideal_c", c.temp_ideal_c);
        read_number(w, p, "temp_tolerance_c", c.temp_tolerance_c);
        read_number(w, p, "temp_step_c", c.temp_step_c);
        read_number(w, p, "tank_mass_kg", c.tank_mass_kg);
        read_number(w, p, "specific_heat", c.specific_heat);
        read_number(w, p, "inlet_temp_c", c.inlet_temp_c);
        read_number(w, p, "thermal_conductance", c.thermal_conductance);
        setup.initial_temp_c = c.temp_ideal_c;
        read_number(w, p, "initial_temp_c", setup.initial_temp_c);
        s.ewh = setup;
    }

    validate(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw HemuError(ErrorKind::parse_error, "cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

namespace {

json curve_json(const LifeCurve& c) {
    json out = json::array();
    for (const auto& [x, y] : c.points()) out.push_back({x, y});
    return out;
}

}  // namespace

std::string dump_scenario(const Scenario& s) {
    json root = json::object();
    root["name"] = s.name;
    root["description"] = s.description;
    root["currency"] = s.currency;
    root["horizon"] = {{"slots", s.horizon.slots}, {"slot_hours", s.horizon.slot_hours}};

    json price = json::array(), feed_in = json::array();
    for (const auto& t : s.tariff) {
        price.push_back(t.price);
        feed_in.push_back(t.feed_in);
    }
    root["tariff"] = {{"price", price}, {"feed_in", feed_in}};

    json pv = json::array(), un = json::array(), out = json::array(), draw = json::array();
    for (const auto& e : s.exogenous) {
        pv.push_back(e.pv_kw);
        un.push_back(e.uncontrollable_kw);
        out.push_back(e.outdoor_temp_c);
        draw.push_back(e.water_draw_kg_per_h);
    }
    root["exogenous"] = {{"pv_kw", pv}, {"uncontrollable_kw", un}, {"outdoor_temp_c", out}, {"water_draw_kg_per_h", draw}};

    if (s.battery) {
        const BatteryConfig& c = s.battery->config;
        root["battery"] = {{"capacity_kwh", c.capacity_kwh},
                           {"soc_min", c.soc_min},
                           {"soc_max", c.soc_max},
                           {"soc_step", c.soc_step},
                           {"dsoc_min", c.dsoc_min},
                           {"dsoc_max", c.dsoc_max},
                           {"eta_charge", c.eta_charge},
                           {"eta_discharge", c.eta_discharge},
                           {"eta_selfdischarge", c.eta_selfdischarge},
                           {"replacement_cost", c.replacement_cost},
                           {"nominal_life_cycles", c.nominal_life_cycles},
                           {"temp_life_curve", curve_json(c.temp_life_curve)},
                           {"dod_life_curve", curve_json(c.dod_life_curve)},
                           {"initial_soc", s.battery->initial_soc},
                           {"location", s.battery->location == BatteryLocation::indoor ? "indoor" : "outdoor"}};
    }

    json apps = json::array();
    for (const auto& a : s.appliances) {
        if (const auto* n = std::get_if<NonInterruptibleAppliance>(&a)) {
            apps.push_back({{"type", "non_interruptible"},
                            {"name", n->name},
                            {"power_profile_kw", n->power_profile_kw},
                            {"window_slots", {n->window_start, n->window_end}}});
        } else {
            const auto& f = std::get<InterruptibleAppliance>(a);
            apps.push_back({{"type", "interruptible"},
                            {"name", f.name},
                            {"power_kw", f.power_kw},
                            {"required_slots", f.required_slots},
                            {"window_slots", {f.window_start, f.window_end}}});
        }
    }
    root["appliances"] = apps;

    if (s.ac) {
        const AcConfig& c = s.ac->config;
        root["ac"] = {{"power_levels_kw", c.power_levels_kw},
                      {"temp_ideal_c", c.temp_ideal_c},
                      {"temp_tolerance_c", c.temp_tolerance_c},
                      {"temp_step_c", c.temp_step_c},
                      {"sigma", c.sigma},
                      {"cop", c.cop},
                      {"thermal_conductivity", c.thermal_conductivity},
                      {"initial_temp_c", s.ac->initial_temp_c}};
    }
    if (s.ewh) {
        const EwhConfig& c = s.ewh->config;
        root["ewh"] = {{"power_levels_kw", c.power_levels_kw},
                       {"temp_ideal_c", c.temp_ideal_c},
                       {"temp_tolerance_c", c.temp_tolerance_c},
                       {"temp_step_c", c.temp_step_c},
                       {"tank_mass_kg", c.tank_mass_kg},
                       {"specific_heat", c.specific_heat},
                       {"inlet_temp_c", c.inlet_temp_c},
                       {"thermal_conductance", c.thermal_conductance},
                       {"initial_temp_c", s.ewh->initial_temp_c}};
    }
    return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw HemuError(ErrorKind::invalid_argument, "cannot write '" + path + "'");
    out << dump_scenario(scenario);
}

}  // namespace hemu
