#pragma once

#include <string>

#include "hemu/scenario.hpp"

namespace hemu {

/// Reads a JSON scenario document. Throws parse-error for malformed text and
/// validation-error (with the field path) for bad content.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON text; parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

/// "HH:MM" to the slot starting at that time. Throws validation-error when
/// the time is not on a slot boundary.
int time_to_slot(const std::string& hhmm, double slot_hours, const std::string& path);

}  // namespace hemu
