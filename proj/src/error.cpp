#include "hemu/error.hpp"

namespace hemu {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::infeasible_decision: return "infeasible-decision";
        case ErrorKind::dead_end: return "dead-end";
        case ErrorKind::invalid_dod: return "invalid-dod";
        case ErrorKind::infeasible_schedule: return "infeasible-schedule";
        case ErrorKind::budget_exceeded: return "budget-exceeded";
        case ErrorKind::infeasible_scenario: return "infeasible-scenario";
        case ErrorKind::unreachable_initial_state: return "unreachable-initial-state";
        case ErrorKind::too_large: return "too-large";
        case ErrorKind::infeasible_budget: return "infeasible-budget";
        case ErrorKind::invalid_range: return "invalid-range";
        case ErrorKind::parse_error: return "parse-error";
        case ErrorKind::validation_error: return "validation-error";
        case ErrorKind::invalid_argument: return "invalid-argument";
    }
    return "unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message, std::optional<int> slot) {
    std::string out = to_string(kind);
    if (slot) out += " at slot " + std::to_string(*slot);
    out += ": " + message;
    return out;
}

}  // namespace

HemuError::HemuError(ErrorKind kind, const std::string& message, std::optional<int> slot)
    : std::runtime_error(decorate(kind, message, slot)), kind_(kind), slot_(slot) {}

}  // namespace hemu
