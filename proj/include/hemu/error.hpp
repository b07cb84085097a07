#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace hemu {

enum class ErrorKind {
    infeasible_decision,
    dead_end,
    invalid_dod,
    infeasible_schedule,
    budget_exceeded,
    infeasible_scenario,
    unreachable_initial_state,
    too_large,
    infeasible_budget,
    invalid_range,
    parse_error,
    validation_error,
    invalid_argument,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every recoverable failure in the library is reported as a HemuError.
/// `slot()` is set when the failure is tied to a particular time slot.
class HemuError : public std::runtime_error {
public:
    HemuError(ErrorKind kind, const std::string& message, std::optional<int> slot = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<int> slot() const noexcept { return slot_; }

private:
    ErrorKind kind_;
    std::optional<int> slot_;
};

}  // namespace hemu
