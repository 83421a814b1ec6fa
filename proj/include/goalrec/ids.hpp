#pragma once

#include <cstdint>
#include <limits>

namespace goalrec {

/// Dense index of a ground fact in GroundedTask::facts.
enum class FactId : std::uint32_t {};
/// Dense index of a ground action in GroundedTask::actions.
enum class ActionId : std::uint32_t {};

constexpr std::uint32_t index(FactId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index(ActionId id) { return static_cast<std::uint32_t>(id); }

}  // namespace goalrec
