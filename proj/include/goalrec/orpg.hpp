#pragma once

// Optimistic Relaxed Planning Graph. Under the most-optimistic relaxation an
// action fires once its known preconditions hold (possible preconditions are
// ignored) and contributes its add and possible-add effects; delete and
// possible-delete effects are ignored.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "goalrec/deadline.hpp"
#include "goalrec/grounding.hpp"

namespace goalrec {

inline constexpr std::uint32_t kUnreachable = UINT32_MAX;

class Orpg {
 public:
  /// First level at which the fact appears, or kUnreachable.
  std::uint32_t fact_level(FactId f) const { return fact_level_[index(f)]; }
  /// First level at which the action is applicable, or kUnreachable.
  std::uint32_t action_level(ActionId a) const { return action_level_[index(a)]; }
  bool fact_reachable(FactId f) const { return fact_level(f) != kUnreachable; }
  bool action_reachable(ActionId a) const { return action_level(a) != kUnreachable; }

  /// Non-excluded actions with `f` in add ∪ poss_add, ascending.
  const std::vector<ActionId>& achievers(FactId f) const { return achievers_[index(f)]; }

  /// Achievers applicable at the level immediately before `f` appears.
  std::vector<ActionId> first_achievers(FactId f) const;

  /// Last level at which a new fact appeared (fixpoint level).
  std::uint32_t max_level() const { return max_level_; }

  /// Facts first appearing at `level`, ascending.
  std::vector<FactId> facts_at(std::uint32_t level) const;

  bool is_excluded(ActionId a) const { return excluded_[index(a)]; }

 private:
  friend Orpg build_orpg(const GroundedTask&, const FactSet&, std::span<const ActionId>, const Deadline&);
  std::vector<std::uint32_t> fact_level_;
  std::vector<std::uint32_t> action_level_;
  std::vector<std::vector<ActionId>> achievers_;
  std::vector<bool> excluded_;
  std::uint32_t max_level_ = 0;
};

/// Builds the graph to its fixpoint from `init`. Excluded actions never fire
/// and never appear as achievers.
Orpg build_orpg(const GroundedTask& task, const FactSet& init, std::span<const ActionId> excluded = {},
                const Deadline& deadline = {});

/// True iff every goal fact has a finite level.
bool reachable(const Orpg& orpg, const FactSet& goal);

/// Reachability of `goal` from `init` without keeping the graph; stops as
/// soon as every goal fact has appeared.
bool relaxed_reachable(const GroundedTask& task, const FactSet& init, const FactSet& goal,
                       std::span<const ActionId> excluded = {}, const Deadline& deadline = {});

class InapplicableAction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (state \ del) ∪ add ∪ poss_add. Requires pre ⊆ state; poss_pre and
/// poss_del are ignored. Throws InapplicableAction otherwise.
FactSet apply_optimistic(const FactSet& state, const GroundAction& action);

/// Same successor, but skips the precondition check.
FactSet progress_optimistic(const FactSet& state, const GroundAction& action);

struct TraceReplay {
  std::vector<FactSet> states;  // s0 .. sn
  std::vector<std::string> warnings;
};

/// Replays a trace optimistically from `init`. Inapplicable steps produce a
/// warning and their effects are still applied.
TraceReplay replay_optimistic(const GroundedTask& task, const FactSet& init, std::span<const ActionId> trace);

/// Tab-separated fact and action levels for debugging.
std::string dump_orpg(const GroundedTask& task, const Orpg& orpg);

}  // namespace goalrec
