#pragma once

// Fact landmarks for a goal under the optimistic relaxation.
//
// Extraction back-chains from the goal over the ORPG: for a landmark B first
// reached at level l, the known preconditions shared by every achiever of B
// at level l-1 are candidates, each confirmed by rebuilding the graph with
// the candidate's achievers removed and checking that the goal becomes
// unreachable. A landmark is definite when some achiever provides it through
// a known add effect and possible when only possible add effects do.
// Initial-state landmarks have no achiever; they are possible when they were
// derived through an achiever set that relies on possible add effects.
//
// Overlooked landmarks are found online: a fact produced by an observed
// action whose observed achievers, once removed, make the goal unreachable.

#include <span>
#include <stdexcept>
#include <vector>

#include "goalrec/deadline.hpp"
#include "goalrec/grounding.hpp"
#include "goalrec/orpg.hpp"

namespace goalrec {

enum class LandmarkKind { Definite, Possible, Overlooked };

const char* to_string(LandmarkKind kind);

struct LandmarkSet {
  FactSet definite;
  FactSet possible;
  FactSet overlooked;

  std::size_t size() const { return definite.size() + possible.size() + overlooked.size(); }
  bool empty() const { return size() == 0; }
  bool contains(FactId f) const;
  bool known(FactId f) const;  // in definite ∪ possible
  const FactSet& of(LandmarkKind kind) const;
  FactSet& of(LandmarkKind kind);
};

class GoalUnreachable : public std::runtime_error {
 public:
  GoalUnreachable() : std::runtime_error("goal is unreachable in the optimistic relaxation") {}
};

/// ∩ over `achievers` of their known preconditions.
FactSet candidate_from_achievers(const GroundedTask& task, std::span<const ActionId> achievers);

/// True when `fact` is a goal fact or holds initially, or when removing every
/// achiever of `fact` makes `goal` unreachable.
bool verify_candidate(const GroundedTask& task, const FactSet& goal, FactId fact, const Deadline& deadline = {});

/// Definite and possible landmarks of `goal`. Throws GoalUnreachable when
/// the goal cannot be reached even optimistically.
LandmarkSet extract_landmarks(const GroundedTask& task, const FactSet& goal, const Deadline& deadline = {});

struct OverlookedOptions {
  /// Remove every achiever of the candidate instead of only observed ones.
  bool exclude_all_achievers = false;
};

/// True when removing `achievers` makes `goal` unreachable from the initial state.
bool severs_goal(const GroundedTask& task, const FactSet& goal, std::span<const ActionId> achievers,
                 const Deadline& deadline = {});

/// Facts added (known or possibly) by the observed actions, outside the
/// definite and possible sets of `known`, whose observed achievers are
/// necessary for `goal`. Empty for unreachable goals.
FactSet extract_overlooked(const GroundedTask& task, const FactSet& goal, std::span<const ActionId> observations,
                           const LandmarkSet& known, const OverlookedOptions& options = {},
                           const Deadline& deadline = {});

}  // namespace goalrec
