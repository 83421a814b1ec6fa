#pragma once

// Shared fixtures and brute-force oracles for the test binaries. The oracles
// deliberately avoid the library's ORPG and landmark code: they work on
// 64-bit fact masks and naive loops.

#include <cstdint>
#include <string>
#include <vector>

#include "goalrec/degrade.hpp"
#include "goalrec/grounding.hpp"
#include "goalrec/model.hpp"
#include "goalrec/pddl.hpp"

namespace testing {

using namespace goalrec;

std::string data_path(const std::string& name);
std::string data_file(const std::string& name);

struct Example1 {
  IncompleteDomain domain;
  ProblemInstance problem;
  GroundedTask task;
  FactId p, q, r, g;
  ActionId a, b, c;
};
Example1 example1();

/// Example 1 with every possible list dropped.
GroundedTask classical(const GroundedTask& task);

FactSet facts_of(const GroundedTask& task, const std::vector<std::string>& names);

// ---- mask-based oracles (tasks with at most 64 facts) ----

using Mask = std::uint64_t;
Mask mask_of(const FactSet& set);

struct MaskAction {
  Mask pre = 0, add = 0, del = 0, poss_add = 0;
};
std::vector<MaskAction> mask_actions(const GroundedTask& task);

/// Exhaustive search over the delete-free optimistic state space: every
/// state reachable by any action sequence, actions firing on their known
/// preconditions and adding add ∪ poss_add. True iff some visited state
/// contains `goal`.
bool search_relaxed(const GroundedTask& task, Mask init, Mask goal, Mask excluded_actions);

/// Exhaustive search with optimistic semantics and known deletes applied.
bool search_optimistic(const GroundedTask& task, Mask init, Mask goal);

/// Every fact in some state reachable under optimistic semantics (deletes
/// applied).
Mask optimistic_visited_facts(const GroundedTask& task, Mask init);

/// Naive delete-free reachability: iterate all actions until nothing changes.
bool naive_reachable(const std::vector<MaskAction>& actions, Mask init, Mask goal, const std::vector<bool>& removed);

/// Facts that hold at some point in every relaxed plan for `goal`: a fact f
/// outside init qualifies when removing every action that adds f makes the
/// goal unreachable; goal facts always qualify. Init facts that are not goal
/// facts are left out (they hold trivially).
Mask landmark_oracle(const GroundedTask& task, Mask goal);

/// Enumerates every tuple of objects per operator and counts the tuples
/// whose types fit, without using the grounder.
std::size_t brute_force_bindings(const IncompleteDomain& domain, const std::vector<TypedObject>& objects);

// ---- random generators ----

struct RandomTaskSpec {
  std::size_t facts = 10;
  std::size_t actions = 8;
  std::size_t max_pre = 2;
  std::size_t max_add = 2;
  std::size_t max_del = 1;
  double possible_rate = 0.0;  // chance for each literal to land in the possible list
  std::size_t init_size = 2;
};

/// Propositional task with facts f0.. and actions a0..; facts and actions
/// are plain atoms with no arguments.
GroundedTask random_task(SeededRng& rng, const RandomTaskSpec& spec);

/// Random nonempty goal drawn from the facts reachable in the relaxation,
/// or empty when nothing beyond init is reachable.
FactSet random_reachable_goal(const GroundedTask& task, SeededRng& rng, std::size_t max_size);

/// A complete lifted domain with random operators over a few predicates.
IncompleteDomain random_complete_domain(SeededRng& rng);

}  // namespace testing
