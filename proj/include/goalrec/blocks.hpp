#pragma once

// Synthetic blocksworld recognition problems: a complete domain, random
// towers, candidate goals, an optimal plan for the hidden goal found by
// breadth-first search, and observation subsequences at several
// observability levels. Used to build desk-scale benchmark corpora.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "goalrec/degrade.hpp"
#include "goalrec/grounding.hpp"
#include "goalrec/model.hpp"

namespace goalrec::blocks {

/// The 4-operator typed blocksworld (pick-up, put-down, stack, unstack).
std::string domain_text();

/// Towers listed bottom to top.
using Configuration = std::vector<std::vector<std::string>>;

std::vector<std::string> block_names(std::size_t n);
Configuration random_configuration(const std::vector<std::string>& blocks, SeededRng& rng);
std::vector<Fact> configuration_facts(const Configuration& config);

/// A goal tower of `height` random blocks: (clear top), the on-chain and
/// (ontable bottom).
Goal random_tower_goal(const std::vector<std::string>& blocks, std::size_t height, SeededRng& rng);

/// Shortest classical plan (delete effects applied, possible lists ignored)
/// from the task's initial state to `goal`, or nullopt when none exists
/// within `max_states` expanded states.
std::optional<std::vector<ActionId>> bfs_plan(const GroundedTask& task, const FactSet& goal,
                                              std::size_t max_states = 2'000'000);

/// Order-preserving random subsequence with ceil(percent/100 * n) actions
/// (at least one when the plan is nonempty).
std::vector<ActionId> sample_observations(const std::vector<ActionId>& plan, int percent, SeededRng& rng);

struct Problem {
  std::string name;
  ProblemInstance instance;
  std::vector<Goal> hypotheses;
  std::size_t hidden = 0;
  std::vector<Atom> plan;
};

/// Random problem with `num_blocks` blocks and `num_hypotheses` distinct
/// tower goals; retries until the hidden goal has a plan.
Problem random_problem(const std::string& name, std::size_t num_blocks, std::size_t num_hypotheses,
                       std::size_t tower_height, SeededRng& rng);

struct CorpusSpec {
  std::size_t problems = 30;
  std::size_t min_blocks = 5;
  std::size_t max_blocks = 6;
  std::size_t min_hypotheses = 4;
  std::size_t max_hypotheses = 6;
  std::size_t tower_height = 3;
  std::vector<int> percents = {20, 80};
  std::vector<DegradeVariant> variants = {DegradeVariant::S1};
  std::vector<int> observability = {10, 30, 50, 70, 100};
  std::uint64_t seed = 1;
};

/// Writes `<root>/blocks/<percent>/<variant>/<problem>/` directories (domain,
/// template, hypotheses, hidden goal, and `<obs>/obs.dat` per observability
/// level) plus `<root>/manifest.txt`. Each problem gets its own degraded
/// domain. Returns the manifest entries.
std::vector<std::string> write_corpus(const std::filesystem::path& root, const CorpusSpec& spec);

}  // namespace goalrec::blocks
