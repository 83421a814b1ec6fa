#include "goalrec/orpg.hpp"

#include <algorithm>
#include <sstream>

namespace goalrec {

namespace {

/// Level-by-level optimistic fixpoint. `on_fact(f, level)` is called when a
/// fact first appears and may return true to stop early.
template <typename OnFact>
void expand(const GroundedTask& task, const FactSet& init, const std::vector<bool>& excluded,
            std::vector<std::uint32_t>& fact_level, std::vector<std::uint32_t>& action_level, const Deadline& deadline,
            OnFact&& on_fact) {
  fact_level.assign(task.num_facts(), kUnreachable);
  action_level.assign(task.num_actions(), kUnreachable);
  std::vector<std::uint32_t> missing(task.num_actions());
  std::vector<ActionId> ready;
  for (std::size_t i = 0; i < task.num_actions(); ++i) {
    missing[i] = static_cast<std::uint32_t>(task.actions()[i].pre.size());
    if (missing[i] == 0 && !excluded[i]) ready.push_back(ActionId(i));
  }

  std::vector<FactId> frontier;
  for (FactId f : init) {
    fact_level[index(f)] = 0;
    frontier.push_back(f);
    if (on_fact(f, 0u)) return;
  }

  for (std::uint32_t level = 0;; ++level) {
    deadline.check();
    for (FactId f : frontier) {
      for (ActionId a : task.consumers(f)) {
        if (--missing[index(a)] == 0 && !excluded[index(a)]) ready.push_back(a);
      }
    }
    std::vector<FactId> next;
    for (ActionId a : ready) {
      action_level[index(a)] = level;
      const auto& act = task.action(a);
      for (const FactSet* effects : {&act.add, &act.poss_add}) {
        for (FactId f : *effects) {
          if (fact_level[index(f)] != kUnreachable) continue;
          fact_level[index(f)] = level + 1;
          next.push_back(f);
          if (on_fact(f, level + 1)) return;
        }
      }
    }
    ready.clear();
    if (next.empty()) return;
    frontier = std::move(next);
  }
}

std::vector<bool> exclusion_mask(const GroundedTask& task, std::span<const ActionId> excluded) {
  std::vector<bool> mask(task.num_actions(), false);
  for (ActionId a : excluded) mask[index(a)] = true;
  return mask;
}

}  // namespace

std::vector<ActionId> Orpg::first_achievers(FactId f) const {
  std::vector<ActionId> out;
  std::uint32_t level = fact_level(f);
  if (level == kUnreachable || level == 0) return out;
  for (ActionId a : achievers(f)) {
    if (action_level(a) == level - 1) out.push_back(a);
  }
  return out;
}

std::vector<FactId> Orpg::facts_at(std::uint32_t level) const {
  std::vector<FactId> out;
  for (std::size_t i = 0; i < fact_level_.size(); ++i) {
    if (fact_level_[i] == level) out.push_back(FactId(i));
  }
  return out;
}

Orpg build_orpg(const GroundedTask& task, const FactSet& init, std::span<const ActionId> excluded,
                const Deadline& deadline) {
  Orpg g;
  g.excluded_ = exclusion_mask(task, excluded);
  expand(task, init, g.excluded_, g.fact_level_, g.action_level_, deadline, [&](FactId, std::uint32_t level) {
    g.max_level_ = std::max(g.max_level_, level);
    return false;
  });
  g.achievers_.resize(task.num_facts());
  for (std::size_t f = 0; f < task.num_facts(); ++f) {
    for (ActionId a : task.adders(FactId(f))) {
      if (!g.excluded_[index(a)]) g.achievers_[f].push_back(a);
    }
  }
  return g;
}

bool reachable(const Orpg& orpg, const FactSet& goal) {
  return std::all_of(goal.begin(), goal.end(), [&](FactId f) { return orpg.fact_reachable(f); });
}

bool relaxed_reachable(const GroundedTask& task, const FactSet& init, const FactSet& goal,
                       std::span<const ActionId> excluded, const Deadline& deadline) {
  if (goal.empty()) return true;
  std::vector<bool> is_goal(task.num_facts(), false);
  for (FactId f : goal) is_goal[index(f)] = true;
  std::size_t remaining = goal.size();
  std::vector<std::uint32_t> fact_level, action_level;
  expand(task, init, exclusion_mask(task, excluded), fact_level, action_level, deadline,
         [&](FactId f, std::uint32_t) { return is_goal[index(f)] && --remaining == 0; });
  return remaining == 0;
}

FactSet progress_optimistic(const FactSet& state, const GroundAction& action) {
  FactSet out;
  out.reserve(state.size() + action.add.size() + action.poss_add.size());
  std::set_difference(state.begin(), state.end(), action.del.begin(), action.del.end(), std::back_inserter(out));
  out.insert(out.end(), action.add.begin(), action.add.end());
  out.insert(out.end(), action.poss_add.begin(), action.poss_add.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FactSet apply_optimistic(const FactSet& state, const GroundAction& action) {
  if (!std::includes(state.begin(), state.end(), action.pre.begin(), action.pre.end())) {
    throw InapplicableAction(action.signature() + " is not applicable: a known precondition does not hold");
  }
  return progress_optimistic(state, action);
}

TraceReplay replay_optimistic(const GroundedTask& task, const FactSet& init, std::span<const ActionId> trace) {
  TraceReplay replay;
  replay.states.push_back(init);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& action = task.action(trace[i]);
    const auto& state = replay.states.back();
    FactSet missing;
    std::set_difference(action.pre.begin(), action.pre.end(), state.begin(), state.end(), std::back_inserter(missing));
    if (!missing.empty()) {
      std::string msg = "step " + std::to_string(i + 1) + " " + action.signature() + ": missing";
      for (FactId f : missing) msg += " " + to_string(task.fact(f));
      replay.warnings.push_back(std::move(msg));
    }
    replay.states.push_back(progress_optimistic(state, action));
  }
  return replay;
}

std::string dump_orpg(const GroundedTask& task, const Orpg& orpg) {
  std::ostringstream out;
  auto level = [](std::uint32_t l) { return l == kUnreachable ? std::string("inf") : std::to_string(l); };
  for (std::size_t f = 0; f < task.num_facts(); ++f) {
    out << "fact\t" << to_string(task.facts()[f]) << '\t' << level(orpg.fact_level(FactId(f))) << '\n';
  }
  for (std::size_t a = 0; a < task.num_actions(); ++a) {
    out << "action\t" << task.actions()[a].signature() << '\t' << level(orpg.action_level(ActionId(a))) << '\n';
  }
  return out.str();
}

}  // namespace goalrec
