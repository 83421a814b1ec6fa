#include "goalrec/landmarks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace goalrec {

const char* to_string(LandmarkKind kind) {
  switch (kind) {
    case LandmarkKind::Definite:
      return "definite";
    case LandmarkKind::Possible:
      return "possible";
    case LandmarkKind::Overlooked:
      return "overlooked";
  }
  return "?";
}

bool LandmarkSet::contains(FactId f) const { return known(f) || goalrec::contains(overlooked, f); }

bool LandmarkSet::known(FactId f) const { return goalrec::contains(definite, f) || goalrec::contains(possible, f); }

const FactSet& LandmarkSet::of(LandmarkKind kind) const {
  switch (kind) {
    case LandmarkKind::Definite:
      return definite;
    case LandmarkKind::Possible:
      return possible;
    case LandmarkKind::Overlooked:
      break;
  }
  return overlooked;
}

FactSet& LandmarkSet::of(LandmarkKind kind) { return const_cast<FactSet&>(std::as_const(*this).of(kind)); }

FactSet candidate_from_achievers(const GroundedTask& task, std::span<const ActionId> achievers) {
  if (achievers.empty()) return {};
  FactSet shared = task.action(achievers.front()).pre;
  for (std::size_t i = 1; i < achievers.size() && !shared.empty(); ++i) {
    const auto& pre = task.action(achievers[i]).pre;
    FactSet next;
    std::set_intersection(shared.begin(), shared.end(), pre.begin(), pre.end(), std::back_inserter(next));
    shared = std::move(next);
  }
  return shared;
}

bool severs_goal(const GroundedTask& task, const FactSet& goal, std::span<const ActionId> achievers,
                 const Deadline& deadline) {
  return !relaxed_reachable(task, task.init(), goal, achievers, deadline);
}

bool verify_candidate(const GroundedTask& task, const FactSet& goal, FactId fact, const Deadline& deadline) {
  if (contains(goal, fact) || contains(task.init(), fact)) return true;
  return severs_goal(task, goal, task.adders(fact), deadline);
}

namespace {

bool has_known_achiever(const GroundedTask& task, const std::vector<ActionId>& achievers, FactId f) {
  return std::any_of(achievers.begin(), achievers.end(),
                     [&](ActionId a) { return contains(task.action(a).add, f); });
}

}  // namespace

LandmarkSet extract_landmarks(const GroundedTask& task, const FactSet& goal, const Deadline& deadline) {
  Orpg graph = build_orpg(task, task.init(), {}, deadline);
  if (!reachable(graph, goal)) throw GoalUnreachable();

  std::map<FactId, LandmarkKind> found;
  std::set<FactId> rejected;
  std::deque<FactId> queue;

  // `via_possible`: the derivation relied on an achiever set containing
  // possible-add achievers. It only decides the kind of level-0 facts.
  auto admit = [&](FactId f, bool via_possible) {
    LandmarkKind kind;
    if (graph.fact_level(f) == 0) {
      kind = via_possible ? LandmarkKind::Possible : LandmarkKind::Definite;
    } else {
      kind = has_known_achiever(task, graph.first_achievers(f), f) ? LandmarkKind::Definite : LandmarkKind::Possible;
    }
    auto [it, inserted] = found.emplace(f, kind);
    if (inserted) {
      queue.push_back(f);
    } else if (kind == LandmarkKind::Definite) {
      it->second = LandmarkKind::Definite;
    }
  };

  for (FactId g : goal) admit(g, false);

  auto consider = [&](const FactSet& candidates, bool via_possible) {
    for (FactId c : candidates) {
      if (found.count(c)) {
        admit(c, via_possible);
        continue;
      }
      if (rejected.count(c)) continue;
      if (verify_candidate(task, goal, c, deadline)) {
        admit(c, via_possible);
      } else {
        rejected.insert(c);
      }
    }
  };

  while (!queue.empty()) {
    FactId b = queue.front();
    queue.pop_front();
    if (graph.fact_level(b) == 0) continue;
    std::vector<ActionId> achievers = graph.first_achievers(b);
    std::vector<ActionId> possible_only;
    for (ActionId a : achievers) {
      if (!contains(task.action(a).add, b)) possible_only.push_back(a);
    }
    consider(candidate_from_achievers(task, achievers), !possible_only.empty());
    // Preconditions shared by the possible-add achievers alone: landmarks of
    // the completions where those achievers are the ones producing b.
    if (!possible_only.empty() && possible_only.size() < achievers.size()) {
      consider(candidate_from_achievers(task, possible_only), true);
    }
  }

  LandmarkSet out;
  for (const auto& [f, kind] : found) out.of(kind).push_back(f);
  return out;
}

FactSet extract_overlooked(const GroundedTask& task, const FactSet& goal, std::span<const ActionId> observations,
                           const LandmarkSet& known, const OverlookedOptions& options, const Deadline& deadline) {
  if (!relaxed_reachable(task, task.init(), goal, {}, deadline)) return {};
  std::map<FactId, std::vector<ActionId>> observed_achievers;
  for (ActionId o : observations) {
    const auto& act = task.action(o);
    for (const FactSet* effects : {&act.add, &act.poss_add}) {
      for (FactId f : *effects) {
        auto& list = observed_achievers[f];
        if (std::find(list.begin(), list.end(), o) == list.end()) list.push_back(o);
      }
    }
  }
  FactSet out;
  for (const auto& [f, achievers] : observed_achievers) {
    if (known.known(f)) continue;
    std::span<const ActionId> removed = options.exclude_all_achievers ? std::span<const ActionId>(task.adders(f))
                                                                      : std::span<const ActionId>(achievers);
    if (severs_goal(task, goal, removed, deadline)) out.push_back(f);
  }
  return out;
}

}  // namespace goalrec
