#include "support.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#ifndef GOALREC_TEST_DATA
#error "GOALREC_TEST_DATA must point at tests/data"
#endif

namespace testing {

std::string data_path(const std::string& name) { return std::string(GOALREC_TEST_DATA) + "/" + name; }

std::string data_file(const std::string& name) { return read_file(data_path(name)); }

Example1 example1() {
  Example1 ex;
  ex.domain = parse_domain(data_file("example1-domain.pddl"));
  ex.problem = parse_problem(data_file("example1-problem.pddl"), ex.domain);
  ex.task = ground(ex.domain, ex.problem.objects, ex.problem.init);
  auto f = [&](const char* n) { return *ex.task.find_fact(Fact{n, {}}); };
  auto a = [&](const char* n) { return *ex.task.find_action(Atom{n, {}}); };
  ex.p = f("p");
  ex.q = f("q");
  ex.r = f("r");
  ex.g = f("g");
  ex.a = a("a");
  ex.b = a("b");
  ex.c = a("c");
  return ex;
}

GroundedTask classical(const GroundedTask& task) {
  std::vector<GroundAction> actions = task.actions();
  for (auto& a : actions) {
    a.poss_pre.clear();
    a.poss_add.clear();
    a.poss_del.clear();
  }
  return GroundedTask::from_ground(task.domain(), task.facts(), std::move(actions), task.init());
}

FactSet facts_of(const GroundedTask& task, const std::vector<std::string>& names) {
  FactSet out;
  for (const auto& n : names) {
    auto id = task.find_fact(Fact{n, {}});
    if (!id) throw std::invalid_argument("no fact " + n);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mask mask_of(const FactSet& set) {
  Mask m = 0;
  for (FactId f : set) {
    if (index(f) >= 64) throw std::invalid_argument("mask oracle needs at most 64 facts");
    m |= Mask(1) << index(f);
  }
  return m;
}

std::vector<MaskAction> mask_actions(const GroundedTask& task) {
  std::vector<MaskAction> out;
  for (const auto& a : task.actions()) {
    out.push_back({mask_of(a.pre), mask_of(a.add), mask_of(a.del), mask_of(a.poss_add)});
  }
  return out;
}

bool search_relaxed(const GroundedTask& task, Mask init, Mask goal, Mask excluded_actions) {
  auto actions = mask_actions(task);
  std::unordered_set<Mask> seen{init};
  std::deque<Mask> open{init};
  while (!open.empty()) {
    Mask s = open.front();
    open.pop_front();
    if ((s & goal) == goal) return true;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (excluded_actions >> i & 1) continue;
      const auto& a = actions[i];
      if ((s & a.pre) != a.pre) continue;
      Mask next = s | a.add | a.poss_add;
      if (seen.insert(next).second) open.push_back(next);
    }
  }
  return false;
}

namespace {

template <typename Visit>
void explore_optimistic(const GroundedTask& task, Mask init, Visit visit) {
  auto actions = mask_actions(task);
  std::unordered_set<Mask> seen{init};
  std::deque<Mask> open{init};
  while (!open.empty()) {
    Mask s = open.front();
    open.pop_front();
    if (visit(s)) return;
    for (const auto& a : actions) {
      if ((s & a.pre) != a.pre) continue;
      Mask next = (s & ~a.del) | a.add | a.poss_add;
      if (seen.insert(next).second) open.push_back(next);
    }
  }
}

}  // namespace

bool search_optimistic(const GroundedTask& task, Mask init, Mask goal) {
  bool found = false;
  explore_optimistic(task, init, [&](Mask s) { return found = (s & goal) == goal; });
  return found;
}

Mask optimistic_visited_facts(const GroundedTask& task, Mask init) {
  Mask all = 0;
  explore_optimistic(task, init, [&](Mask s) {
    all |= s;
    return false;
  });
  return all;
}

bool naive_reachable(const std::vector<MaskAction>& actions, Mask init, Mask goal, const std::vector<bool>& removed) {
  Mask s = init;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (removed[i] || (s & actions[i].pre) != actions[i].pre) continue;
      Mask next = s | actions[i].add | actions[i].poss_add;
      if (next != s) {
        s = next;
        changed = true;
      }
    }
  }
  return (s & goal) == goal;
}

Mask landmark_oracle(const GroundedTask& task, Mask goal) {
  auto actions = mask_actions(task);
  Mask init = mask_of(task.init());
  Mask out = goal;
  for (std::size_t f = 0; f < task.num_facts(); ++f) {
    Mask bit = Mask(1) << f;
    if (init & bit) continue;
    std::vector<bool> removed(actions.size(), false);
    for (std::size_t i = 0; i < actions.size(); ++i) removed[i] = ((actions[i].add | actions[i].poss_add) & bit) != 0;
    if (!naive_reachable(actions, init, goal, removed)) out |= bit;
  }
  return out;
}

std::size_t brute_force_bindings(const IncompleteDomain& domain, const std::vector<TypedObject>& objects) {
  std::vector<TypedObject> all = domain.constants;
  all.insert(all.end(), objects.begin(), objects.end());
  std::size_t total = 0;
  for (const auto& op : domain.operators) {
    std::size_t n = op.parameters.size();
    std::vector<std::size_t> idx(n, 0);
    if (n > 0 && all.empty()) continue;
    while (true) {
      bool fits = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!domain.types.is_subtype(all[idx[i]].type, op.parameters[i].type)) fits = false;
      }
      if (fits) ++total;
      std::size_t k = 0;
      while (k < n && ++idx[k] == all.size()) idx[k++] = 0;
      if (k == n) break;
    }
  }
  return total;
}

namespace {

std::vector<std::size_t> pick(SeededRng& rng, std::size_t universe, std::size_t count) {
  std::vector<std::size_t> items(universe);
  for (std::size_t i = 0; i < universe; ++i) items[i] = i;
  count = std::min(count, universe);
  for (std::size_t i = 0; i < count; ++i) std::swap(items[i], items[i + rng.below(universe - i)]);
  items.resize(count);
  return items;
}

}  // namespace

GroundedTask random_task(SeededRng& rng, const RandomTaskSpec& spec) {
  IncompleteDomain domain;
  domain.name = "random";
  std::vector<Fact> facts;
  for (std::size_t i = 0; i < spec.facts; ++i) {
    std::string name = "f" + std::to_string(i);
    domain.predicates.push_back(PredicateSchema{name, {}});
    facts.push_back(Fact{name, {}});
  }
  // Facts must be ordered as the grounder would order them.
  std::sort(facts.begin(), facts.end());
  auto id_of = [&](std::size_t i) {
    Fact f{"f" + std::to_string(i), {}};
    return FactId(static_cast<std::uint32_t>(std::lower_bound(facts.begin(), facts.end(), f) - facts.begin()));
  };

  std::vector<GroundAction> actions;
  for (std::size_t i = 0; i < spec.actions; ++i) {
    GroundAction a;
    a.name = "a" + std::to_string(i);
    auto split = [&](FactSet& known, FactSet& possible, std::size_t lo, std::size_t hi) {
      for (std::size_t f : pick(rng, spec.facts, lo + rng.below(hi - lo + 1))) {
        (rng.chance(spec.possible_rate) ? possible : known).push_back(id_of(f));
      }
    };
    split(a.pre, a.poss_pre, 0, spec.max_pre);
    split(a.add, a.poss_add, 1, spec.max_add);
    split(a.del, a.poss_del, 0, spec.max_del);
    actions.push_back(std::move(a));
  }
  std::sort(actions.begin(), actions.end(),
            [](const GroundAction& x, const GroundAction& y) { return x.signature_atom() < y.signature_atom(); });
  FactSet init;
  for (std::size_t f : pick(rng, spec.facts, spec.init_size)) init.push_back(id_of(f));
  return GroundedTask::from_ground(std::move(domain), std::move(facts), std::move(actions), std::move(init));
}

FactSet random_reachable_goal(const GroundedTask& task, SeededRng& rng, std::size_t max_size) {
  auto actions = mask_actions(task);
  Mask init = mask_of(task.init());
  std::vector<bool> none(actions.size(), false);
  Mask reach = init;
  for (std::size_t f = 0; f < task.num_facts(); ++f) {
    if (naive_reachable(actions, init, Mask(1) << f, none)) reach |= Mask(1) << f;
  }
  std::vector<std::size_t> fresh;
  for (std::size_t f = 0; f < task.num_facts(); ++f) {
    if ((reach >> f & 1) && !(init >> f & 1)) fresh.push_back(f);
  }
  if (fresh.empty()) return {};
  std::size_t size = 1 + rng.below(std::min(max_size, fresh.size()));
  FactSet goal;
  for (std::size_t i : pick(rng, fresh.size(), size)) goal.push_back(FactId(static_cast<std::uint32_t>(fresh[i])));
  std::sort(goal.begin(), goal.end());
  return goal;
}

IncompleteDomain random_complete_domain(SeededRng& rng) {
  IncompleteDomain d;
  d.name = "rnd";
  d.requirements = {":strips", ":typing"};
  d.types.declare("thing");
  d.predicates.push_back({"u", {{"?x", "thing"}}});
  d.predicates.push_back({"v", {{"?x", "thing"}}});
  d.predicates.push_back({"w", {{"?x", "thing"}, {"?y", "thing"}}});
  d.predicates.push_back({"z", {}});

  std::size_t n_ops = 2 + rng.below(4);
  for (std::size_t i = 0; i < n_ops; ++i) {
    IncompleteOperator op;
    op.name = "op" + std::to_string(i);
    std::size_t n_params = 1 + rng.below(2);
    for (std::size_t k = 0; k < n_params; ++k) op.parameters.push_back({"?p" + std::to_string(k), "thing"});
    auto random_atom = [&] {
      const auto& pred = d.predicates[rng.below(d.predicates.size())];
      Atom atom{pred.name, {}};
      for (std::size_t k = 0; k < pred.arity(); ++k) atom.args.push_back(op.parameters[rng.below(n_params)].name);
      return atom;
    };
    for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) add_unique(op.pre, random_atom());
    for (std::size_t k = 0, n = 1 + rng.below(3); k < n; ++k) add_unique(op.add, random_atom());
    for (std::size_t k = 0, n = rng.below(3); k < n; ++k) {
      Atom atom = random_atom();
      if (!contains(op.add, atom)) add_unique(op.del, atom);
    }
    d.operators.push_back(std::move(op));
  }
  validate(d);
  return d;
}

}  // namespace testing
