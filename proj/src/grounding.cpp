#include "goalrec/grounding.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace goalrec {

bool contains(const FactSet& set, FactId fact) { return std::binary_search(set.begin(), set.end(), fact); }

std::string GroundAction::signature() const { return to_string(signature_atom()); }

std::optional<FactId> GroundedTask::find_fact(const Fact& fact) const {
  auto it = fact_index_.find(fact);
  if (it == fact_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> GroundedTask::find_action(const Atom& signature) const {
  auto it = action_index_.find(signature);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

FactSet GroundedTask::to_fact_set(std::span<const Fact> facts) const {
  FactSet out;
  out.reserve(facts.size());
  for (const auto& f : facts) {
    auto id = find_fact(f);
    if (!id) throw ModelError("fact " + to_string(f) + " is not in the task's fact universe");
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Fact> GroundedTask::to_facts(const FactSet& set) const {
  std::vector<Fact> out;
  out.reserve(set.size());
  for (FactId id : set) out.push_back(fact(id));
  return out;
}

namespace {

void normalize(FactSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

void drop_known(FactSet& possible, const FactSet& known) {
  std::erase_if(possible, [&](FactId f) { return contains(known, f); });
}

void normalize(GroundAction& action) {
  for (FactSet* s : {&action.pre, &action.poss_pre, &action.add, &action.del, &action.poss_add, &action.poss_del}) {
    normalize(*s);
  }
  drop_known(action.poss_pre, action.pre);
  drop_known(action.poss_add, action.add);
  drop_known(action.poss_del, action.del);
}

/// Objects (constants first) fitting each type, memoized.
class ObjectsByType {
 public:
  ObjectsByType(const IncompleteDomain& domain, const std::vector<TypedObject>& objects) : domain_(domain) {
    all_ = domain.constants;
    for (const auto& o : objects) {
      bool dup = std::any_of(all_.begin(), all_.end(), [&](const TypedObject& c) { return c.name == o.name; });
      if (!dup) all_.push_back(o);
    }
    std::sort(all_.begin(), all_.end(), [](const TypedObject& a, const TypedObject& b) { return a.name < b.name; });
  }

  const std::vector<std::string>& of(const std::string& type) {
    auto it = cache_.find(type);
    if (it != cache_.end()) return it->second;
    std::vector<std::string> names;
    for (const auto& o : all_) {
      if (domain_.types.is_subtype(o.type, type)) names.push_back(o.name);
    }
    return cache_.emplace(type, std::move(names)).first->second;
  }

  const std::vector<TypedObject>& all() const { return all_; }

 private:
  const IncompleteDomain& domain_;
  std::vector<TypedObject> all_;
  std::map<std::string, std::vector<std::string>> cache_;
};

/// Calls `visit(binding)` for every element of the cartesian product of
/// `domains`, in lexicographic order.
template <typename Visit>
void for_each_binding(const std::vector<const std::vector<std::string>*>& domains, Visit&& visit) {
  for (const auto* d : domains) {
    if (d->empty()) return;
  }
  std::vector<std::size_t> cursor(domains.size(), 0);
  std::vector<std::string> binding(domains.size());
  while (true) {
    for (std::size_t i = 0; i < domains.size(); ++i) binding[i] = (*domains[i])[cursor[i]];
    visit(binding);
    std::size_t pos = domains.size();
    while (pos > 0) {
      --pos;
      if (++cursor[pos] < domains[pos]->size()) break;
      cursor[pos] = 0;
      if (pos == 0) return;
    }
    if (domains.empty()) return;
  }
}

}  // namespace

void GroundedTask::finalize() {
  fact_index_.clear();
  for (std::size_t i = 0; i < facts_.size(); ++i) fact_index_.emplace(facts_[i], FactId(i));
  action_index_.clear();
  for (std::size_t i = 0; i < actions_.size(); ++i) action_index_.emplace(actions_[i].signature_atom(), ActionId(i));
  adders_.assign(facts_.size(), {});
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    for (FactId f : actions_[i].add) adders_[index(f)].push_back(ActionId(i));
    for (FactId f : actions_[i].poss_add) adders_[index(f)].push_back(ActionId(i));
  }
  for (auto& list : adders_) std::sort(list.begin(), list.end());
  consumers_.assign(facts_.size(), {});
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    for (FactId f : actions_[i].pre) consumers_[index(f)].push_back(ActionId(i));
  }
}

GroundedTask GroundedTask::from_ground(IncompleteDomain domain, std::vector<Fact> facts,
                                       std::vector<GroundAction> actions, FactSet init) {
  GroundedTask task;
  task.domain_ = std::move(domain);
  task.facts_ = std::move(facts);
  task.actions_ = std::move(actions);
  for (auto& a : task.actions_) normalize(a);
  normalize(init);
  task.init_ = std::move(init);
  task.finalize();
  return task;
}

GroundedTask ground(const IncompleteDomain& domain, const std::vector<TypedObject>& objects,
                    const std::vector<Fact>& init, const Deadline& deadline) {
  ObjectsByType by_type(domain, objects);

  // Fact universe: every type-consistent instantiation of every predicate.
  std::vector<Fact> facts;
  for (const auto& pred : domain.predicates) {
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : pred.parameters) domains.push_back(&by_type.of(p.type));
    for_each_binding(domains, [&](const std::vector<std::string>& args) { facts.push_back(Fact{pred.name, args}); });
    deadline.check();
  }

  struct Pending {
    Atom signature;
    std::vector<Fact> lists[6];
  };
  std::vector<Pending> pending;
  for (const auto& op : domain.operators) {
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : op.parameters) domains.push_back(&by_type.of(p.type));
    const AtomList* lifted[6] = {&op.pre, &op.poss_pre, &op.add, &op.del, &op.poss_add, &op.poss_del};
    std::size_t visited = 0;
    for_each_binding(domains, [&](const std::vector<std::string>& args) {
      if ((++visited & 0xff) == 0) deadline.check();
      Pending p;
      p.signature = Atom{op.name, args};
      for (int k = 0; k < 6; ++k) {
        for (const auto& atom : *lifted[k]) {
          Fact f{atom.predicate, {}};
          f.args.reserve(atom.args.size());
          for (const auto& term : atom.args) {
            if (!term.empty() && term[0] == '?') {
              auto pos = std::find_if(op.parameters.begin(), op.parameters.end(),
                                      [&](const TypedVariable& v) { return v.name == term; }) -
                         op.parameters.begin();
              f.args.push_back(args[static_cast<std::size_t>(pos)]);
            } else {
              f.args.push_back(term);
            }
          }
          p.lists[k].push_back(std::move(f));
        }
      }
      pending.push_back(std::move(p));
    });
  }

  // Facts referenced by loosely typed operators or the initial state join
  // the universe so every referenced fact has an id.
  for (const auto& p : pending) {
    for (const auto& list : p.lists) facts.insert(facts.end(), list.begin(), list.end());
  }
  facts.insert(facts.end(), init.begin(), init.end());
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  deadline.check();

  std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) { return a.signature < b.signature; });

  GroundedTask task;
  task.domain_ = domain;
  task.objects_ = by_type.all();
  task.facts_ = std::move(facts);
  for (std::size_t i = 0; i < task.facts_.size(); ++i) task.fact_index_.emplace(task.facts_[i], FactId(i));

  auto ids = [&](const std::vector<Fact>& list) {
    FactSet out;
    out.reserve(list.size());
    for (const auto& f : list) out.push_back(task.fact_index_.at(f));
    return out;
  };
  task.actions_.reserve(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if ((i & 0xff) == 0) deadline.check();
    auto& p = pending[i];
    GroundAction a;
    a.name = p.signature.predicate;
    a.args = std::move(p.signature.args);
    a.pre = ids(p.lists[0]);
    a.poss_pre = ids(p.lists[1]);
    a.add = ids(p.lists[2]);
    a.del = ids(p.lists[3]);
    a.poss_add = ids(p.lists[4]);
    a.poss_del = ids(p.lists[5]);
    normalize(a);
    task.actions_.push_back(std::move(a));
  }
  task.init_ = ids(init);
  normalize(task.init_);
  task.finalize();
  return task;
}

std::size_t count_bindings(const IncompleteDomain& domain, const std::vector<TypedObject>& objects) {
  ObjectsByType by_type(domain, objects);
  std::size_t total = 0;
  for (const auto& op : domain.operators) {
    std::size_t n = 1;
    for (const auto& p : op.parameters) n *= by_type.of(p.type).size();
    total += n;
  }
  return total;
}

CompletionCount completions_for(std::size_t k) {
  CompletionCount c;
  c.k = k;
  c.completions = boost::multiprecision::cpp_int(1) << k;
  return c;
}

CompletionCount count_completions(const IncompleteDomain& domain) {
  std::size_t k = 0;
  for (const auto& op : domain.operators) k += op.possible_count();
  return completions_for(k);
}

CompletionCount count_completions(const GroundedTask& task) {
  std::size_t k = 0;
  for (const auto& a : task.actions()) k += a.poss_pre.size() + a.poss_add.size() + a.poss_del.size();
  return completions_for(k);
}

std::string dump_ground(const GroundedTask& task) {
  std::ostringstream out;
  auto list = [&](const char* tag, const FactSet& set) {
    out << '\t' << tag;
    for (FactId f : set) out << ' ' << to_string(task.fact(f));
  };
  for (std::size_t i = 0; i < task.num_facts(); ++i) {
    out << "fact\t" << i << '\t' << to_string(task.facts()[i]) << (contains(task.init(), FactId(i)) ? "\tinit" : "")
        << '\n';
  }
  for (std::size_t i = 0; i < task.num_actions(); ++i) {
    const auto& a = task.actions()[i];
    out << "action\t" << i << '\t' << a.signature();
    list("pre", a.pre);
    list("poss-pre", a.poss_pre);
    list("add", a.add);
    list("del", a.del);
    list("poss-add", a.poss_add);
    list("poss-del", a.poss_del);
    out << '\n';
  }
  return out.str();
}

}  // namespace goalrec
