#pragma once

// Instantiation of lifted incomplete operators over typed objects, and the
// completion count 2^K of an incomplete model.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "goalrec/deadline.hpp"
#include "goalrec/ids.hpp"
#include "goalrec/model.hpp"

namespace goalrec {

/// Sorted, duplicate-free list of fact ids.
using FactSet = std::vector<FactId>;

bool contains(const FactSet& set, FactId fact);

struct GroundAction {
  std::string name;
  std::vector<std::string> args;
  FactSet pre;
  FactSet poss_pre;
  FactSet add;
  FactSet del;
  FactSet poss_add;
  FactSet poss_del;

  /// "(name arg1 arg2)"
  std::string signature() const;
  Atom signature_atom() const { return Atom{name, args}; }
};

/// The grounded incomplete task: fact universe, ground actions, objects and
/// initial state. Immutable once built by ground().
class GroundedTask {
 public:
  const IncompleteDomain& domain() const { return domain_; }
  const std::vector<Fact>& facts() const { return facts_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const std::vector<TypedObject>& objects() const { return objects_; }
  const FactSet& init() const { return init_; }

  std::size_t num_facts() const { return facts_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  const Fact& fact(FactId id) const { return facts_[index(id)]; }
  const GroundAction& action(ActionId id) const { return actions_[index(id)]; }

  std::optional<FactId> find_fact(const Fact& fact) const;
  std::optional<ActionId> find_action(const Atom& signature) const;

  /// Maps ground atoms to ids; throws ModelError for facts outside the universe.
  FactSet to_fact_set(std::span<const Fact> facts) const;
  std::vector<Fact> to_facts(const FactSet& set) const;

  /// Actions with `fact` in add ∪ poss_add, ascending.
  const std::vector<ActionId>& adders(FactId fact) const { return adders_[index(fact)]; }
  /// Actions with `fact` as a known precondition, ascending.
  const std::vector<ActionId>& consumers(FactId fact) const { return consumers_[index(fact)]; }

  /// Builds a task directly from ground data (used by generators and tests
  /// that work below the lifted level). Action fact sets are normalized.
  static GroundedTask from_ground(IncompleteDomain domain, std::vector<Fact> facts,
                                  std::vector<GroundAction> actions, FactSet init);

 private:
  friend GroundedTask ground(const IncompleteDomain&, const std::vector<TypedObject>&, const std::vector<Fact>&,
                             const Deadline&);
  void finalize();

  IncompleteDomain domain_;
  std::vector<Fact> facts_;
  std::vector<GroundAction> actions_;
  std::vector<TypedObject> objects_;
  FactSet init_;
  std::unordered_map<Fact, FactId, AtomHash> fact_index_;
  std::unordered_map<Atom, ActionId, AtomHash> action_index_;
  std::vector<std::vector<ActionId>> adders_;
  std::vector<std::vector<ActionId>> consumers_;
};

/// Instantiates every operator with every type-consistent binding and every
/// predicate with every type-consistent tuple. Actions are ordered
/// lexicographically by signature, facts by (predicate, args). A literal in
/// both a known and a possible slot of one action keeps only the known slot.
GroundedTask ground(const IncompleteDomain& domain, const std::vector<TypedObject>& objects,
                    const std::vector<Fact>& init, const Deadline& deadline = {});

/// Number of bindings `ground` would enumerate, without building anything.
std::size_t count_bindings(const IncompleteDomain& domain, const std::vector<TypedObject>& objects);

struct CompletionCount {
  std::size_t k = 0;
  boost::multiprecision::cpp_int completions = 1;  // 2^k
};

CompletionCount completions_for(std::size_t k);
/// K summed over lifted operators.
CompletionCount count_completions(const IncompleteDomain& domain);
/// K summed over ground actions.
CompletionCount count_completions(const GroundedTask& task);

/// Newline-delimited dump of facts and actions for debugging.
std::string dump_ground(const GroundedTask& task);

}  // namespace goalrec
