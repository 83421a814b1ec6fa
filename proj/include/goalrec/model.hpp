#pragma once

// Lifted incomplete-STRIPS model: predicates, incomplete operators with
// possible preconditions and effects, and the recognition problem that
// ties a domain to objects, an initial state, and candidate goals.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace goalrec {

/// Raised for well-formed input that violates a model constraint
/// (undeclared predicate, arity mismatch, duplicate operator, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kRootType = "object";

struct TypedVariable {
  std::string name;  // includes the leading '?' for parameters
  std::string type = kRootType;

  friend bool operator==(const TypedVariable&, const TypedVariable&) = default;
};

/// A predicate applied to terms. Terms are variables ("?x") in lifted
/// operators and object names once grounded.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A ground atom. Comparable and hashable by value.
using Fact = Atom;

std::string to_string(const Atom& atom);

struct AtomHash {
  std::size_t operator()(const Atom& atom) const noexcept;
};

struct PredicateSchema {
  std::string name;
  std::vector<TypedVariable> parameters;

  std::size_t arity() const { return parameters.size(); }
  friend bool operator==(const PredicateSchema&, const PredicateSchema&) = default;
};

/// Literal lists keep first-insertion order so serialization is stable;
/// they never hold duplicates.
using AtomList = std::vector<Atom>;

/// Appends `atom` unless already present. Returns true when appended.
bool add_unique(AtomList& list, const Atom& atom);
bool contains(const AtomList& list, const Atom& atom);

/// The six-tuple of an incomplete operator.
struct IncompleteOperator {
  std::string name;
  std::vector<TypedVariable> parameters;
  AtomList pre;
  AtomList poss_pre;
  AtomList add;
  AtomList del;
  AtomList poss_add;
  AtomList poss_del;

  /// |poss_pre| + |poss_add| + |poss_del|.
  std::size_t possible_count() const {
    return poss_pre.size() + poss_add.size() + poss_del.size();
  }
};

/// Set equality on all six literal lists (order-insensitive).
bool structurally_equal(const IncompleteOperator& a, const IncompleteOperator& b);

/// Single-inheritance type tree rooted at `object`.
class TypeHierarchy {
 public:
  TypeHierarchy();

  /// Declares `type` as a subtype of `parent`. Redeclaring with the same
  /// parent is a no-op; a conflicting parent or a cycle is a ModelError.
  void declare(const std::string& type, const std::string& parent = kRootType);
  bool has(const std::string& type) const;
  const std::string& parent(const std::string& type) const;
  bool is_subtype(const std::string& type, const std::string& ancestor) const;
  /// Declared types other than the root, in declaration order.
  const std::vector<std::string>& declared() const { return order_; }

  friend bool operator==(const TypeHierarchy&, const TypeHierarchy&) = default;

 private:
  std::map<std::string, std::string> parent_;
  std::vector<std::string> order_;
};

struct TypedObject {
  std::string name;
  std::string type = kRootType;

  friend bool operator==(const TypedObject&, const TypedObject&) = default;
};

struct IncompleteDomain {
  std::string name;
  std::vector<std::string> requirements;
  TypeHierarchy types;
  std::vector<TypedObject> constants;
  std::vector<PredicateSchema> predicates;
  std::vector<IncompleteOperator> operators;

  const PredicateSchema* find_predicate(const std::string& name) const;
  const IncompleteOperator* find_operator(const std::string& name) const;

  /// True when no operator carries any possible precondition or effect.
  bool is_complete() const;
};

/// Order-insensitive comparison of predicates, constants, types, and operators.
bool structurally_equal(const IncompleteDomain& a, const IncompleteDomain& b);

/// Checks every IncompleteOperator/IncompleteDomain invariant: unique
/// operator names, declared predicates with matching arity, bound variables,
/// pairwise-disjoint known/possible lists. Throws ModelError.
void validate(const IncompleteDomain& domain);

/// A goal is a conjunction of ground atoms.
using Goal = std::vector<Fact>;

/// Objects, initial state, and the (ignored) goal of a PDDL problem file.
struct ProblemInstance {
  std::string name;
  std::string domain_name;
  std::vector<TypedObject> objects;
  std::vector<Fact> init;
  Goal goal;
};

struct RecognitionProblem {
  IncompleteDomain domain;
  std::vector<TypedObject> objects;
  std::vector<Fact> init;
  std::vector<Goal> hypotheses;
  std::optional<std::size_t> hidden_goal;
  /// Ground action signatures, e.g. "(unstack a b)"; resolved against the
  /// grounded task.
  std::vector<Atom> observations;
};

/// Canonical text for a goal: sorted, deduplicated "(and ...)" form.
std::string goal_to_string(const Goal& goal);

/// Sorted, deduplicated copy.
Goal canonical(Goal goal);

}  // namespace goalrec
