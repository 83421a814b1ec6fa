#include "goalrec/model.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace goalrec {

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  for (const auto& arg : atom.args) {
    out += ' ';
    out += arg;
  }
  out += ')';
  return out;
}

std::size_t AtomHash::operator()(const Atom& atom) const noexcept {
  std::size_t seed = std::hash<std::string>{}(atom.predicate);
  for (const auto& arg : atom.args) {
    seed ^= std::hash<std::string>{}(arg) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}

bool add_unique(AtomList& list, const Atom& atom) {
  if (contains(list, atom)) return false;
  list.push_back(atom);
  return true;
}

bool contains(const AtomList& list, const Atom& atom) {
  return std::find(list.begin(), list.end(), atom) != list.end();
}

namespace {

bool same_set(const AtomList& a, const AtomList& b) {
  return std::set<Atom>(a.begin(), a.end()) == std::set<Atom>(b.begin(), b.end());
}

template <typename T>
bool same_elements(std::vector<T> a, std::vector<T> b, auto key) {
  if (a.size() != b.size()) return false;
  auto less = [&](const T& x, const T& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

}  // namespace

bool structurally_equal(const IncompleteOperator& a, const IncompleteOperator& b) {
  return a.name == b.name && a.parameters == b.parameters && same_set(a.pre, b.pre) &&
         same_set(a.poss_pre, b.poss_pre) && same_set(a.add, b.add) && same_set(a.del, b.del) &&
         same_set(a.poss_add, b.poss_add) && same_set(a.poss_del, b.poss_del);
}

TypeHierarchy::TypeHierarchy() { parent_[kRootType] = ""; }

void TypeHierarchy::declare(const std::string& type, const std::string& parent) {
  if (type == kRootType) {
    if (parent != kRootType && !parent.empty()) {
      throw ModelError("type 'object' cannot have a parent");
    }
    return;
  }
  if (!has(parent)) declare(parent, kRootType);
  auto it = parent_.find(type);
  if (it != parent_.end()) {
    // Implicitly declared types (seen first as a parent) may be refined once.
    if (it->second == parent) return;
    if (it->second != kRootType) {
      throw ModelError("type '" + type + "' declared with conflicting parents '" + it->second +
                       "' and '" + parent + "'");
    }
  }
  if (is_subtype(parent, type)) throw ModelError("cyclic type declaration for '" + type + "'");
  if (it == parent_.end()) order_.push_back(type);
  parent_[type] = parent;
}

bool TypeHierarchy::has(const std::string& type) const { return parent_.count(type) != 0; }

const std::string& TypeHierarchy::parent(const std::string& type) const {
  auto it = parent_.find(type);
  if (it == parent_.end()) throw ModelError("unknown type '" + type + "'");
  return it->second;
}

bool TypeHierarchy::is_subtype(const std::string& type, const std::string& ancestor) const {
  std::string current = type;
  while (!current.empty()) {
    if (current == ancestor) return true;
    auto it = parent_.find(current);
    if (it == parent_.end()) return false;
    current = it->second;
  }
  return false;
}

const PredicateSchema* IncompleteDomain::find_predicate(const std::string& name) const {
  for (const auto& p : predicates) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const IncompleteOperator* IncompleteDomain::find_operator(const std::string& name) const {
  for (const auto& op : operators) {
    if (op.name == name) return &op;
  }
  return nullptr;
}

bool IncompleteDomain::is_complete() const {
  return std::all_of(operators.begin(), operators.end(),
                     [](const IncompleteOperator& op) { return op.possible_count() == 0; });
}

bool structurally_equal(const IncompleteDomain& a, const IncompleteDomain& b) {
  if (a.name != b.name || !(a.types == b.types)) return false;
  if (!same_elements(a.predicates, b.predicates, [](const PredicateSchema& p) { return p.name; }))
    return false;
  if (!same_elements(a.constants, b.constants, [](const TypedObject& o) { return o.name; }))
    return false;
  if (a.operators.size() != b.operators.size()) return false;
  for (const auto& op : a.operators) {
    const auto* other = b.find_operator(op.name);
    if (other == nullptr || !structurally_equal(op, *other)) return false;
  }
  return true;
}

namespace {

void check_disjoint(const IncompleteOperator& op, const AtomList& known, const AtomList& possible,
                    const char* what) {
  for (const auto& atom : possible) {
    if (contains(known, atom)) {
      throw ModelError("operator '" + op.name + "': " + to_string(atom) + " is both a known and a possible " +
                       what);
    }
  }
}

}  // namespace

void validate(const IncompleteDomain& domain) {
  std::unordered_set<std::string> names;
  for (const auto& pred : domain.predicates) {
    if (pred.name.empty()) throw ModelError("predicate with empty name");
    if (!names.insert(pred.name).second) throw ModelError("duplicate predicate '" + pred.name + "'");
    std::unordered_set<std::string> vars;
    for (const auto& param : pred.parameters) {
      if (!vars.insert(param.name).second) {
        throw ModelError("predicate '" + pred.name + "' repeats variable " + param.name);
      }
      if (!domain.types.has(param.type)) {
        throw ModelError("predicate '" + pred.name + "' uses undeclared type '" + param.type + "'");
      }
    }
  }

  std::unordered_set<std::string> constants;
  for (const auto& c : domain.constants) constants.insert(c.name);

  names.clear();
  for (const auto& op : domain.operators) {
    if (!names.insert(op.name).second) throw ModelError("duplicate operator '" + op.name + "'");
    std::unordered_set<std::string> vars;
    for (const auto& param : op.parameters) {
      if (!vars.insert(param.name).second) {
        throw ModelError("operator '" + op.name + "' repeats parameter " + param.name);
      }
      if (!domain.types.has(param.type)) {
        throw ModelError("operator '" + op.name + "' uses undeclared type '" + param.type + "'");
      }
    }
    auto check_atoms = [&](const AtomList& atoms) {
      for (const auto& atom : atoms) {
        const auto* pred = domain.find_predicate(atom.predicate);
        if (pred == nullptr) {
          throw ModelError("operator '" + op.name + "' uses undeclared predicate '" + atom.predicate + "'");
        }
        if (pred->arity() != atom.args.size()) {
          throw ModelError("operator '" + op.name + "': arity mismatch in " + to_string(atom) + " (expected " +
                           std::to_string(pred->arity()) + ")");
        }
        for (const auto& term : atom.args) {
          bool is_var = !term.empty() && term.front() == '?';
          if (is_var ? vars.count(term) == 0 : constants.count(term) == 0) {
            throw ModelError("operator '" + op.name + "': unbound term '" + term + "' in " + to_string(atom));
          }
        }
      }
    };
    for (const AtomList* list : {&op.pre, &op.poss_pre, &op.add, &op.del, &op.poss_add, &op.poss_del}) {
      check_atoms(*list);
    }
    check_disjoint(op, op.pre, op.poss_pre, "precondition");
    check_disjoint(op, op.add, op.poss_add, "add effect");
    check_disjoint(op, op.del, op.poss_del, "delete effect");
  }
}

Goal canonical(Goal goal) {
  std::sort(goal.begin(), goal.end());
  goal.erase(std::unique(goal.begin(), goal.end()), goal.end());
  return goal;
}

std::string goal_to_string(const Goal& goal) {
  std::string out = "(and";
  for (const auto& fact : canonical(goal)) {
    out += ' ';
    out += to_string(fact);
  }
  out += ')';
  return out;
}

}  // namespace goalrec
