#include "goalrec/pddl.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "goalrec/grounding.hpp"
#include "sexpr.hpp"

namespace goalrec {

using sexpr::fail;
using sexpr::Node;

ParseError::ParseError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      pos_(pos) {}

namespace {

std::string where(const Node& node) {
  return std::to_string(node.pos.line) + ":" + std::to_string(node.pos.column) + ": ";
}

[[noreturn]] void semantic(const Node& node, const std::string& message) {
  throw ModelError(where(node) + message);
}

const Node& expect_list(const Node& node, const char* what) {
  if (!node.is_list) fail(node.pos, std::string("expected ") + what);
  return node;
}

const std::string& expect_token(const Node& node, const char* what) {
  if (node.is_list || node.token.empty()) fail(node.pos, std::string("expected ") + what);
  return node.token;
}

bool is_keyword(const Node& node) { return !node.is_list && !node.token.empty() && node.token[0] == ':'; }

/// Parses "a b - t c" style typed lists. `variables` requires '?' names.
template <typename Out>
std::vector<Out> typed_list(const std::vector<Node>& items, std::size_t begin, bool variables) {
  std::vector<Out> out;
  std::size_t pending = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const Node& item = items[i];
    const std::string& tok = expect_token(item, variables ? "variable" : "name");
    if (tok == "-") {
      if (i + 1 >= items.size()) fail(item.pos, "missing type after '-'");
      const Node& type_node = items[++i];
      if (type_node.is_list) fail(type_node.pos, "'either' types are not supported");
      if (pending == 0) fail(item.pos, "'-' without preceding names");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type_node.token;
      pending = 0;
      continue;
    }
    if (variables && tok[0] != '?') fail(item.pos, "expected variable, got '" + tok + "'");
    if (!variables && tok[0] == '?') fail(item.pos, "unexpected variable '" + tok + "'");
    Out entry;
    entry.name = tok;
    out.push_back(std::move(entry));
    ++pending;
  }
  return out;
}

Atom read_atom(const Node& node) {
  expect_list(node, "atom");
  if (node.children.empty()) fail(node.pos, "empty atom");
  Atom atom;
  atom.predicate = expect_token(node.children[0], "predicate name");
  if (atom.predicate[0] == '?' || atom.predicate[0] == ':') fail(node.children[0].pos, "expected predicate name");
  for (std::size_t i = 1; i < node.children.size(); ++i) {
    atom.args.push_back(expect_token(node.children[i], "term"));
  }
  return atom;
}

void reject_connective(const Node& node) {
  static const std::set<std::string> negated{"not"};
  static const std::set<std::string> conditional{"when"};
  static const std::set<std::string> other{"or", "imply", "exists", "forall", "=", "increase", "decrease", "assign"};
  if (node.children.empty() || node.children[0].is_list) return;
  const std::string& head = node.children[0].token;
  if (negated.count(head)) fail(node.pos, "negative literals are not supported here");
  if (conditional.count(head)) fail(node.pos, "conditional effects are not supported");
  if (other.count(head)) fail(node.pos, "'" + head + "' is not part of the STRIPS fragment");
}

/// A conjunction of positive atoms: (), a single atom, or (and ...).
void read_conjunction(const Node& node, std::vector<std::pair<Atom, const Node*>>& out) {
  expect_list(node, "formula");
  if (node.children.empty()) return;
  if (node.children[0].is_token("and")) {
    for (std::size_t i = 1; i < node.children.size(); ++i) read_conjunction(node.children[i], out);
    return;
  }
  reject_connective(node);
  out.emplace_back(read_atom(node), &node);
}

/// Effects: positive atoms and (not atom).
void read_effect(const Node& node, std::vector<std::pair<Atom, const Node*>>& adds,
                 std::vector<std::pair<Atom, const Node*>>& dels) {
  expect_list(node, "effect");
  if (node.children.empty()) return;
  if (node.children[0].is_token("and")) {
    for (std::size_t i = 1; i < node.children.size(); ++i) read_effect(node.children[i], adds, dels);
    return;
  }
  if (node.children[0].is_token("not")) {
    if (node.children.size() != 2) fail(node.pos, "malformed negative effect");
    const Node& inner = node.children[1];
    expect_list(inner, "atom");
    reject_connective(inner);
    dels.emplace_back(read_atom(inner), &inner);
    return;
  }
  reject_connective(node);
  adds.emplace_back(read_atom(node), &node);
}

class DomainReader {
 public:
  DomainReader(const ParseOptions& options) : options_(options) {}

  IncompleteDomain read(std::string_view text) {
    Node root = sexpr::parse_one(text);
    expect_list(root, "(define ...)");
    const auto& items = root.children;
    if (items.empty() || !items[0].is_token("define")) fail(root.pos, "expected 'define'");
    if (items.size() < 2) fail(root.pos, "missing domain name");
    const Node& header = expect_list(items[1], "(domain <name>)");
    if (header.children.size() != 2 || !header.children[0].is_token("domain")) {
      fail(header.pos, "expected (domain <name>)");
    }
    domain_.name = expect_token(header.children[1], "domain name");

    std::vector<const Node*> actions;
    std::set<std::string> seen;
    for (std::size_t i = 2; i < items.size(); ++i) {
      const Node& section = expect_list(items[i], "domain section");
      if (section.children.empty()) fail(section.pos, "empty section");
      const std::string& key = expect_token(section.children[0], "section keyword");
      if (key == ":action") {
        actions.push_back(&section);
        continue;
      }
      if (!seen.insert(key).second) fail(section.pos, "duplicate section " + key);
      if (key == ":requirements") {
        read_requirements(section);
      } else if (key == ":types") {
        for (const auto& t : typed_list<TypedObject>(section.children, 1, false)) {
          try {
            domain_.types.declare(t.name, t.type);
          } catch (const ModelError& e) {
            semantic(section, e.what());
          }
        }
      } else if (key == ":constants") {
        domain_.constants = typed_list<TypedObject>(section.children, 1, false);
        for (const auto& c : domain_.constants) {
          if (!domain_.types.has(c.type)) semantic(section, "constant '" + c.name + "' has undeclared type '" + c.type + "'");
        }
      } else if (key == ":predicates") {
        read_predicates(section);
      } else {
        fail(section.pos, "unknown or unsupported section " + key);
      }
    }
    for (const Node* action : actions) read_action(*action);
    try {
      validate(domain_);
    } catch (const ModelError& e) {
      semantic(root, e.what());
    }
    return std::move(domain_);
  }

 private:
  void read_requirements(const Node& section) {
    static const std::set<std::string> supported{":strips", ":typing"};
    for (std::size_t i = 1; i < section.children.size(); ++i) {
      const std::string& req = expect_token(section.children[i], "requirement");
      if (!supported.count(req)) fail(section.children[i].pos, "unsupported requirement " + req);
      domain_.requirements.push_back(req);
    }
  }

  void read_predicates(const Node& section) {
    for (std::size_t i = 1; i < section.children.size(); ++i) {
      const Node& decl = expect_list(section.children[i], "predicate declaration");
      if (decl.children.empty()) fail(decl.pos, "empty predicate declaration");
      PredicateSchema schema;
      schema.name = expect_token(decl.children[0], "predicate name");
      schema.parameters = typed_list<TypedVariable>(decl.children, 1, true);
      if (domain_.find_predicate(schema.name)) semantic(decl, "duplicate predicate '" + schema.name + "'");
      for (const auto& p : schema.parameters) {
        if (!domain_.types.has(p.type)) semantic(decl, "undeclared type '" + p.type + "'");
      }
      domain_.predicates.push_back(std::move(schema));
    }
  }

  void check_atom(const Atom& atom, const Node& node, const IncompleteOperator& op) {
    const auto* pred = domain_.find_predicate(atom.predicate);
    if (pred == nullptr) semantic(node, "undeclared predicate '" + atom.predicate + "'");
    if (pred->arity() != atom.args.size()) {
      semantic(node, "arity mismatch for '" + atom.predicate + "': expected " + std::to_string(pred->arity()) +
                         ", got " + std::to_string(atom.args.size()));
    }
    for (const auto& term : atom.args) {
      if (term[0] == '?') {
        bool bound = std::any_of(op.parameters.begin(), op.parameters.end(),
                                 [&](const TypedVariable& v) { return v.name == term; });
        if (!bound) semantic(node, "variable " + term + " is not a parameter of '" + op.name + "'");
      } else if (std::none_of(domain_.constants.begin(), domain_.constants.end(),
                              [&](const TypedObject& c) { return c.name == term; })) {
        semantic(node, "undeclared constant '" + term + "'");
      }
    }
  }

  void fill(AtomList& list, const std::vector<std::pair<Atom, const Node*>>& atoms, const IncompleteOperator& op) {
    for (const auto& [atom, node] : atoms) {
      check_atom(atom, *node, op);
      add_unique(list, atom);
    }
  }

  void read_action(const Node& section) {
    const auto& items = section.children;
    if (items.size() < 2) fail(section.pos, "missing action name");
    IncompleteOperator op;
    op.name = expect_token(items[1], "action name");
    if (domain_.find_operator(op.name)) semantic(section, "duplicate operator '" + op.name + "'");

    std::set<std::string> keys;
    std::vector<std::pair<Atom, const Node*>> pre, poss_pre, add, del, poss_add, poss_del;
    for (std::size_t i = 2; i < items.size(); i += 2) {
      const Node& key_node = items[i];
      if (!is_keyword(key_node)) fail(key_node.pos, "expected action keyword");
      const std::string& key = key_node.token;
      if (i + 1 >= items.size()) fail(key_node.pos, "missing value for " + key);
      const Node& value = items[i + 1];
      if (!keys.insert(key).second) fail(key_node.pos, "duplicate " + key);
      bool annotation = key.rfind(":poss-", 0) == 0;
      if (annotation && !options_.allow_annotations) {
        fail(key_node.pos, key + " is not allowed in plain STRIPS mode");
      }
      if (key == ":parameters") {
        expect_list(value, "parameter list");
        op.parameters = typed_list<TypedVariable>(value.children, 0, true);
        for (const auto& p : op.parameters) {
          if (!domain_.types.has(p.type)) semantic(value, "undeclared type '" + p.type + "'");
        }
      } else if (key == ":precondition") {
        read_conjunction(value, pre);
      } else if (key == ":effect") {
        read_effect(value, add, del);
      } else if (key == ":poss-precondition") {
        read_conjunction(value, poss_pre);
      } else if (key == ":poss-effect-add") {
        read_conjunction(value, poss_add);
      } else if (key == ":poss-effect-del") {
        read_conjunction(value, poss_del);
      } else {
        fail(key_node.pos, "unknown action keyword " + key);
      }
    }
    fill(op.pre, pre, op);
    fill(op.poss_pre, poss_pre, op);
    fill(op.add, add, op);
    fill(op.del, del, op);
    fill(op.poss_add, poss_add, op);
    fill(op.poss_del, poss_del, op);
    domain_.operators.push_back(std::move(op));
  }

  ParseOptions options_;
  IncompleteDomain domain_;
};

/// Object lookup shared by problem, hypothesis, and goal parsing.
class FactChecker {
 public:
  FactChecker(const IncompleteDomain& domain, const std::vector<TypedObject>& objects) : domain_(domain) {
    for (const auto& c : domain.constants) types_[c.name] = c.type;
    for (const auto& o : objects) types_[o.name] = o.type;
  }

  Fact check(const Atom& atom, const Node& node) const {
    const auto* pred = domain_.find_predicate(atom.predicate);
    if (pred == nullptr) semantic(node, "undeclared predicate '" + atom.predicate + "'");
    if (pred->arity() != atom.args.size()) {
      semantic(node, "arity mismatch for '" + atom.predicate + "': expected " + std::to_string(pred->arity()));
    }
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      auto it = types_.find(atom.args[i]);
      if (it == types_.end()) semantic(node, "undeclared object '" + atom.args[i] + "'");
      if (!domain_.types.is_subtype(it->second, pred->parameters[i].type)) {
        semantic(node, "object '" + atom.args[i] + "' of type '" + it->second + "' does not fit parameter type '" +
                           pred->parameters[i].type + "' of '" + atom.predicate + "'");
      }
    }
    return atom;
  }

 private:
  const IncompleteDomain& domain_;
  std::unordered_map<std::string, std::string> types_;
};

/// Hypothesis line: (and a b ...) | a b ... | a, b, ...
Goal read_goal_line(std::string_view line, const FactChecker& checker, SourcePos offset) {
  std::string cleaned(line);
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::vector<Node> nodes;
  try {
    nodes = sexpr::parse_all(cleaned);
  } catch (const ParseError& e) {
    throw ParseError(SourcePos{offset.line, e.pos().column}, e.what());
  }
  for (auto& n : nodes) n.pos.line = offset.line;
  std::vector<std::pair<Atom, const Node*>> atoms;
  for (const auto& n : nodes) read_conjunction(n, atoms);
  Goal goal;
  for (const auto& [atom, node] : atoms) goal.push_back(checker.check(atom, *node));
  if (goal.empty()) fail(offset, "empty goal");
  return canonical(std::move(goal));
}

std::vector<std::pair<std::string_view, std::size_t>> content_lines(std::string_view text) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == ';') continue;
    out.emplace_back(line.substr(first), line_no);
  }
  return out;
}

void write_atoms(std::ostream& out, const AtomList& atoms) {
  out << "(and";
  for (const auto& a : atoms) out << ' ' << to_string(a);
  out << ')';
}

template <typename T>
void write_typed(std::ostream& out, const std::vector<T>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    out << (i ? " " : "") << items[i].name;
    bool last_of_type = i + 1 == items.size() || items[i + 1].type != items[i].type;
    if (last_of_type) out << " - " << items[i].type;
  }
}

}  // namespace

IncompleteDomain parse_domain(std::string_view text, const ParseOptions& options) {
  return DomainReader(options).read(text);
}

ProblemInstance parse_problem(std::string_view text, const IncompleteDomain& domain) {
  Node root = sexpr::parse_one(text);
  expect_list(root, "(define ...)");
  const auto& items = root.children;
  if (items.empty() || !items[0].is_token("define")) fail(root.pos, "expected 'define'");
  if (items.size() < 2) fail(root.pos, "missing problem name");
  const Node& header = expect_list(items[1], "(problem <name>)");
  if (header.children.size() != 2 || !header.children[0].is_token("problem")) fail(header.pos, "expected (problem <name>)");

  ProblemInstance problem;
  problem.name = expect_token(header.children[1], "problem name");
  const Node* init = nullptr;
  const Node* goal = nullptr;
  std::set<std::string> seen;
  for (std::size_t i = 2; i < items.size(); ++i) {
    const Node& section = expect_list(items[i], "problem section");
    if (section.children.empty()) fail(section.pos, "empty section");
    const std::string& key = expect_token(section.children[0], "section keyword");
    if (!seen.insert(key).second) fail(section.pos, "duplicate section " + key);
    if (key == ":domain") {
      if (section.children.size() != 2) fail(section.pos, "expected (:domain <name>)");
      problem.domain_name = expect_token(section.children[1], "domain name");
      if (problem.domain_name != domain.name) {
        semantic(section, "problem is for domain '" + problem.domain_name + "', not '" + domain.name + "'");
      }
    } else if (key == ":objects") {
      problem.objects = typed_list<TypedObject>(section.children, 1, false);
      std::set<std::string> names;
      for (const auto& o : problem.objects) {
        if (!domain.types.has(o.type)) semantic(section, "object '" + o.name + "' has undeclared type '" + o.type + "'");
        if (!names.insert(o.name).second) semantic(section, "duplicate object '" + o.name + "'");
      }
    } else if (key == ":init") {
      init = &section;
    } else if (key == ":goal") {
      goal = &section;
    } else if (key == ":requirements") {
      continue;
    } else {
      fail(section.pos, "unknown or unsupported section " + key);
    }
  }

  FactChecker checker(domain, problem.objects);
  if (init != nullptr) {
    std::set<Fact> unique;
    for (std::size_t i = 1; i < init->children.size(); ++i) {
      const Node& node = init->children[i];
      expect_list(node, "init atom");
      reject_connective(node);
      Fact fact = checker.check(read_atom(node), node);
      if (unique.insert(fact).second) problem.init.push_back(std::move(fact));
    }
  }
  if (goal != nullptr) {
    if (goal->children.size() != 2) fail(goal->pos, "expected (:goal <formula>)");
    std::vector<std::pair<Atom, const Node*>> atoms;
    read_conjunction(goal->children[1], atoms);
    for (const auto& [atom, node] : atoms) problem.goal.push_back(checker.check(atom, *node));
    problem.goal = canonical(std::move(problem.goal));
  }
  return problem;
}

std::vector<Goal> parse_hypotheses(std::string_view text, const IncompleteDomain& domain,
                                   const std::vector<TypedObject>& objects) {
  FactChecker checker(domain, objects);
  std::vector<Goal> goals;
  for (const auto& [line, line_no] : content_lines(text)) {
    goals.push_back(read_goal_line(line, checker, SourcePos{line_no, 1}));
  }
  if (goals.empty()) throw ModelError("hypothesis file lists no candidate goals");
  return goals;
}

std::size_t parse_hidden_goal(std::string_view text, const std::vector<Goal>& hypotheses,
                              const IncompleteDomain& domain, const std::vector<TypedObject>& objects) {
  FactChecker checker(domain, objects);
  auto lines = content_lines(text);
  if (lines.size() != 1) throw ModelError("hidden goal file must contain exactly one goal");
  Goal goal = read_goal_line(lines[0].first, checker, SourcePos{lines[0].second, 1});
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    if (canonical(hypotheses[i]) == goal) return i;
  }
  throw ModelError("hidden goal " + goal_to_string(goal) + " is not among the hypotheses");
}

std::vector<Atom> parse_observation_atoms(std::string_view text) {
  std::vector<Atom> out;
  for (const auto& [line, line_no] : content_lines(text)) {
    Node node;
    try {
      node = sexpr::parse_one(line);
    } catch (const ParseError& e) {
      throw ParseError(SourcePos{line_no, e.pos().column}, e.what());
    }
    node.pos.line = line_no;
    out.push_back(read_atom(node));
  }
  return out;
}

std::vector<ActionId> resolve_observations(const std::vector<Atom>& signatures, const GroundedTask& task) {
  std::vector<ActionId> out;
  out.reserve(signatures.size());
  for (const auto& sig : signatures) {
    if (auto id = task.find_action(sig)) {
      out.push_back(*id);
      continue;
    }
    const auto* op = task.domain().find_operator(sig.predicate);
    if (op == nullptr) throw ModelError("unknown action " + to_string(sig));
    if (op->parameters.size() != sig.args.size()) {
      throw ModelError("arity mismatch in observation " + to_string(sig) + ": '" + op->name + "' takes " +
                       std::to_string(op->parameters.size()) + " arguments");
    }
    throw ModelError("observation " + to_string(sig) + " is not an instantiable action");
  }
  return out;
}

std::vector<ActionId> parse_observations(std::string_view text, const GroundedTask& task) {
  return resolve_observations(parse_observation_atoms(text), task);
}

std::string serialize_domain(const IncompleteDomain& domain, const SerializeOptions& options) {
  std::ostringstream out;
  out << "(define (domain " << domain.name << ")\n";
  if (!domain.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : domain.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!domain.types.declared().empty()) {
    out << "  (:types";
    for (const auto& t : domain.types.declared()) out << ' ' << t << " - " << domain.types.parent(t);
    out << ")\n";
  }
  if (!domain.constants.empty()) {
    out << "  (:constants ";
    write_typed(out, domain.constants);
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : domain.predicates) {
    out << "\n    (" << p.name;
    if (!p.parameters.empty()) {
      out << ' ';
      write_typed(out, p.parameters);
    }
    out << ')';
  }
  out << ")\n";
  for (const auto& op : domain.operators) {
    out << "  (:action " << op.name << "\n    :parameters (";
    write_typed(out, op.parameters);
    out << ")\n    :precondition ";
    write_atoms(out, op.pre);
    out << "\n    :effect (and";
    for (const auto& a : op.add) out << ' ' << to_string(a);
    for (const auto& d : op.del) out << " (not " << to_string(d) << ')';
    out << ')';
    if (options.annotations) {
      if (!op.poss_pre.empty()) {
        out << "\n    :poss-precondition ";
        write_atoms(out, op.poss_pre);
      }
      if (!op.poss_add.empty()) {
        out << "\n    :poss-effect-add ";
        write_atoms(out, op.poss_add);
      }
      if (!op.poss_del.empty()) {
        out << "\n    :poss-effect-del ";
        write_atoms(out, op.poss_del);
      }
    }
    out << ")\n";
  }
  out << ")\n";
  return out.str();
}

std::string serialize_problem(const ProblemInstance& problem) {
  std::ostringstream out;
  out << "(define (problem " << problem.name << ")\n  (:domain " << problem.domain_name << ")\n";
  out << "  (:objects ";
  write_typed(out, problem.objects);
  out << ")\n  (:init";
  for (const auto& f : problem.init) out << "\n    " << to_string(f);
  out << ")\n";
  if (!problem.goal.empty()) {
    out << "  (:goal ";
    write_atoms(out, problem.goal);
    out << ")\n";
  }
  out << ")\n";
  return out.str();
}

std::string serialize_hypotheses(const std::vector<Goal>& hypotheses) {
  std::string out;
  for (const auto& g : hypotheses) out += goal_to_string(g) + "\n";
  return out;
}

RecognitionProblem load_recognition_problem(std::string_view domain_text, std::string_view problem_text,
                                            std::string_view hypotheses_text,
                                            std::string_view observations_text,
                                            std::string_view hidden_goal_text) {
  RecognitionProblem problem;
  problem.domain = parse_domain(domain_text);
  auto instance = parse_problem(problem_text, problem.domain);
  problem.objects = std::move(instance.objects);
  problem.init = std::move(instance.init);
  problem.hypotheses = parse_hypotheses(hypotheses_text, problem.domain, problem.objects);
  if (hidden_goal_text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    problem.hidden_goal = parse_hidden_goal(hidden_goal_text, problem.hypotheses, problem.domain, problem.objects);
  }
  problem.observations = parse_observation_atoms(observations_text);
  return problem;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace goalrec
