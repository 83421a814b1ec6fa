#pragma once

// Text formats: the PDDL domain dialect with possible-precondition and
// possible-effect blocks, standard PDDL problems, hypothesis files (one
// goal per line), and observation traces (one ground action per line).
//
// Annotated action bodies look like
//
//   (:action pick-up
//     :parameters (?x - block)
//     :precondition (and (clear ?x) (ontable ?x))
//     :effect (and (holding ?x) (not (ontable ?x)))
//     :poss-precondition (and (handempty))
//     :poss-effect-add (and (clear ?x))
//     :poss-effect-del (and (handempty)))
//
// The three :poss-* blocks are optional conjunctions of positive atoms.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "goalrec/ids.hpp"
#include "goalrec/model.hpp"

namespace goalrec {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Malformed input: unbalanced parentheses, unexpected tokens, unsupported
/// constructs. Carries the 1-based line/column of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

struct ParseOptions {
  /// When false the :poss-* blocks are rejected, i.e. plain STRIPS.
  bool allow_annotations = true;
};

IncompleteDomain parse_domain(std::string_view text, const ParseOptions& options = {});

/// Parses a problem file against `domain`. Init facts must use declared
/// predicates over declared objects/constants with compatible types. The
/// :goal section is optional and only syntax-checked.
ProblemInstance parse_problem(std::string_view text, const IncompleteDomain& domain);

/// One goal per non-blank line: "(and (on a b) (clear a))" or a sequence of
/// atoms optionally separated by commas. At least one goal is required.
std::vector<Goal> parse_hypotheses(std::string_view text, const IncompleteDomain& domain,
                                   const std::vector<TypedObject>& objects);

/// Parses a single goal in hypothesis syntax and returns the index of the
/// set-equal hypothesis. Throws ModelError when it is not a candidate.
std::size_t parse_hidden_goal(std::string_view text, const std::vector<Goal>& hypotheses,
                              const IncompleteDomain& domain, const std::vector<TypedObject>& objects);

/// Reads ground action signatures such as "(unstack a b)", one per line.
/// Lines starting with ';' are comments.
std::vector<Atom> parse_observation_atoms(std::string_view text);

class GroundedTask;

/// Resolves each signature against the grounded action set, preserving order
/// and duplicates. Unknown signatures and arity mismatches throw ModelError.
std::vector<ActionId> parse_observations(std::string_view text, const GroundedTask& task);
std::vector<ActionId> resolve_observations(const std::vector<Atom>& signatures, const GroundedTask& task);

struct SerializeOptions {
  bool annotations = true;
};

std::string serialize_domain(const IncompleteDomain& domain, const SerializeOptions& options = {});
std::string serialize_problem(const ProblemInstance& problem);
std::string serialize_hypotheses(const std::vector<Goal>& hypotheses);

/// Assembles a RecognitionProblem from file contents. `hidden_goal_text`
/// may be empty (live use, no ground truth).
RecognitionProblem load_recognition_problem(std::string_view domain_text, std::string_view problem_text,
                                            std::string_view hypotheses_text,
                                            std::string_view observations_text,
                                            std::string_view hidden_goal_text = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace goalrec
