#pragma once

// Online goal recognition over landmark evidence: observations are folded in
// order, landmarks seen in the preconditions or (possible) add effects of an
// observed action count as achieved, overlooked landmarks are discovered as
// the observations arrive, and every hypothesis is scored by goal completion
// (h_gc) or by uniqueness-weighted completion (h_uniq).

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "goalrec/deadline.hpp"
#include "goalrec/grounding.hpp"
#include "goalrec/landmarks.hpp"

namespace goalrec {

using Rational = boost::multiprecision::cpp_rational;

enum class Heuristic { GoalCompletion, Uniqueness };

const char* to_string(Heuristic h);
/// "gc" or "uniq".
Heuristic parse_heuristic(const std::string& text);

struct AchievementRecord {
  FactSet definite;
  FactSet possible;
  FactSet overlooked;

  std::size_t size() const { return definite.size() + possible.size() + overlooked.size(); }
  const FactSet& of(LandmarkKind kind) const;
  FactSet& of(LandmarkKind kind);
};

/// Landmarks of `landmarks` that hold in `init`.
AchievementRecord initial_record(const LandmarkSet& landmarks, const FactSet& init);

/// Adds every landmark in pre ∪ add ∪ poss_add of `observation`.
AchievementRecord mark_achieved(AchievementRecord record, const LandmarkSet& landmarks,
                                const GroundAction& observation);

/// Achieved landmarks over all landmarks; 0 when there are none.
Rational h_gc(const LandmarkSet& landmarks, const AchievementRecord& record);

/// Inverse landmark frequency across the hypotheses, kept per landmark kind.
class UniquenessTable {
 public:
  UniquenessTable() = default;
  explicit UniquenessTable(const std::vector<LandmarkSet>& all_landmarks);

  /// 1 / (number of hypotheses whose `kind` set contains `f`). Throws
  /// std::out_of_range for facts in no set of that kind.
  const Rational& value(FactId f, LandmarkKind kind) const;
  bool has(FactId f, LandmarkKind kind) const;

  /// Every value multiplied by `factor`.
  UniquenessTable scaled(const Rational& factor) const;

 private:
  std::array<std::unordered_map<FactId, Rational>, 3> values_;
};

/// Sum of uniqueness over achieved landmarks divided by the sum over all
/// landmarks; 0 when there are none.
Rational h_uniq(const LandmarkSet& landmarks, const AchievementRecord& record, const UniquenessTable& table);

struct RecognizerOptions {
  OverlookedOptions overlooked;
};

/// Incremental recognizer: landmarks are extracted on construction and every
/// observe() call updates achievements and overlooked landmarks.
class Recognizer {
 public:
  Recognizer(const GroundedTask& task, std::vector<FactSet> hypotheses, RecognizerOptions options = {},
             Deadline deadline = {});

  void observe(ActionId observation);

  std::size_t num_hypotheses() const { return hypotheses_.size(); }
  const FactSet& hypothesis(std::size_t i) const { return hypotheses_[i]; }
  const LandmarkSet& landmarks(std::size_t i) const { return landmarks_[i]; }
  const AchievementRecord& record(std::size_t i) const { return records_[i]; }
  /// False when the hypothesis is optimistically unreachable.
  bool reachable(std::size_t i) const { return reachable_[i]; }
  std::size_t observations_seen() const { return observed_.size(); }

  /// Recomputed only after an overlooked set changed.
  const UniquenessTable& uniqueness();
  Rational score(std::size_t i, Heuristic heuristic);
  std::vector<Rational> scores(Heuristic heuristic);

 private:
  const GroundedTask& task_;
  std::vector<FactSet> hypotheses_;
  RecognizerOptions options_;
  Deadline deadline_;
  std::vector<LandmarkSet> landmarks_;
  std::vector<AchievementRecord> records_;
  std::vector<bool> reachable_;
  std::vector<ActionId> observed_;
  std::unordered_map<FactId, std::vector<ActionId>> observed_achievers_;
  UniquenessTable table_;
  bool table_stale_ = true;
};

/// Indices attaining the maximum score; every index when all scores are 0.
std::vector<std::size_t> argmax_set(const std::vector<Rational>& scores);

struct HypothesisReport {
  std::string goal;
  Rational score;
  bool reachable = true;
  std::size_t definite = 0, possible = 0, overlooked = 0;
  std::size_t achieved_definite = 0, achieved_possible = 0, achieved_overlooked = 0;
};

struct RecognitionResult {
  Heuristic heuristic = Heuristic::GoalCompletion;
  std::vector<HypothesisReport> hypotheses;
  /// Indices of the top-scoring hypotheses, ordered by goal text.
  std::vector<std::size_t> top;
  std::optional<std::size_t> hidden_goal;
  std::size_t observations = 0;
  std::vector<std::string> warnings;
  double duration_seconds = 0.0;

  bool correct() const;
};

struct RecognizeOptions {
  RecognizerOptions recognizer;
  /// Replay the observations optimistically and report inapplicable steps.
  bool check_trace = false;
  Deadline deadline;
};

/// Grounds the problem, extracts landmarks per hypothesis, consumes the
/// observations in order, and ranks the hypotheses.
RecognitionResult recognize(const RecognitionProblem& problem, Heuristic heuristic, const RecognizeOptions& options = {});

/// Same pipeline over an already grounded task.
RecognitionResult recognize(const GroundedTask& task, const std::vector<Goal>& hypotheses,
                            const std::vector<ActionId>& observations, Heuristic heuristic,
                            const RecognizeOptions& options = {});

nlohmann::json to_json(const RecognitionResult& result);

}  // namespace goalrec
