#include "goalrec/recognition.hpp"

#include <algorithm>
#include <chrono>

#include "goalrec/orpg.hpp"
#include "goalrec/pddl.hpp"

namespace goalrec {

namespace {

constexpr std::array<LandmarkKind, 3> kKinds = {LandmarkKind::Definite, LandmarkKind::Possible,
                                                LandmarkKind::Overlooked};

void insert_sorted(FactSet& set, FactId f) {
  auto it = std::lower_bound(set.begin(), set.end(), f);
  if (it == set.end() || *it != f) set.insert(it, f);
}

}  // namespace

const char* to_string(Heuristic h) { return h == Heuristic::GoalCompletion ? "gc" : "uniq"; }

Heuristic parse_heuristic(const std::string& text) {
  if (text == "gc") return Heuristic::GoalCompletion;
  if (text == "uniq") return Heuristic::Uniqueness;
  throw std::invalid_argument("unknown heuristic '" + text + "' (expected gc or uniq)");
}

const FactSet& AchievementRecord::of(LandmarkKind kind) const {
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

FactSet& AchievementRecord::of(LandmarkKind kind) { return const_cast<FactSet&>(std::as_const(*this).of(kind)); }

AchievementRecord initial_record(const LandmarkSet& landmarks, const FactSet& init) {
  AchievementRecord record;
  for (LandmarkKind kind : kKinds) {
    const auto& set = landmarks.of(kind);
    std::set_intersection(set.begin(), set.end(), init.begin(), init.end(), std::back_inserter(record.of(kind)));
  }
  return record;
}

AchievementRecord mark_achieved(AchievementRecord record, const LandmarkSet& landmarks,
                                const GroundAction& observation) {
  for (const FactSet* evidence : {&observation.pre, &observation.add, &observation.poss_add}) {
    for (FactId f : *evidence) {
      for (LandmarkKind kind : kKinds) {
        if (contains(landmarks.of(kind), f)) insert_sorted(record.of(kind), f);
      }
    }
  }
  return record;
}

Rational h_gc(const LandmarkSet& landmarks, const AchievementRecord& record) {
  if (landmarks.size() == 0) return Rational(0);
  return Rational(static_cast<long long>(record.size()), static_cast<long long>(landmarks.size()));
}

UniquenessTable::UniquenessTable(const std::vector<LandmarkSet>& all_landmarks) {
  std::array<std::unordered_map<FactId, long long>, 3> counts;
  for (const auto& set : all_landmarks) {
    for (std::size_t k = 0; k < kKinds.size(); ++k) {
      for (FactId f : set.of(kKinds[k])) ++counts[k][f];
    }
  }
  for (std::size_t k = 0; k < kKinds.size(); ++k) {
    for (const auto& [f, n] : counts[k]) values_[k].emplace(f, Rational(1, n));
  }
}

const Rational& UniquenessTable::value(FactId f, LandmarkKind kind) const {
  return values_[static_cast<std::size_t>(kind)].at(f);
}

bool UniquenessTable::has(FactId f, LandmarkKind kind) const {
  return values_[static_cast<std::size_t>(kind)].count(f) != 0;
}

UniquenessTable UniquenessTable::scaled(const Rational& factor) const {
  UniquenessTable out = *this;
  for (auto& table : out.values_) {
    for (auto& [f, v] : table) v *= factor;
  }
  return out;
}

Rational h_uniq(const LandmarkSet& landmarks, const AchievementRecord& record, const UniquenessTable& table) {
  Rational achieved = 0;
  Rational total = 0;
  for (LandmarkKind kind : kKinds) {
    for (FactId f : landmarks.of(kind)) total += table.value(f, kind);
    for (FactId f : record.of(kind)) achieved += table.value(f, kind);
  }
  if (total == 0) return Rational(0);
  return achieved / total;
}

Recognizer::Recognizer(const GroundedTask& task, std::vector<FactSet> hypotheses, RecognizerOptions options,
                       Deadline deadline)
    : task_(task), hypotheses_(std::move(hypotheses)), options_(options), deadline_(deadline) {
  for (const auto& goal : hypotheses_) {
    LandmarkSet set;
    bool ok = true;
    try {
      set = extract_landmarks(task_, goal, deadline_);
    } catch (const GoalUnreachable&) {
      ok = false;
    }
    records_.push_back(initial_record(set, task_.init()));
    landmarks_.push_back(std::move(set));
    reachable_.push_back(ok);
  }
}

void Recognizer::observe(ActionId observation) {
  deadline_.check();
  observed_.push_back(observation);
  const auto& action = task_.action(observation);
  for (std::size_t i = 0; i < hypotheses_.size(); ++i) {
    records_[i] = mark_achieved(std::move(records_[i]), landmarks_[i], action);
  }

  // Only facts produced by this observation gained an observed achiever, so
  // only they can change their overlooked status.
  for (const FactSet* effects : {&action.add, &action.poss_add}) {
    for (FactId f : *effects) {
      auto& achievers = observed_achievers_[f];
      if (std::find(achievers.begin(), achievers.end(), observation) == achievers.end()) {
        achievers.push_back(observation);
      }
      std::span<const ActionId> removed = options_.overlooked.exclude_all_achievers
                                              ? std::span<const ActionId>(task_.adders(f))
                                              : std::span<const ActionId>(achievers);
      for (std::size_t i = 0; i < hypotheses_.size(); ++i) {
        if (!reachable_[i] || landmarks_[i].contains(f)) continue;
        if (severs_goal(task_, hypotheses_[i], removed, deadline_)) {
          insert_sorted(landmarks_[i].overlooked, f);
          insert_sorted(records_[i].overlooked, f);
          table_stale_ = true;
        }
      }
    }
  }
}

const UniquenessTable& Recognizer::uniqueness() {
  if (table_stale_) {
    table_ = UniquenessTable(landmarks_);
    table_stale_ = false;
  }
  return table_;
}

Rational Recognizer::score(std::size_t i, Heuristic heuristic) {
  if (heuristic == Heuristic::GoalCompletion) return h_gc(landmarks_[i], records_[i]);
  return h_uniq(landmarks_[i], records_[i], uniqueness());
}

std::vector<Rational> Recognizer::scores(Heuristic heuristic) {
  std::vector<Rational> out;
  out.reserve(hypotheses_.size());
  for (std::size_t i = 0; i < hypotheses_.size(); ++i) out.push_back(score(i, heuristic));
  return out;
}

std::vector<std::size_t> argmax_set(const std::vector<Rational>& scores) {
  std::vector<std::size_t> out;
  if (scores.empty()) return out;
  Rational best = *std::max_element(scores.begin(), scores.end());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == best) out.push_back(i);
  }
  return out;
}

bool RecognitionResult::correct() const {
  return hidden_goal && std::find(top.begin(), top.end(), *hidden_goal) != top.end();
}

RecognitionResult recognize(const GroundedTask& task, const std::vector<Goal>& hypotheses,
                            const std::vector<ActionId>& observations, Heuristic heuristic,
                            const RecognizeOptions& options) {
  auto start = std::chrono::steady_clock::now();
  std::vector<FactSet> goals;
  goals.reserve(hypotheses.size());
  for (const auto& g : hypotheses) goals.push_back(task.to_fact_set(g));

  RecognitionResult result;
  result.heuristic = heuristic;
  result.observations = observations.size();
  if (options.check_trace) result.warnings = replay_optimistic(task, task.init(), observations).warnings;

  Recognizer recognizer(task, std::move(goals), options.recognizer, options.deadline);
  for (ActionId o : observations) recognizer.observe(o);
  auto scores = recognizer.scores(heuristic);

  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    HypothesisReport report;
    report.goal = goal_to_string(hypotheses[i]);
    report.score = scores[i];
    report.reachable = recognizer.reachable(i);
    const auto& lm = recognizer.landmarks(i);
    const auto& rec = recognizer.record(i);
    report.definite = lm.definite.size();
    report.possible = lm.possible.size();
    report.overlooked = lm.overlooked.size();
    report.achieved_definite = rec.definite.size();
    report.achieved_possible = rec.possible.size();
    report.achieved_overlooked = rec.overlooked.size();
    result.hypotheses.push_back(std::move(report));
  }
  result.top = argmax_set(scores);
  std::stable_sort(result.top.begin(), result.top.end(), [&](std::size_t a, std::size_t b) {
    return result.hypotheses[a].goal < result.hypotheses[b].goal;
  });
  result.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

RecognitionResult recognize(const RecognitionProblem& problem, Heuristic heuristic, const RecognizeOptions& options) {
  auto start = std::chrono::steady_clock::now();
  GroundedTask task = ground(problem.domain, problem.objects, problem.init, options.deadline);
  auto observations = resolve_observations(problem.observations, task);
  RecognitionResult result = recognize(task, problem.hypotheses, observations, heuristic, options);
  result.hidden_goal = problem.hidden_goal;
  result.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

nlohmann::json to_json(const RecognitionResult& result) {
  using nlohmann::json;
  json hyps = json::array();
  for (const auto& h : result.hypotheses) {
    hyps.push_back({
        {"goal", h.goal},
        {"score", static_cast<double>(h.score)},
        {"score_exact", h.score.str()},
        {"reachable", h.reachable},
        {"landmarks", {{"definite", h.definite}, {"possible", h.possible}, {"overlooked", h.overlooked}}},
        {"achieved",
         {{"definite", h.achieved_definite}, {"possible", h.achieved_possible}, {"overlooked", h.achieved_overlooked}}},
    });
  }
  json top = json::array();
  for (std::size_t i : result.top) top.push_back(result.hypotheses[i].goal);
  json out = {
      {"heuristic", to_string(result.heuristic)},
      {"hypotheses", hyps},
      {"top", top},
      {"top_indices", result.top},
      {"observations", result.observations},
      {"duration_seconds", result.duration_seconds},
  };
  if (result.hidden_goal) {
    out["hidden_goal"] = *result.hidden_goal;
    out["correct"] = result.correct();
  }
  if (!result.warnings.empty()) out["warnings"] = result.warnings;
  return out;
}

}  // namespace goalrec
