#pragma once

// Batch evaluation over a corpus laid out as
//
//   <root>/manifest.txt                      one entry per line (optional)
//   <root>/<domain>/<percent>/<variant>/<problem>/
//       domain.pddl template.pddl hyps.dat real_hyp.dat
//       <observability>/obs.dat              for each observability level
//
// Each (problem, observability, heuristic) run becomes an ExperimentRecord;
// records aggregate into Time / Acc / Spread rows and ROC-space points.

#include <filesystem>
#include <string>
#include <vector>

#include "goalrec/recognition.hpp"

namespace goalrec {

struct ExperimentRecord {
  std::string domain;
  int percent = 0;
  std::string variant;
  int observability = 100;
  Heuristic heuristic = Heuristic::GoalCompletion;
  std::string problem;
  double duration = 0.0;
  bool timed_out = false;
  bool correct = false;
  std::size_t hypotheses = 0;
  std::size_t spread = 0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Fills correct/spread/confusion counts from a finished recognition.
ExperimentRecord make_record(const RecognitionResult& result);

struct CorpusOptions {
  std::vector<Heuristic> heuristics = {Heuristic::GoalCompletion, Heuristic::Uniqueness};
  double timeout_seconds = 120.0;
  unsigned workers = 1;
  RecognizerOptions recognizer;
};

struct CorpusRun {
  std::vector<ExperimentRecord> records;
  /// Skipped entries: "<entry>: <reason>".
  std::vector<std::string> diagnostics;
};

/// Entries from manifest.txt, or every problem directory found under `root`.
std::vector<std::string> corpus_entries(const std::filesystem::path& root);

/// Runs every entry at every observability level present. Records come back
/// sorted by (domain, percent, variant, problem, observability, heuristic).
CorpusRun run_corpus(const std::filesystem::path& root, const CorpusOptions& options);

struct AggregateRow {
  std::string domain;
  int percent = 0;
  std::string variant;
  int observability = 0;
  std::string heuristic;
  std::size_t n = 0;  // completed runs
  double time_mean = 0.0;
  double acc = 0.0;  // percent
  double spread = 0.0;
  std::size_t timeouts = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

/// Groups by (domain, percent, variant, observability, heuristic); timeouts
/// are counted but excluded from the means. With `merge_variants` the
/// variant key becomes "all".
std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records, bool merge_variants = false);

std::string aggregate_csv(const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> parse_aggregate_csv(const std::string& text);

enum class RocGranularity { Prediction, Problem };

struct RocPoint {
  std::string group;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double tpr = 0.0;
  double fpr = 0.0;
};

/// Per-prediction: confusion counts summed within each
/// (domain, percent, observability, heuristic) group. Per-problem: one point per
/// completed record. Timed-out runs are skipped.
std::vector<RocPoint> roc_points(const std::vector<ExperimentRecord>& records,
                                 RocGranularity granularity = RocGranularity::Prediction);

std::string roc_csv(const std::vector<RocPoint>& points);

/// Shortest round-trip decimal text for a double.
std::string format_double(double value);

}  // namespace goalrec
