#include "goalrec/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "goalrec/pddl.hpp"

namespace goalrec {

namespace fs = std::filesystem;

ExperimentRecord make_record(const RecognitionResult& result) {
  ExperimentRecord r;
  r.heuristic = result.heuristic;
  r.duration = result.duration_seconds;
  r.hypotheses = result.hypotheses.size();
  r.spread = result.top.size();
  r.correct = result.correct();
  r.tp = r.correct ? 1 : 0;
  r.fn = result.hidden_goal && !r.correct ? 1 : 0;
  r.fp = r.spread - r.tp;
  r.tn = r.hypotheses - r.spread - r.fn;
  return r;
}

std::vector<std::string> corpus_entries(const fs::path& root) {
  std::vector<std::string> entries;
  fs::path manifest = root / "manifest.txt";
  if (fs::exists(manifest)) {
    std::istringstream in(read_file(manifest.string()));
    std::string line;
    while (std::getline(in, line)) {
      line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
      if (!line.empty() && line[0] != '#') entries.push_back(line);
    }
    return entries;
  }
  for (const auto& item : fs::recursive_directory_iterator(root)) {
    if (item.is_regular_file() && item.path().filename() == "hyps.dat") {
      entries.push_back(fs::relative(item.path().parent_path(), root).generic_string());
    }
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

namespace {

struct Job {
  std::string entry;
  int observability;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

int to_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
  return value;
}

double to_double(const std::string& text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

}  // namespace

CorpusRun run_corpus(const fs::path& root, const CorpusOptions& options) {
  CorpusRun run;
  std::vector<Job> jobs;
  for (const auto& entry : corpus_entries(root)) {
    fs::path dir = root / entry;
    std::vector<int> levels;
    if (fs::is_directory(dir)) {
      for (const auto& sub : fs::directory_iterator(dir)) {
        if (!sub.is_directory() || !fs::exists(sub.path() / "obs.dat")) continue;
        try {
          levels.push_back(to_int(sub.path().filename().string()));
        } catch (const std::invalid_argument&) {
        }
      }
    }
    if (levels.empty()) {
      run.diagnostics.push_back(entry + ": no observation levels found");
      continue;
    }
    std::sort(levels.begin(), levels.end());
    for (int level : levels) jobs.push_back({entry, level});
  }

  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t j = next++;
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      auto parts = split(job.entry, '/');
      fs::path dir = root / job.entry;
      ExperimentRecord base;
      try {
        if (parts.size() < 4) throw std::invalid_argument("expected <domain>/<percent>/<variant>/<problem>");
        base.domain = parts[parts.size() - 4];
        base.percent = to_int(parts[parts.size() - 3]);
        base.variant = parts[parts.size() - 2];
        base.problem = parts.back();
        base.observability = job.observability;
        std::string domain_text = read_file((dir / "domain.pddl").string());
        std::string problem_text = read_file((dir / "template.pddl").string());
        std::string hyps_text = read_file((dir / "hyps.dat").string());
        std::string real_text = read_file((dir / "real_hyp.dat").string());
        std::string obs_text = read_file((dir / std::to_string(job.observability) / "obs.dat").string());
        RecognitionProblem problem = load_recognition_problem(domain_text, problem_text, hyps_text, obs_text, real_text);

        for (Heuristic h : options.heuristics) {
          ExperimentRecord record = base;
          record.heuristic = h;
          record.hypotheses = problem.hypotheses.size();
          RecognizeOptions ro;
          ro.recognizer = options.recognizer;
          ro.deadline = Deadline::after_seconds(options.timeout_seconds);
          auto start = std::chrono::steady_clock::now();
          try {
            RecognitionResult result = recognize(problem, h, ro);
            ExperimentRecord filled = make_record(result);
            record.duration = filled.duration;
            record.correct = filled.correct;
            record.spread = filled.spread;
            record.tp = filled.tp;
            record.fp = filled.fp;
            record.tn = filled.tn;
            record.fn = filled.fn;
          } catch (const TimeoutError&) {
            record.timed_out = true;
            record.duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          }
          std::lock_guard lock(mutex);
          run.records.push_back(std::move(record));
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(mutex);
        run.diagnostics.push_back(job.entry + " [obs " + std::to_string(job.observability) + "]: " + e.what());
      }
    }
  };

  unsigned n_workers = std::max(1u, options.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (unsigned i = 0; i < n_workers; ++i) threads.emplace_back(worker);
  }

  auto key = [](const ExperimentRecord& r) {
    return std::tie(r.domain, r.percent, r.variant, r.problem, r.observability, r.heuristic);
  };
  std::sort(run.records.begin(), run.records.end(),
            [&](const ExperimentRecord& a, const ExperimentRecord& b) { return key(a) < key(b); });
  std::sort(run.diagnostics.begin(), run.diagnostics.end());
  return run;
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records, bool merge_variants) {
  using Key = std::tuple<std::string, int, std::string, int, std::string>;
  struct Acc {
    std::size_t n = 0, timeouts = 0, correct = 0, spread = 0;
    double time = 0.0;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : records) {
    Key k{r.domain, r.percent, merge_variants ? std::string("all") : r.variant, r.observability, to_string(r.heuristic)};
    Acc& acc = groups[k];
    if (r.timed_out) {
      ++acc.timeouts;
      continue;
    }
    ++acc.n;
    acc.time += r.duration;
    acc.correct += r.correct ? 1 : 0;
    acc.spread += r.spread;
  }
  std::vector<AggregateRow> rows;
  for (const auto& [k, acc] : groups) {
    AggregateRow row;
    std::tie(row.domain, row.percent, row.variant, row.observability, row.heuristic) = k;
    row.n = acc.n;
    row.timeouts = acc.timeouts;
    if (acc.n > 0) {
      double n = static_cast<double>(acc.n);
      row.time_mean = acc.time / n;
      row.acc = 100.0 * static_cast<double>(acc.correct) / n;
      row.spread = static_cast<double>(acc.spread) / n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "domain,percent,variant,observability,heuristic,n,time_mean,acc,spread,timeouts\n";
  for (const auto& r : rows) {
    out += r.domain + "," + std::to_string(r.percent) + "," + r.variant + "," + std::to_string(r.observability) + "," +
           r.heuristic + "," + std::to_string(r.n) + "," + format_double(r.time_mean) + "," + format_double(r.acc) +
           "," + format_double(r.spread) + "," + std::to_string(r.timeouts) + "\n";
  }
  return out;
}

std::vector<AggregateRow> parse_aggregate_csv(const std::string& text) {
  std::vector<AggregateRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 10) throw std::invalid_argument("expected 10 CSV fields, got " + std::to_string(f.size()));
    AggregateRow r;
    r.domain = f[0];
    r.percent = to_int(f[1]);
    r.variant = f[2];
    r.observability = to_int(f[3]);
    r.heuristic = f[4];
    r.n = static_cast<std::size_t>(to_int(f[5]));
    r.time_mean = to_double(f[6]);
    r.acc = to_double(f[7]);
    r.spread = to_double(f[8]);
    r.timeouts = static_cast<std::size_t>(to_int(f[9]));
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

RocPoint finish(RocPoint p) {
  p.tpr = p.tp + p.fn == 0 ? 0.0 : static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fn);
  p.fpr = p.fp + p.tn == 0 ? 0.0 : static_cast<double>(p.fp) / static_cast<double>(p.fp + p.tn);
  return p;
}

}  // namespace

std::vector<RocPoint> roc_points(const std::vector<ExperimentRecord>& records, RocGranularity granularity) {
  std::vector<RocPoint> out;
  if (granularity == RocGranularity::Problem) {
    for (const auto& r : records) {
      if (r.timed_out) continue;
      RocPoint p;
      p.group = r.domain + "/" + std::to_string(r.percent) + "/" + r.variant + "/" + r.problem + "/" +
                std::to_string(r.observability) + "/" + to_string(r.heuristic);
      p.tp = r.tp;
      p.fp = r.fp;
      p.tn = r.tn;
      p.fn = r.fn;
      out.push_back(finish(std::move(p)));
    }
    return out;
  }
  std::map<std::tuple<std::string, int, int, Heuristic>, RocPoint> groups;
  for (const auto& r : records) {
    if (r.timed_out) continue;
    RocPoint& p = groups[{r.domain, r.percent, r.observability, r.heuristic}];
    p.group = r.domain + "/" + std::to_string(r.percent) + "/" + std::to_string(r.observability) + "/" +
              to_string(r.heuristic);
    p.tp += r.tp;
    p.fp += r.fp;
    p.tn += r.tn;
    p.fn += r.fn;
  }
  for (auto& [k, p] : groups) out.push_back(finish(std::move(p)));
  return out;
}

std::string roc_csv(const std::vector<RocPoint>& points) {
  std::string out = "group,tp,fp,tn,fn,tpr,fpr\n";
  for (const auto& p : points) {
    out += p.group + "," + std::to_string(p.tp) + "," + std::to_string(p.fp) + "," + std::to_string(p.tn) + "," +
           std::to_string(p.fn) + "," + format_double(p.tpr) + "," + format_double(p.fpr) + "\n";
  }
  return out;
}

}  // namespace goalrec
