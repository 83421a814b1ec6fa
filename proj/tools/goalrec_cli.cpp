// goalrec: goal recognition over incomplete STRIPS domain models.
//
//   goalrec recognize -d dom.pddl -p prob.pddl -g hyps.dat -o trace.obs --heuristic gc
//   goalrec landmarks -d dom.pddl -p prob.pddl -g hyps.dat [-o trace.obs]
//   goalrec inspect   -d dom.pddl -p prob.pddl [--dump-ground] [--dump-orpg]
//   goalrec completions -d dom.pddl [-p prob.pddl --ground]
//   goalrec degrade   -d dom.pddl --percent 40 --seed 7 --variant s123 -o out.pddl
//   goalrec degrade-suite -d dom.pddl --percents 20,40,60,80 --seed 7 --out-dir DIR
//   goalrec gen-corpus --out DIR --problems 30
//   goalrec bench     --corpus DIR --heuristic gc,uniq --workers N --timeout 120 --csv out.csv --roc roc.csv

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "goalrec/blocks.hpp"
#include "goalrec/degrade.hpp"
#include "goalrec/eval.hpp"
#include "goalrec/grounding.hpp"
#include "goalrec/landmarks.hpp"
#include "goalrec/orpg.hpp"
#include "goalrec/pddl.hpp"
#include "goalrec/recognition.hpp"

using namespace goalrec;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct ProblemFiles {
  std::string domain, problem, hypotheses, observations, hidden;
};

RecognitionProblem load(const ProblemFiles& f) {
  return load_recognition_problem(read_file(f.domain), read_file(f.problem), read_file(f.hypotheses),
                                  f.observations.empty() ? std::string() : read_file(f.observations),
                                  f.hidden.empty() ? std::string() : read_file(f.hidden));
}

void print_set(const GroundedTask& task, char tag, const FactSet& set) {
  std::vector<std::string> names;
  for (FactId f : set) names.push_back(to_string(task.fact(f)));
  std::sort(names.begin(), names.end());
  for (const auto& n : names) std::cout << tag << ' ' << n << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal recognition in incomplete STRIPS domains"};
  app.require_subcommand(1);

  ProblemFiles files;
  std::string heuristic = "gc";
  bool strict_overlooked = false;
  bool check_trace = false;
  auto* rec = app.add_subcommand("recognize", "Rank candidate goals against an observation trace (JSON output)");
  rec->add_option("-d,--domain", files.domain, "Domain file")->required();
  rec->add_option("-p,--problem", files.problem, "Problem file")->required();
  rec->add_option("-g,--hypotheses", files.hypotheses, "Hypotheses file")->required();
  rec->add_option("-o,--observations", files.observations, "Observation file")->required();
  rec->add_option("-r,--real-goal", files.hidden, "File holding the hidden goal");
  rec->add_option("--heuristic", heuristic, "gc or uniq")->check(CLI::IsMember({"gc", "uniq"}));
  rec->add_flag("--exclude-all-achievers", strict_overlooked,
                "Overlooked check removes every achiever, not only observed ones");
  rec->add_flag("--check-trace", check_trace, "Report observations whose known preconditions do not hold");

  auto* lm = app.add_subcommand("landmarks", "Print definite (D), possible (P) and overlooked (O) landmarks");
  lm->add_option("-d,--domain", files.domain, "Domain file")->required();
  lm->add_option("-p,--problem", files.problem, "Problem file")->required();
  lm->add_option("-g,--hypotheses", files.hypotheses, "Hypotheses file")->required();
  lm->add_option("-o,--observations", files.observations, "Observation file (enables overlooked landmarks)");
  lm->add_flag("--exclude-all-achievers", strict_overlooked, "Stricter overlooked check");

  bool dump_ground_flag = false, dump_orpg_flag = false;
  auto* inspect = app.add_subcommand("inspect", "Ground a problem and print statistics or dumps");
  inspect->add_option("-d,--domain", files.domain, "Domain file")->required();
  inspect->add_option("-p,--problem", files.problem, "Problem file")->required();
  inspect->add_flag("--dump-ground", dump_ground_flag, "Print ground facts and actions");
  inspect->add_flag("--dump-orpg", dump_orpg_flag, "Print ORPG fact and action levels");

  bool grounded_count = false;
  auto* comp = app.add_subcommand("completions", "Count possible annotations K and completions 2^K");
  comp->add_option("-d,--domain", files.domain, "Domain file")->required();
  comp->add_option("-p,--problem", files.problem, "Problem file (for --ground)");
  comp->add_flag("--ground", grounded_count, "Count over ground actions instead of lifted operators");

  int percent = 20;
  std::uint64_t seed = 0;
  std::string variant = "s1";
  std::string output;
  auto* deg = app.add_subcommand("degrade", "Produce one incomplete domain");
  deg->add_option("-d,--domain", files.domain, "Complete domain file")->required();
  deg->add_option("--percent", percent, "Incompleteness percent")->check(CLI::Range(0, 100));
  deg->add_option("--seed", seed, "Random seed");
  deg->add_option("--variant", variant, "s1, s12 or s123")->check(CLI::IsMember({"s1", "s12", "s123"}));
  deg->add_option("-o,--output", output, "Output file (stdout when omitted)");

  std::string percents = "20,40,60,80";
  std::string out_dir;
  int draws = 1;
  auto* suite = app.add_subcommand("degrade-suite", "Produce every (percent, variant) incomplete domain");
  suite->add_option("-d,--domain", files.domain, "Complete domain file")->required();
  suite->add_option("--percents", percents, "Comma-separated percents");
  suite->add_option("--seed", seed, "Random seed");
  suite->add_option("--draws", draws, "Seeded draws per (percent, variant)");
  suite->add_option("--out-dir", out_dir, "Output directory")->required();

  blocks::CorpusSpec corpus_spec;
  std::string corpus_percents = "20,80", corpus_variants = "s1";
  auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic blocksworld recognition corpus");
  gen->add_option("--out", out_dir, "Corpus root")->required();
  gen->add_option("--problems", corpus_spec.problems, "Number of problems");
  gen->add_option("--min-blocks", corpus_spec.min_blocks);
  gen->add_option("--max-blocks", corpus_spec.max_blocks);
  gen->add_option("--min-hypotheses", corpus_spec.min_hypotheses);
  gen->add_option("--max-hypotheses", corpus_spec.max_hypotheses);
  gen->add_option("--percents", corpus_percents, "Comma-separated incompleteness percents");
  gen->add_option("--variants", corpus_variants, "Comma-separated variants");
  gen->add_option("--seed", corpus_spec.seed, "Random seed");

  std::string corpus, heuristics = "gc,uniq", csv, roc;
  unsigned workers = 1;
  double timeout = 120.0;
  bool merge_variants = false, roc_per_problem = false;
  auto* bench = app.add_subcommand("bench", "Run a corpus and report Time/Acc/Spread and ROC points");
  bench->add_option("--corpus", corpus, "Corpus root")->required();
  bench->add_option("--heuristic", heuristics, "Comma-separated heuristics");
  bench->add_option("--workers", workers, "Parallel workers");
  bench->add_option("--timeout", timeout, "Per-problem time limit in seconds");
  bench->add_option("--csv", csv, "Aggregate CSV output (stdout when omitted)");
  bench->add_option("--roc", roc, "ROC CSV output");
  bench->add_flag("--merge-variants", merge_variants, "Average the variants of each percent together");
  bench->add_flag("--roc-per-problem", roc_per_problem, "One ROC point per problem instead of per group");
  bench->add_flag("--exclude-all-achievers", strict_overlooked, "Stricter overlooked check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rec) {
      RecognizeOptions options;
      options.recognizer.overlooked.exclude_all_achievers = strict_overlooked;
      options.check_trace = check_trace;
      auto result = recognize(load(files), parse_heuristic(heuristic), options);
      std::cout << to_json(result).dump(2) << '\n';
    } else if (*lm) {
      auto problem = load(files);
      auto task = ground(problem.domain, problem.objects, problem.init);
      std::vector<FactSet> goals;
      for (const auto& g : problem.hypotheses) goals.push_back(task.to_fact_set(g));
      RecognizerOptions options;
      options.overlooked.exclude_all_achievers = strict_overlooked;
      Recognizer recognizer(task, goals, options);
      for (ActionId o : resolve_observations(problem.observations, task)) recognizer.observe(o);
      for (std::size_t i = 0; i < goals.size(); ++i) {
        std::cout << "# " << goal_to_string(problem.hypotheses[i])
                  << (recognizer.reachable(i) ? "" : " (unreachable)") << '\n';
        const auto& set = recognizer.landmarks(i);
        print_set(task, 'D', set.definite);
        print_set(task, 'P', set.possible);
        print_set(task, 'O', set.overlooked);
      }
    } else if (*inspect) {
      auto domain = parse_domain(read_file(files.domain));
      auto problem = parse_problem(read_file(files.problem), domain);
      auto task = ground(domain, problem.objects, problem.init);
      if (dump_ground_flag) std::cout << dump_ground(task);
      if (dump_orpg_flag) std::cout << dump_orpg(task, build_orpg(task, task.init()));
      if (!dump_ground_flag && !dump_orpg_flag) {
        auto orpg = build_orpg(task, task.init());
        std::cout << "facts\t" << task.num_facts() << "\nactions\t" << task.num_actions() << "\norpg_levels\t"
                  << orpg.max_level() << '\n';
      }
    } else if (*comp) {
      auto domain = parse_domain(read_file(files.domain));
      CompletionCount count;
      if (grounded_count) {
        if (files.problem.empty()) throw std::invalid_argument("--ground requires --problem");
        auto problem = parse_problem(read_file(files.problem), domain);
        count = count_completions(ground(domain, problem.objects, problem.init));
      } else {
        count = count_completions(domain);
      }
      std::cout << "k\t" << count.k << "\ncompletions\t" << count.completions << '\n';
    } else if (*deg) {
      auto domain = parse_domain(read_file(files.domain));
      auto text = serialize_domain(degrade(domain, DegradeSpec{percent, seed, parse_variant(variant)}));
      if (output.empty()) {
        std::cout << text;
      } else {
        write_file(output, text);
      }
    } else if (*suite) {
      auto domain = parse_domain(read_file(files.domain));
      std::vector<int> ps;
      for (const auto& p : split_list(percents)) ps.push_back(std::stoi(p));
      for (const auto& path : degrade_suite(domain, seed, ps, out_dir, draws)) std::cout << path.string() << '\n';
    } else if (*gen) {
      corpus_spec.percents.clear();
      for (const auto& p : split_list(corpus_percents)) corpus_spec.percents.push_back(std::stoi(p));
      corpus_spec.variants.clear();
      for (const auto& v : split_list(corpus_variants)) corpus_spec.variants.push_back(parse_variant(v));
      auto entries = blocks::write_corpus(out_dir, corpus_spec);
      std::cout << "wrote " << entries.size() << " entries to " << out_dir << '\n';
    } else if (*bench) {
      CorpusOptions options;
      options.heuristics.clear();
      for (const auto& h : split_list(heuristics)) options.heuristics.push_back(parse_heuristic(h));
      options.workers = workers;
      options.timeout_seconds = timeout;
      options.recognizer.overlooked.exclude_all_achievers = strict_overlooked;
      auto run = run_corpus(corpus, options);
      for (const auto& d : run.diagnostics) std::cerr << "skipped " << d << '\n';
      auto table = aggregate_csv(aggregate(run.records, merge_variants));
      if (csv.empty()) {
        std::cout << table;
      } else {
        write_file(csv, table);
      }
      if (!roc.empty()) {
        write_file(roc, roc_csv(roc_points(run.records, roc_per_problem ? RocGranularity::Problem
                                                                        : RocGranularity::Prediction)));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
