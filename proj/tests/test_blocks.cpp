#include <doctest.h>

#include <deque>
#include <filesystem>
#include <map>
#include <set>

#include "goalrec/blocks.hpp"
#include "goalrec/eval.hpp"
#include "goalrec/pddl.hpp"
#include "support.hpp"

using namespace goalrec;
using testing::Mask;

namespace {

/// Classical breadth-first distance over fact masks, or -1.
int classical_distance(const GroundedTask& task, Mask init, Mask goal) {
  auto actions = testing::mask_actions(task);
  std::map<Mask, int> dist{{init, 0}};
  std::deque<Mask> open{init};
  while (!open.empty()) {
    Mask s = open.front();
    open.pop_front();
    if ((s & goal) == goal) return dist[s];
    for (const auto& a : actions) {
      if ((s & a.pre) != a.pre) continue;
      Mask n = (s & ~a.del) | a.add;
      if (dist.emplace(n, dist[s] + 1).second) open.push_back(n);
    }
  }
  return -1;
}

FactSet replay_classical(const GroundedTask& task, FactSet s, const std::vector<ActionId>& plan) {
  for (ActionId id : plan) {
    const auto& a = task.action(id);
    REQUIRE(std::includes(s.begin(), s.end(), a.pre.begin(), a.pre.end()));
    FactSet next;
    std::set_difference(s.begin(), s.end(), a.del.begin(), a.del.end(), std::back_inserter(next));
    next.insert(next.end(), a.add.begin(), a.add.end());
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    s = std::move(next);
  }
  return s;
}

}  // namespace

TEST_CASE("block names") {
  CHECK(blocks::block_names(3) == std::vector<std::string>{"a", "b", "c"});
  auto many = blocks::block_names(30);
  CHECK(many[25] == "z");
  CHECK(many[26] == "aa");
  CHECK(std::set<std::string>(many.begin(), many.end()).size() == 30);
}

TEST_CASE("random configurations are legal states") {
  SeededRng rng(6);
  for (int i = 0; i < 200; ++i) {
    auto names = blocks::block_names(1 + rng.below(7));
    auto facts = blocks::configuration_facts(blocks::random_configuration(names, rng));
    std::map<std::string, int> support, above;
    int clear = 0, handempty = 0;
    for (const auto& f : facts) {
      if (f.predicate == "ontable") ++support[f.args[0]];
      if (f.predicate == "on") {
        ++support[f.args[0]];
        ++above[f.args[1]];
      }
      if (f.predicate == "clear") {
        ++clear;
        CHECK(above[f.args[0]] == 0);
      }
      if (f.predicate == "handempty") ++handempty;
    }
    CHECK(handempty == 1);
    for (const auto& b : names) {
      CHECK(support[b] == 1);
      CHECK(above[b] <= 1);
    }
    // One clear block per tower, one ontable block per tower.
    int towers = 0;
    for (const auto& f : facts) towers += f.predicate == "ontable";
    CHECK(clear == towers);
  }
}

TEST_CASE("tower goals") {
  SeededRng rng(2);
  auto names = blocks::block_names(5);
  auto goal = blocks::random_tower_goal(names, 3, rng);
  CHECK(goal.size() == 4);
  CHECK(std::count_if(goal.begin(), goal.end(), [](const Fact& f) { return f.predicate == "on"; }) == 2);
  CHECK(blocks::random_tower_goal(names, 1, rng).size() == 2);
}

TEST_CASE("breadth-first plans are valid and shortest") {
  auto domain = parse_domain(blocks::domain_text());
  SeededRng rng(31);
  for (int i = 0; i < 40; ++i) {
    auto names = blocks::block_names(2 + rng.below(3));
    std::vector<TypedObject> objs;
    for (const auto& b : names) objs.push_back({b, "block"});
    auto init = blocks::configuration_facts(blocks::random_configuration(names, rng));
    auto task = ground(domain, objs, init);
    FactSet goal = task.to_fact_set(blocks::random_tower_goal(names, 1 + rng.below(names.size()), rng));
    auto plan = blocks::bfs_plan(task, goal);
    REQUIRE(plan);
    FactSet end = replay_classical(task, task.init(), *plan);
    CHECK(std::includes(end.begin(), end.end(), goal.begin(), goal.end()));
    CHECK(static_cast<int>(plan->size()) ==
          classical_distance(task, testing::mask_of(task.init()), testing::mask_of(goal)));
  }
}

TEST_CASE("state limit stops the planner") {
  auto domain = parse_domain(blocks::domain_text());
  auto names = blocks::block_names(6);
  std::vector<TypedObject> objs;
  for (const auto& b : names) objs.push_back({b, "block"});
  std::vector<Fact> init;
  for (const auto& b : names) {
    init.push_back({"ontable", {b}});
    init.push_back({"clear", {b}});
  }
  init.push_back({"handempty", {}});
  auto task = ground(domain, objs, init);
  Goal tower{{"on", {"a", "b"}}, {"on", {"b", "c"}}, {"on", {"c", "d"}}, {"on", {"d", "e"}}, {"on", {"e", "f"}}};
  CHECK(!blocks::bfs_plan(task, task.to_fact_set(tower), 5));
  CHECK(blocks::bfs_plan(task, task.to_fact_set(tower))->size() == 10);
}

TEST_CASE("observation sampling") {
  std::vector<ActionId> plan;
  for (std::uint32_t i = 0; i < 10; ++i) plan.push_back(ActionId(i));
  SeededRng rng(1);
  for (int percent : {0, 10, 25, 30, 50, 70, 100}) {
    auto obs = blocks::sample_observations(plan, percent, rng);
    CHECK(obs.size() == std::max<std::size_t>(1, step1_count(percent, plan.size())));
    CHECK(std::is_sorted(obs.begin(), obs.end()));
    CHECK(std::adjacent_find(obs.begin(), obs.end()) == obs.end());
  }
  CHECK(blocks::sample_observations(plan, 100, rng) == plan);
  CHECK(blocks::sample_observations({}, 50, rng).empty());
}

TEST_CASE("random problems carry a plan for the hidden goal") {
  auto domain = parse_domain(blocks::domain_text());
  SeededRng rng(17);
  for (int i = 0; i < 10; ++i) {
    auto p = blocks::random_problem("p", 4, 4, 3, rng);
    CHECK(p.hypotheses.size() == 4);
    CHECK(std::set<Goal>(p.hypotheses.begin(), p.hypotheses.end()).size() == 4);
    REQUIRE(p.hidden < 4);
    auto task = ground(domain, p.instance.objects, p.instance.init);
    auto plan = resolve_observations(p.plan, task);
    CHECK(!plan.empty());
    FactSet goal = task.to_fact_set(p.hypotheses[p.hidden]);
    FactSet end = replay_classical(task, task.init(), plan);
    CHECK(std::includes(end.begin(), end.end(), goal.begin(), goal.end()));
  }
}

TEST_CASE("corpus layout") {
  namespace fs = std::filesystem;
  auto root = fs::temp_directory_path() / "goalrec-blocks-corpus";
  fs::remove_all(root);
  blocks::CorpusSpec spec;
  spec.problems = 2;
  spec.min_blocks = spec.max_blocks = 4;
  spec.min_hypotheses = spec.max_hypotheses = 3;
  spec.percents = {20, 80};
  spec.variants = {DegradeVariant::S1, DegradeVariant::S123};
  spec.observability = {30, 100};
  auto entries = blocks::write_corpus(root, spec);
  CHECK(entries.size() == 8);
  CHECK(entries.front() == "blocks/20/s1/p001");
  CHECK(corpus_entries(root) == entries);
  for (const auto& e : entries) {
    fs::path dir = root / e;
    for (const char* f : {"domain.pddl", "template.pddl", "hyps.dat", "real_hyp.dat", "30/obs.dat", "100/obs.dat"}) {
      CHECK(fs::exists(dir / f));
    }
    auto problem = load_recognition_problem(read_file((dir / "domain.pddl").string()),
                                            read_file((dir / "template.pddl").string()),
                                            read_file((dir / "hyps.dat").string()),
                                            read_file((dir / "100/obs.dat").string()),
                                            read_file((dir / "real_hyp.dat").string()));
    CHECK(problem.hypotheses.size() == 3);
    CHECK(problem.hidden_goal);
    CHECK(!problem.observations.empty());
  }
  // Same seed, same bytes.
  auto again = fs::temp_directory_path() / "goalrec-blocks-corpus-2";
  fs::remove_all(again);
  blocks::write_corpus(again, spec);
  for (const auto& e : entries) {
    CHECK(read_file((root / e / "domain.pddl").string()) == read_file((again / e / "domain.pddl").string()));
    CHECK(read_file((root / e / "30/obs.dat").string()) == read_file((again / e / "30/obs.dat").string()));
  }
  fs::remove_all(root);
  fs::remove_all(again);
}
