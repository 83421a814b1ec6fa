#include <doctest.h>

#include "goalrec/orpg.hpp"
#include "support.hpp"

using namespace goalrec;
using testing::Mask;

TEST_CASE("ORPG of the abstract example") {
  auto ex = testing::example1();
  auto g = build_orpg(ex.task, ex.task.init());
  CHECK(g.fact_level(ex.p) == 0);
  CHECK(g.fact_level(ex.q) == 0);
  CHECK(g.fact_level(ex.r) == 1);
  CHECK(g.fact_level(ex.g) == 2);
  CHECK(g.action_level(ex.a) == 0);
  CHECK(g.action_level(ex.b) == 0);
  CHECK(g.action_level(ex.c) == 1);
  CHECK(g.achievers(ex.r) == std::vector<ActionId>{ex.a, ex.b});
  CHECK(g.first_achievers(ex.r) == std::vector<ActionId>{ex.a, ex.b});
  CHECK(g.achievers(ex.g) == std::vector<ActionId>{ex.c});
  CHECK(g.max_level() == 2);
  CHECK(reachable(g, FactSet{ex.g}));
  CHECK(reachable(g, ex.task.init()));
}

TEST_CASE("excluding actions in the abstract example") {
  auto ex = testing::example1();
  std::vector<ActionId> no_c{ex.c};
  auto g1 = build_orpg(ex.task, ex.task.init(), no_c);
  CHECK(!g1.fact_reachable(ex.g));
  CHECK(g1.achievers(ex.g).empty());
  CHECK(g1.is_excluded(ex.c));
  CHECK(!testing::search_relaxed(ex.task, testing::mask_of(ex.task.init()), testing::mask_of({ex.g}),
                                 Mask(1) << index(ex.c)));

  std::vector<ActionId> no_ab{ex.a, ex.b};
  auto g2 = build_orpg(ex.task, ex.task.init(), no_ab);
  CHECK(!reachable(g2, FactSet{ex.g}));
  CHECK(!g2.fact_reachable(ex.r));
  CHECK(!testing::search_relaxed(ex.task, testing::mask_of(ex.task.init()), testing::mask_of({ex.g}),
                                 (Mask(1) << index(ex.a)) | (Mask(1) << index(ex.b))));
  CHECK(!relaxed_reachable(ex.task, ex.task.init(), FactSet{ex.g}, no_ab));
  CHECK(relaxed_reachable(ex.task, ex.task.init(), FactSet{ex.g}));
}

TEST_CASE("a task without actions is just its initial state") {
  IncompleteDomain d;
  auto task = GroundedTask::from_ground(d, {Fact{"x", {}}, Fact{"y", {}}}, {}, FactSet{FactId(0)});
  auto g = build_orpg(task, task.init());
  CHECK(g.max_level() == 0);
  CHECK(g.fact_level(FactId(0)) == 0);
  CHECK(!g.fact_reachable(FactId(1)));
}

TEST_CASE("optimistic application in the abstract example") {
  auto ex = testing::example1();
  FactSet s0 = testing::facts_of(ex.task, {"p", "q"});
  FactSet s1 = apply_optimistic(s0, ex.task.action(ex.a));
  CHECK(s1 == testing::facts_of(ex.task, {"p", "q", "r"}));
  FactSet s2 = apply_optimistic(s1, ex.task.action(ex.b));
  CHECK(s2 == testing::facts_of(ex.task, {"q", "r"}));
  FactSet s3 = apply_optimistic(s2, ex.task.action(ex.c));
  CHECK(s3 == testing::facts_of(ex.task, {"q", "r", "g"}));

  CHECK_THROWS_AS(apply_optimistic(testing::facts_of(ex.task, {"q"}), ex.task.action(ex.b)), InapplicableAction);

  GroundAction noop;
  noop.name = "noop";
  CHECK(apply_optimistic(s2, noop) == s2);

  std::vector<ActionId> trace{ex.a, ex.b, ex.c};
  auto replay = replay_optimistic(ex.task, ex.task.init(), trace);
  CHECK(replay.states == std::vector<FactSet>{s0, s1, s2, s3});
  CHECK(replay.warnings.empty());

  std::vector<ActionId> bad{ex.b, ex.b};
  auto warned = replay_optimistic(ex.task, ex.task.init(), bad);
  CHECK(warned.warnings.size() == 1);
  CHECK(warned.states.back() == testing::facts_of(ex.task, {"q", "r"}));
}

TEST_CASE("ORPG reachability agrees with exhaustive relaxed search") {
  SeededRng rng(21);
  std::size_t queries = 0;
  for (int t = 0; t < 300; ++t) {
    testing::RandomTaskSpec spec;
    spec.facts = 4 + rng.below(9);
    spec.actions = 1 + rng.below(8);
    spec.possible_rate = t % 2 ? 0.3 : 0.0;
    auto task = testing::random_task(rng, spec);
    auto g = build_orpg(task, task.init());
    Mask init = testing::mask_of(task.init());
    // Goals over the first six facts; the acceptance run covers every subset.
    std::size_t window = std::min<std::size_t>(6, task.num_facts());
    for (Mask sub = 0; sub < (Mask(1) << window); ++sub) {
      FactSet goal;
      for (std::size_t i = 0; i < window; ++i) {
        if (sub >> i & 1) goal.push_back(FactId(static_cast<std::uint32_t>(i)));
      }
      bool expected = testing::search_relaxed(task, init, sub, 0);
      CHECK(reachable(g, goal) == expected);
      CHECK(relaxed_reachable(task, task.init(), goal) == expected);
      ++queries;
    }
  }
  CHECK(queries > 1000);
}

TEST_CASE("ORPG invariants on random tasks") {
  SeededRng rng(77);
  for (int t = 0; t < 1000; ++t) {
    testing::RandomTaskSpec spec;
    spec.facts = 3 + rng.below(20);
    spec.actions = 1 + rng.below(15);
    spec.possible_rate = 0.3;
    auto task = testing::random_task(rng, spec);
    auto g = build_orpg(task, task.init());
    for (FactId f : task.init()) CHECK(g.fact_level(f) == 0);
    for (std::size_t i = 0; i < task.num_actions(); ++i) {
      ActionId a = ActionId(i);
      const auto& act = task.action(a);
      if (!g.action_reachable(a)) continue;
      for (FactId f : act.pre) CHECK(g.fact_level(f) <= g.action_level(a));
      for (FactId f : act.add) CHECK(g.fact_level(f) <= g.action_level(a) + 1);
      for (FactId f : act.poss_add) CHECK(g.fact_level(f) <= g.action_level(a) + 1);
    }
    // Layers grow: the facts at or below level l include those below l.
    std::size_t cumulative = 0;
    for (std::uint32_t l = 0; l <= g.max_level(); ++l) {
      auto layer = g.facts_at(l);
      CHECK(!layer.empty());
      cumulative += layer.size();
    }
    CHECK(cumulative <= task.num_facts());
    CHECK(g.max_level() <= task.num_facts());

    // Any state visited by real optimistic execution is covered.
    Mask visited = testing::optimistic_visited_facts(task, testing::mask_of(task.init()));
    for (std::size_t f = 0; f < task.num_facts(); ++f) {
      if (visited >> f & 1) CHECK(g.fact_reachable(FactId(static_cast<std::uint32_t>(f))));
    }

    // Removing more actions never makes a goal reachable.
    FactSet goal = testing::random_reachable_goal(task, rng, 3);
    std::vector<ActionId> excluded;
    bool before = relaxed_reachable(task, task.init(), goal, excluded);
    for (std::size_t i = 0; i < task.num_actions(); ++i) {
      if (!rng.chance(0.3)) continue;
      excluded.push_back(ActionId(static_cast<std::uint32_t>(i)));
      bool after = relaxed_reachable(task, task.init(), goal, excluded);
      CHECK((before || !after));
      before = after;
    }
  }
}

TEST_CASE("classical tasks agree with naive delete-relaxed reachability") {
  SeededRng rng(3);
  for (int t = 0; t < 500; ++t) {
    testing::RandomTaskSpec spec;
    spec.facts = 10 + rng.below(40);
    spec.actions = 5 + rng.below(40);
    auto task = testing::random_task(rng, spec);
    auto actions = testing::mask_actions(task);
    std::vector<bool> none(actions.size(), false);
    auto g = build_orpg(task, task.init());
    for (std::size_t f = 0; f < task.num_facts(); ++f) {
      bool naive = testing::naive_reachable(actions, testing::mask_of(task.init()), Mask(1) << f, none);
      CHECK(g.fact_reachable(FactId(static_cast<std::uint32_t>(f))) == naive);
    }
  }
}

TEST_CASE("dump lists every fact and action") {
  auto ex = testing::example1();
  auto text = dump_orpg(ex.task, build_orpg(ex.task, ex.task.init()));
  CHECK(text.find("(g)\t2") != std::string::npos);
  CHECK(text.find("(c)\t1") != std::string::npos);
}
