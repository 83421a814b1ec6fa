#include <doctest.h>

#include <algorithm>

#include "goalrec/blocks.hpp"
#include "goalrec/grounding.hpp"
#include "goalrec/pddl.hpp"
#include "support.hpp"

using namespace goalrec;

TEST_CASE("abstract example grounds to three actions over four facts") {
  auto ex = testing::example1();
  CHECK(ex.task.num_actions() == 3);
  std::vector<Fact> expected{Fact{"g", {}}, Fact{"p", {}}, Fact{"q", {}}, Fact{"r", {}}};
  CHECK(ex.task.facts() == expected);
  CHECK(ex.task.init() == FactSet{std::min(ex.p, ex.q), std::max(ex.p, ex.q)});
  const auto& a = ex.task.action(ex.a);
  CHECK(a.pre == testing::facts_of(ex.task, {"p", "q"}));
  CHECK(a.poss_pre == testing::facts_of(ex.task, {"r"}));
  CHECK(a.poss_add == testing::facts_of(ex.task, {"r"}));
  CHECK(a.poss_del == testing::facts_of(ex.task, {"p"}));
  CHECK(ex.task.adders(ex.r) == std::vector<ActionId>{ex.a, ex.b});
  CHECK(ex.task.action(ex.b).signature() == "(b)");
}

TEST_CASE("unary operator over three objects") {
  auto d = parse_domain(R"((define (domain t) (:requirements :strips :typing) (:types ball room)
    (:predicates (held ?b - ball))
    (:action grab :parameters (?b - ball) :effect (held ?b))))");
  std::vector<TypedObject> objs{{"x", "ball"}, {"y", "ball"}, {"z", "ball"}, {"hall", "room"}};
  auto task = ground(d, objs, {});
  CHECK(task.num_actions() == 3);
  CHECK(task.num_facts() == 3);
  CHECK(task.action(ActionId(0)).signature() == "(grab x)");
  CHECK(task.action(ActionId(2)).signature() == "(grab z)");
}

TEST_CASE("subtypes bind to supertype parameters") {
  auto d = parse_domain(R"((define (domain t) (:requirements :strips :typing)
    (:types vehicle - object truck car - vehicle place)
    (:predicates (at ?v - vehicle ?p - place))
    (:action park :parameters (?v - vehicle ?p - place) :effect (at ?v ?p))))");
  std::vector<TypedObject> objs{{"t1", "truck"}, {"c1", "car"}, {"home", "place"}, {"work", "place"}};
  auto task = ground(d, objs, {});
  CHECK(task.num_actions() == 4);
  CHECK(task.num_actions() == testing::brute_force_bindings(d, objs));
  CHECK(count_bindings(d, objs) == 4);
}

TEST_CASE("blocksworld counts match the brute-force enumerator") {
  auto d = parse_domain(blocks::domain_text());
  for (std::size_t n = 1; n <= 5; ++n) {
    std::vector<TypedObject> objs;
    for (const auto& b : blocks::block_names(n)) objs.push_back({b, "block"});
    auto task = ground(d, objs, {});
    CAPTURE(n);
    CHECK(task.num_actions() == testing::brute_force_bindings(d, objs));
    CHECK(task.num_actions() == 2 * n + 2 * n * n);
    CHECK(task.num_facts() == 1 + 3 * n + n * n);
  }
}

TEST_CASE("random domains ground to the brute-force binding count") {
  SeededRng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto d = testing::random_complete_domain(rng);
    std::vector<TypedObject> objs;
    for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) objs.push_back({"o" + std::to_string(k), "thing"});
    auto task = ground(d, objs, {});
    CHECK(task.num_actions() == testing::brute_force_bindings(d, objs));
  }
}

TEST_CASE("operator order in the file does not change the grounded actions") {
  SeededRng rng(9);
  for (int i = 0; i < 50; ++i) {
    auto d = testing::random_complete_domain(rng);
    auto reversed = d;
    std::reverse(reversed.operators.begin(), reversed.operators.end());
    std::vector<TypedObject> objs{{"a", "thing"}, {"b", "thing"}};
    auto t1 = ground(d, objs, {});
    auto t2 = ground(reversed, objs, {});
    REQUIRE(t1.num_actions() == t2.num_actions());
    for (std::size_t k = 0; k < t1.num_actions(); ++k) {
      const auto& x = t1.actions()[k];
      const auto& y = t2.actions()[k];
      CHECK(x.signature() == y.signature());
      CHECK(x.pre == y.pre);
      CHECK(x.add == y.add);
      CHECK(x.del == y.del);
    }
  }
}

TEST_CASE("complete domains ground without possible lists") {
  auto d = parse_domain(blocks::domain_text());
  auto task = ground(d, {{"a", "block"}, {"b", "block"}}, {});
  for (const auto& a : task.actions()) {
    CHECK(a.poss_pre.empty());
    CHECK(a.poss_add.empty());
    CHECK(a.poss_del.empty());
  }
}

TEST_CASE("a literal known and possible after binding keeps the known slot") {
  // (clear ?x) and (clear ?y) collapse when ?x = ?y.
  auto d = parse_domain(R"((define (domain t) (:requirements :strips)
    (:predicates (clear ?x) (done))
    (:action act :parameters (?x ?y) :precondition (clear ?x) :poss-precondition (clear ?y)
      :effect (done) :poss-effect-add (clear ?y))))");
  auto task = ground(d, {{"a", "object"}, {"b", "object"}}, {});
  auto id = task.find_action(Atom{"act", {"a", "a"}});
  REQUIRE(id);
  const auto& a = task.action(*id);
  CHECK(a.pre.size() == 1);
  CHECK(a.poss_pre.empty());
  CHECK(a.poss_add.size() == 1);
  auto other = task.action(*task.find_action(Atom{"act", {"a", "b"}}));
  CHECK(other.poss_pre.size() == 1);
}

TEST_CASE("init facts outside the universe are rejected") {
  auto ex = testing::example1();
  CHECK_THROWS_AS(ex.task.to_fact_set(std::vector<Fact>{Fact{"s", {}}}), ModelError);
}

TEST_CASE("completion counts") {
  auto ex = testing::example1();
  auto lifted = count_completions(ex.domain);
  CHECK(lifted.k == 5);
  CHECK(lifted.completions == 32);
  CHECK(count_completions(ex.task).k == 5);

  auto complete = parse_domain(blocks::domain_text());
  CHECK(count_completions(complete).k == 0);
  CHECK(count_completions(complete).completions == 1);

  auto big = completions_for(200);
  boost::multiprecision::cpp_int expected = 1;
  for (int i = 0; i < 200; ++i) expected *= 2;
  CHECK(big.completions == expected);
}

TEST_CASE("degraded blocksworld completion count matches a recount of the written file") {
  auto complete = parse_domain(blocks::domain_text());
  auto degraded = degrade(complete, DegradeSpec{20, 3, DegradeVariant::S123});
  std::string text = serialize_domain(degraded);
  // Recount: every atom inside a :poss-* block of the emitted text.
  std::size_t recount = 0;
  for (const char* key : {":poss-precondition", ":poss-effect-add", ":poss-effect-del"}) {
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
      pos += std::string(key).size();
      std::size_t open = text.find('(', pos);
      int depth = 0;
      std::size_t k = open;
      do {
        if (text[k] == '(') {
          ++depth;
          if (depth >= 2 || text.compare(k, 4, "(and") != 0) ++recount;
        } else if (text[k] == ')') {
          --depth;
        }
        ++k;
      } while (depth > 0);
    }
  }
  auto count = count_completions(parse_domain(text));
  CHECK(count.k == recount);
  CHECK(count.completions == completions_for(recount).completions);
}

TEST_CASE("deadline interrupts grounding") {
  auto d = parse_domain(blocks::domain_text());
  std::vector<TypedObject> objs;
  for (const auto& b : blocks::block_names(30)) objs.push_back({b, "block"});
  Deadline expired = Deadline::after_seconds(0.0);
  CHECK_THROWS_AS(ground(d, objs, {}, expired), TimeoutError);
}
