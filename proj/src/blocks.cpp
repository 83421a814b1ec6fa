#include "goalrec/blocks.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <unordered_map>

#include "goalrec/pddl.hpp"

namespace goalrec::blocks {

std::string domain_text() {
  return R"((define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block)
               (ontable ?x - block)
               (clear ?x - block)
               (handempty)
               (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action put-down
    :parameters (?x - block)
    :precondition (and (holding ?x))
    :effect (and (clear ?x) (handempty) (ontable ?x) (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (clear ?x) (handempty) (on ?x ?y) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
)";
}

std::vector<std::string> block_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string name;
    std::size_t k = i;
    do {
      name.insert(name.begin(), static_cast<char>('a' + k % 26));
      k /= 26;
    } while (k-- > 0);
    out.push_back(name);
  }
  return out;
}

Configuration random_configuration(const std::vector<std::string>& blocks, SeededRng& rng) {
  std::vector<std::string> order = blocks;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  Configuration config;
  for (const auto& b : order) {
    // Start a new tower or put the block on an existing one, uniformly.
    std::size_t choice = static_cast<std::size_t>(rng.below(config.size() + 1));
    if (choice == config.size()) {
      config.push_back({b});
    } else {
      config[choice].push_back(b);
    }
  }
  return config;
}

std::vector<Fact> configuration_facts(const Configuration& config) {
  std::vector<Fact> out;
  for (const auto& tower : config) {
    if (tower.empty()) continue;
    out.push_back(Fact{"ontable", {tower.front()}});
    for (std::size_t i = 1; i < tower.size(); ++i) out.push_back(Fact{"on", {tower[i], tower[i - 1]}});
    out.push_back(Fact{"clear", {tower.back()}});
  }
  out.push_back(Fact{"handempty", {}});
  std::sort(out.begin(), out.end());
  return out;
}

Goal random_tower_goal(const std::vector<std::string>& blocks, std::size_t height, SeededRng& rng) {
  std::vector<std::string> order = blocks;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  order.resize(std::min(height, order.size()));
  Goal goal;
  goal.push_back(Fact{"ontable", {order.front()}});
  for (std::size_t i = 1; i < order.size(); ++i) goal.push_back(Fact{"on", {order[i], order[i - 1]}});
  goal.push_back(Fact{"clear", {order.back()}});
  return canonical(std::move(goal));
}

namespace {

struct StateHash {
  std::size_t operator()(const FactSet& s) const noexcept {
    std::size_t h = s.size();
    for (FactId f : s) h ^= index(f) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

std::optional<std::vector<ActionId>> bfs_plan(const GroundedTask& task, const FactSet& goal, std::size_t max_states) {
  auto satisfied = [&](const FactSet& s) { return std::includes(s.begin(), s.end(), goal.begin(), goal.end()); };
  struct Parent {
    std::size_t state;
    ActionId action;
  };
  std::vector<FactSet> states{task.init()};
  std::vector<Parent> parents{{0, ActionId(0)}};
  std::unordered_map<FactSet, std::size_t, StateHash> seen{{task.init(), 0}};
  std::deque<std::size_t> open{0};

  auto extract = [&](std::size_t node) {
    std::vector<ActionId> plan;
    while (node != 0) {
      plan.push_back(parents[node].action);
      node = parents[node].state;
    }
    std::reverse(plan.begin(), plan.end());
    return plan;
  };

  if (satisfied(task.init())) return std::vector<ActionId>{};
  while (!open.empty()) {
    std::size_t node = open.front();
    open.pop_front();
    for (std::size_t a = 0; a < task.num_actions(); ++a) {
      const auto& act = task.actions()[a];
      const FactSet& s = states[node];
      if (!std::includes(s.begin(), s.end(), act.pre.begin(), act.pre.end())) continue;
      FactSet next;
      std::set_difference(s.begin(), s.end(), act.del.begin(), act.del.end(), std::back_inserter(next));
      next.insert(next.end(), act.add.begin(), act.add.end());
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (seen.count(next)) continue;
      std::size_t id = states.size();
      seen.emplace(next, id);
      states.push_back(std::move(next));
      parents.push_back({node, ActionId(a)});
      if (satisfied(states[id])) return extract(id);
      if (states.size() >= max_states) return std::nullopt;
      open.push_back(id);
    }
  }
  return std::nullopt;
}

std::vector<ActionId> sample_observations(const std::vector<ActionId>& plan, int percent, SeededRng& rng) {
  if (plan.empty()) return {};
  std::size_t keep = std::max<std::size_t>(1, step1_count(percent, plan.size()));
  keep = std::min(keep, plan.size());
  std::vector<std::size_t> idx(plan.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < keep; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::vector<ActionId> out;
  for (std::size_t i : idx) out.push_back(plan[i]);
  return out;
}

Problem random_problem(const std::string& name, std::size_t num_blocks, std::size_t num_hypotheses,
                       std::size_t tower_height, SeededRng& rng) {
  static const IncompleteDomain domain = parse_domain(domain_text());
  auto blocks = block_names(num_blocks);
  while (true) {
    Problem p;
    p.name = name;
    p.instance.name = name;
    p.instance.domain_name = domain.name;
    for (const auto& b : blocks) p.instance.objects.push_back(TypedObject{b, "block"});
    p.instance.init = configuration_facts(random_configuration(blocks, rng));

    std::vector<Goal> goals;
    std::size_t attempts = 0;
    while (goals.size() < num_hypotheses && attempts++ < 1000) {
      Goal g = random_tower_goal(blocks, tower_height, rng);
      if (std::find(goals.begin(), goals.end(), g) == goals.end()) goals.push_back(std::move(g));
    }
    if (goals.size() < num_hypotheses) continue;
    p.hidden = static_cast<std::size_t>(rng.below(goals.size()));
    p.hypotheses = std::move(goals);

    GroundedTask task = ground(domain, p.instance.objects, p.instance.init);
    auto plan = bfs_plan(task, task.to_fact_set(p.hypotheses[p.hidden]));
    if (!plan || plan->empty()) continue;
    for (ActionId a : *plan) p.plan.push_back(task.action(a).signature_atom());
    return p;
  }
}

std::vector<std::string> write_corpus(const std::filesystem::path& root, const CorpusSpec& spec) {
  namespace fs = std::filesystem;
  const IncompleteDomain complete = parse_domain(domain_text());
  SeededRng rng(spec.seed);
  std::vector<std::string> manifest;

  for (std::size_t i = 0; i < spec.problems; ++i) {
    std::size_t n_blocks = spec.min_blocks + rng.below(spec.max_blocks - spec.min_blocks + 1);
    std::size_t n_hyps = spec.min_hypotheses + rng.below(spec.max_hypotheses - spec.min_hypotheses + 1);
    char name[16];
    std::snprintf(name, sizeof name, "p%03zu", i + 1);
    Problem p = random_problem(name, n_blocks, n_hyps, spec.tower_height, rng);

    GroundedTask task = ground(complete, p.instance.objects, p.instance.init);
    std::vector<ActionId> plan = resolve_observations(p.plan, task);
    std::vector<std::pair<int, std::string>> traces;
    for (int obs : spec.observability) {
      std::string text;
      for (ActionId a : sample_observations(plan, obs, rng)) text += task.action(a).signature() + "\n";
      traces.emplace_back(obs, std::move(text));
    }
    std::uint64_t problem_seed = rng.next();

    for (int percent : spec.percents) {
      for (DegradeVariant variant : spec.variants) {
        std::string entry =
            "blocks/" + std::to_string(percent) + "/" + to_string(variant) + "/" + p.name;
        fs::path dir = root / entry;
        fs::create_directories(dir);
        DegradeSpec ds{percent, problem_seed + static_cast<std::uint64_t>(percent), variant};
        write_file((dir / "domain.pddl").string(), serialize_domain(degrade(complete, ds)));
        write_file((dir / "template.pddl").string(), serialize_problem(p.instance));
        write_file((dir / "hyps.dat").string(), serialize_hypotheses(p.hypotheses));
        write_file((dir / "real_hyp.dat").string(), goal_to_string(p.hypotheses[p.hidden]) + "\n");
        for (const auto& [obs, text] : traces) {
          fs::create_directories(dir / std::to_string(obs));
          write_file((dir / std::to_string(obs) / "obs.dat").string(), text);
        }
        manifest.push_back(entry);
      }
    }
  }
  std::sort(manifest.begin(), manifest.end());
  std::string text;
  for (const auto& e : manifest) text += e + "\n";
  write_file((root / "manifest.txt").string(), text);
  return manifest;
}

}  // namespace goalrec::blocks
