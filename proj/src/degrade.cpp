#include "goalrec/degrade.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "goalrec/pddl.hpp"

namespace goalrec {

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SeededRng::below(0)");
  // Largest multiple of n that fits; draws at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double SeededRng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

const char* to_string(DegradeVariant v) {
  switch (v) {
    case DegradeVariant::S1:
      return "s1";
    case DegradeVariant::S12:
      return "s12";
    case DegradeVariant::S123:
      return "s123";
  }
  return "?";
}

DegradeVariant parse_variant(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "s1") return DegradeVariant::S1;
  if (t == "s12") return DegradeVariant::S12;
  if (t == "s123") return DegradeVariant::S123;
  throw std::invalid_argument("unknown variant '" + text + "' (expected s1, s12 or s123)");
}

std::size_t step1_count(int percent, std::size_t total) {
  return (static_cast<std::size_t>(percent) * total + 99) / 100;
}

namespace {

struct Occurrence {
  std::size_t op;
  std::size_t literal;
};

/// Moves a seeded sample of occurrences from `known` lists to `possible`
/// lists, one category at a time.
void move_fraction(std::vector<IncompleteOperator>& ops, AtomList IncompleteOperator::*known,
                   AtomList IncompleteOperator::*possible, int percent, SeededRng& rng) {
  std::vector<Occurrence> all;
  for (std::size_t o = 0; o < ops.size(); ++o) {
    for (std::size_t l = 0; l < (ops[o].*known).size(); ++l) all.push_back({o, l});
  }
  std::size_t take = step1_count(percent, all.size());
  // Partial Fisher-Yates: the first `take` slots end up as a uniform sample.
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(all.size() - i));
    std::swap(all[i], all[j]);
  }
  std::vector<std::vector<bool>> chosen(ops.size());
  for (std::size_t o = 0; o < ops.size(); ++o) chosen[o].assign((ops[o].*known).size(), false);
  for (std::size_t i = 0; i < take; ++i) chosen[all[i].op][all[i].literal] = true;

  for (std::size_t o = 0; o < ops.size(); ++o) {
    AtomList kept;
    for (std::size_t l = 0; l < (ops[o].*known).size(); ++l) {
      const Atom& atom = (ops[o].*known)[l];
      if (chosen[o][l]) {
        add_unique(ops[o].*possible, atom);
      } else {
        kept.push_back(atom);
      }
    }
    ops[o].*known = std::move(kept);
  }
}

/// Every atom of every predicate whose argument slots can be filled with the
/// operator's parameters (parameter type within the slot's type), in
/// predicate order then lexicographic parameter order.
std::vector<Atom> fitting_atoms(const IncompleteDomain& domain, const IncompleteOperator& op) {
  std::vector<Atom> out;
  for (const auto& pred : domain.predicates) {
    std::vector<std::vector<const TypedVariable*>> slots;
    bool possible = true;
    for (const auto& slot : pred.parameters) {
      std::vector<const TypedVariable*> fits;
      for (const auto& param : op.parameters) {
        if (domain.types.is_subtype(param.type, slot.type)) fits.push_back(&param);
      }
      if (fits.empty()) possible = false;
      slots.push_back(std::move(fits));
    }
    if (!possible) continue;
    std::vector<std::size_t> cursor(slots.size(), 0);
    while (true) {
      Atom atom{pred.name, {}};
      for (std::size_t i = 0; i < slots.size(); ++i) atom.args.push_back(slots[i][cursor[i]]->name);
      out.push_back(std::move(atom));
      std::size_t pos = slots.size();
      bool done = true;
      while (pos > 0) {
        --pos;
        if (++cursor[pos] < slots[pos].size()) {
          done = false;
          break;
        }
        cursor[pos] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

bool mentioned(const IncompleteOperator& op, const Atom& atom) {
  for (const AtomList* list : {&op.pre, &op.poss_pre, &op.add, &op.del, &op.poss_add, &op.poss_del}) {
    if (contains(*list, atom)) return true;
  }
  return false;
}

}  // namespace

IncompleteDomain degrade(const IncompleteDomain& domain, const DegradeSpec& spec) {
  if (spec.percent < 0 || spec.percent > 100) {
    throw std::invalid_argument("incompleteness percent must be in [0, 100], got " + std::to_string(spec.percent));
  }
  if (!domain.is_complete()) throw ModelError("degrade expects a domain without possible preconditions or effects");

  IncompleteDomain out = domain;
  SeededRng rng(spec.seed);
  const double rate = spec.percent / 100.0;
  const auto original = domain.operators;

  move_fraction(out.operators, &IncompleteOperator::pre, &IncompleteOperator::poss_pre, spec.percent, rng);
  move_fraction(out.operators, &IncompleteOperator::add, &IncompleteOperator::poss_add, spec.percent, rng);
  move_fraction(out.operators, &IncompleteOperator::del, &IncompleteOperator::poss_del, spec.percent, rng);

  if (spec.variant == DegradeVariant::S12 || spec.variant == DegradeVariant::S123) {
    for (std::size_t o = 0; o < out.operators.size(); ++o) {
      auto& op = out.operators[o];
      for (const auto& d : original[o].del) {
        if (contains(original[o].pre, d)) continue;
        if (rng.chance(rate)) add_unique(op.poss_pre, d);
      }
    }
  }

  if (spec.variant == DegradeVariant::S123) {
    for (auto& op : out.operators) {
      for (const auto& atom : fitting_atoms(out, op)) {
        if (mentioned(op, atom)) continue;
        if (!rng.chance(rate)) continue;
        switch (rng.below(3)) {
          case 0:
            op.poss_pre.push_back(atom);
            break;
          case 1:
            op.poss_add.push_back(atom);
            break;
          default:
            op.poss_del.push_back(atom);
            break;
        }
      }
    }
  }
  validate(out);
  return out;
}

std::string degraded_file_name(const std::string& domain_name, int percent, DegradeVariant variant, int draw) {
  std::string name = domain_name + "-incomplete-" + std::to_string(percent) + "-" + to_string(variant);
  if (draw > 0) name += "-d" + std::to_string(draw);
  return name + ".pddl";
}

std::vector<std::filesystem::path> degrade_suite(const IncompleteDomain& domain, std::uint64_t seed,
                                                 const std::vector<int>& percents,
                                                 const std::filesystem::path& out_dir, int draws) {
  std::vector<std::filesystem::path> written;
  if (percents.empty()) return written;
  std::filesystem::create_directories(out_dir);
  for (int percent : percents) {
    for (DegradeVariant variant : {DegradeVariant::S1, DegradeVariant::S12, DegradeVariant::S123}) {
      for (int draw = 0; draw < std::max(draws, 1); ++draw) {
        DegradeSpec spec{percent, seed + static_cast<std::uint64_t>(draw), variant};
        auto path = out_dir / degraded_file_name(domain.name, percent, variant, draws > 1 ? draw : 0);
        write_file(path.string(), serialize_domain(degrade(domain, spec)));
        written.push_back(path);
      }
    }
  }
  return written;
}

}  // namespace goalrec
