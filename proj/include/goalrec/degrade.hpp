#pragma once

// Turns a complete STRIPS domain into an incomplete one.
//
//   Step 1  moves ceil(percent/100 * total) literal occurrences of each
//           category (preconditions, add effects, delete effects), counted
//           over all operators, from the known list to the possible list.
//   Step 2  adds each delete effect that is not a precondition of its
//           operator to the possible preconditions with probability percent/100.
//   Step 3  adds each predicate instance whose arguments fit the operator's
//           parameters and which the operator does not mention yet to one
//           uniformly chosen possible list, with probability percent/100.
//
// Variants S1, S12 and S123 apply the steps cumulatively. Randomness comes
// from SeededRng, so outputs are identical across platforms.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "goalrec/model.hpp"

namespace goalrec {

/// std::mt19937_64 (whose output sequence is fixed by the C++ standard) with
/// hand-rolled range reduction:
///   below(n)      rejection sampling on the raw 64-bit draw
///   chance(p)     top 53 bits as a double in [0,1), compared with p
/// Standard distributions are avoided because their algorithms are
/// implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1).
  double unit();
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

enum class DegradeVariant { S1, S12, S123 };

const char* to_string(DegradeVariant v);  // "s1", "s12", "s123"
DegradeVariant parse_variant(const std::string& text);

struct DegradeSpec {
  int percent = 20;
  std::uint64_t seed = 0;
  DegradeVariant variant = DegradeVariant::S1;
};

/// Occurrences moved by step 1 out of `total`: ceil(percent * total / 100).
std::size_t step1_count(int percent, std::size_t total);

/// Throws std::invalid_argument when percent is outside [0, 100] and
/// ModelError when the input already carries possible lists.
IncompleteDomain degrade(const IncompleteDomain& domain, const DegradeSpec& spec);

/// "<name>-incomplete-<percent>-<variant>.pddl", with "-d<k>" before the
/// extension for extra draws.
std::string degraded_file_name(const std::string& domain_name, int percent, DegradeVariant variant, int draw = 0);

/// Writes one file per (percent, variant) into `out_dir`, and `draws` extra
/// seeded draws per pair when draws > 1 (draw k uses seed + k). Returns the
/// written paths.
std::vector<std::filesystem::path> degrade_suite(const IncompleteDomain& domain, std::uint64_t seed,
                                                 const std::vector<int>& percents,
                                                 const std::filesystem::path& out_dir, int draws = 1);

}  // namespace goalrec
