#pragma once

#include "masterysim/bkt.hpp"
#include "masterysim/pool.hpp"
#include "masterysim/rng.hpp"

namespace masterysim {

enum class SelectorKind {
  Random,
  Deterministic,
  MasteryEasy,
  MasteryHard,
  FocusedPractice,
};

// Parses "random" | "deterministic" | "mastery_easy" | "mastery_hard" |
// "focused_practice", case-insensitively.
std::optional<SelectorKind> parse_selector(std::string_view name);
std::string selector_name(SelectorKind kind);

// Stable per-selector id used to key random streams; independent of config
// order and of the fast-forward flag.
std::uint64_t selector_condition_id(SelectorKind kind);

struct ProblemScore {
  std::string problem_id;
  double mean_difficulty = 0.0;  // mean over steps of (1 - mastery posterior)
  int unmastered_count = 0;      // steps whose skill is below threshold
  int distinct_skills = 0;
};

ProblemScore score_problem(const Problem& problem, const BktState& bkt,
                           const BktParamTable& params);

// Picks a problem among the currently available ones, or none when the
// policy has no admissible candidate (mastery policies require at least one
// unmastered skill). The pool must have at least one available problem.
std::optional<std::string> select(SelectorKind kind, const ProblemPool& pool, const BktState& bkt,
                                  const BktParamTable& params, RandomStream& rng);

} // namespace masterysim
