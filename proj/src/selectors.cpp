#include "masterysim/selectors.hpp"

#include <algorithm>
#include <cctype>

namespace masterysim {
namespace {

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

} // namespace

std::optional<SelectorKind> parse_selector(std::string_view name) {
  const std::string lower = lowercase(name);
  if (lower == "random") return SelectorKind::Random;
  if (lower == "deterministic") return SelectorKind::Deterministic;
  if (lower == "mastery_easy") return SelectorKind::MasteryEasy;
  if (lower == "mastery_hard") return SelectorKind::MasteryHard;
  if (lower == "focused_practice") return SelectorKind::FocusedPractice;
  return std::nullopt;
}

std::string selector_name(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Random: return "random";
    case SelectorKind::Deterministic: return "deterministic";
    case SelectorKind::MasteryEasy: return "mastery_easy";
    case SelectorKind::MasteryHard: return "mastery_hard";
    case SelectorKind::FocusedPractice: return "focused_practice";
  }
  return "unknown";
}

std::uint64_t selector_condition_id(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::Random: return 1;
    case SelectorKind::Deterministic: return 2;
    case SelectorKind::MasteryEasy: return 3;
    case SelectorKind::MasteryHard: return 4;
    case SelectorKind::FocusedPractice: return 5;
  }
  return 0;
}

ProblemScore score_problem(const Problem& problem, const BktState& bkt,
                           const BktParamTable& params) {
  ProblemScore score;
  score.problem_id = problem.id;
  double difficulty_sum = 0.0;
  std::vector<int> seen;
  for (const Step& step : problem.steps) {
    difficulty_sum += 1.0 - bkt.p_mastery[step.skill];
    if (!is_mastered(bkt, step.skill, params.for_skill(step.skill))) {
      ++score.unmastered_count;
    }
    if (std::find(seen.begin(), seen.end(), step.skill) == seen.end()) {
      seen.push_back(step.skill);
    }
  }
  score.mean_difficulty = difficulty_sum / static_cast<double>(problem.steps.size());
  score.distinct_skills = static_cast<int>(seen.size());
  return score;
}

std::optional<std::string> select(SelectorKind kind, const ProblemPool& pool, const BktState& bkt,
                                  const BktParamTable& params, RandomStream& rng) {
  if (pool.exhausted()) {
    throw std::logic_error("select called on an exhausted pool");
  }

  switch (kind) {
    case SelectorKind::Random: {
      const int pick = rng.uniform_int(pool.available_count());
      int seen = 0;
      for (int i = 0; i < pool.size(); ++i) {
        if (!pool.is_available(i)) continue;
        if (seen == pick) {
          return pool.problem(i).id;
        }
        ++seen;
      }
      break;
    }

    case SelectorKind::Deterministic: {
      for (int i = 0; i < pool.size(); ++i) {
        if (pool.is_available(i)) {
          return pool.problem(i).id;
        }
      }
      break;
    }

    case SelectorKind::MasteryEasy:
    case SelectorKind::MasteryHard: {
      // Scanning in pool_order makes the first strict winner the tie-break.
      const bool easy = kind == SelectorKind::MasteryEasy;
      std::optional<int> best;
      double best_difficulty = 0.0;
      for (int i = 0; i < pool.size(); ++i) {
        if (!pool.is_available(i)) continue;
        const ProblemScore score = score_problem(pool.problem(i), bkt, params);
        if (score.unmastered_count < 1) continue;
        const bool better = !best.has_value() || (easy ? score.mean_difficulty < best_difficulty
                                                       : score.mean_difficulty > best_difficulty);
        if (better) {
          best = i;
          best_difficulty = score.mean_difficulty;
        }
      }
      if (best.has_value()) {
        return pool.problem(*best).id;
      }
      return std::nullopt;
    }

    case SelectorKind::FocusedPractice: {
      std::vector<int> candidates;
      std::vector<double> weights;
      double total = 0.0;
      for (int i = 0; i < pool.size(); ++i) {
        if (!pool.is_available(i)) continue;
        const ProblemScore score = score_problem(pool.problem(i), bkt, params);
        if (score.unmastered_count < 1) continue;
        const double w = score.mean_difficulty / static_cast<double>(score.distinct_skills);
        if (w <= 0.0) continue;
        candidates.push_back(i);
        weights.push_back(w);
        total += w;
      }
      if (candidates.empty()) {
        return std::nullopt;
      }
      const double draw = rng.next_unit() * total;
      double cumulative = 0.0;
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        cumulative += weights[j];
        if (draw < cumulative) {
          return pool.problem(candidates[j]).id;
        }
      }
      return pool.problem(candidates.back()).id;
    }
  }
  throw std::logic_error("select: unreachable");
}

} // namespace masterysim
