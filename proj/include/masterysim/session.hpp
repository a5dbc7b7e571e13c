#pragma once

#include "masterysim/afm.hpp"
#include "masterysim/bkt.hpp"
#include "masterysim/pool.hpp"
#include "masterysim/selectors.hpp"

#include <cstdint>

namespace masterysim {

enum class RegimeKind { StepBudget, RunToMastery };

struct Regime {
  RegimeKind kind = RegimeKind::RunToMastery;
  int budget = 0;  // attempted-step budget, >= 1 under StepBudget

  static Regime step_budget(int n) { return Regime{RegimeKind::StepBudget, n}; }
  static Regime run_to_mastery() { return Regime{RegimeKind::RunToMastery, 0}; }
};

struct SessionConfig {
  Regime regime;
  SelectorKind selector = SelectorKind::MasteryHard;
  bool fast_forward = false;
  std::uint64_t master_seed = 1;
  int student_index = 0;
};

struct StepEvent {
  std::string problem_id;
  int step_position = 0;
  int skill = -1;
  bool was_mastered_before = false;
  std::optional<bool> correct;  // absent on fast-forwarded steps
  bool fast_forwarded = false;
  int step_counter = 0;  // attempted steps so far; unchanged on fast-forwards
};

enum class Termination { Budget, Mastery, SelectorNone };

struct SessionRecord {
  std::vector<StepEvent> events;
  BktState final_bkt;
  Vector mastery_thresholds;  // per skill, for downstream accounting
  StudentState final_student;
  int problems_started = 0;
  int problems_fast_forwarded = 0;
  int replenishes = 0;
  Termination terminated_by = Termination::Mastery;
};

// True iff every step at positions >= next_position is on a mastered skill.
bool check_fast_forward(const Problem& problem, int next_position, const BktState& bkt,
                        const BktParamTable& params);

// Runs one student's practice session. The pool is taken by value: each
// session owns its copy. All randomness derives from (master_seed,
// student_index). initial_mastery, when given, replaces the p_init posteriors
// (test hook).
SessionRecord run_session(const SessionConfig& config, ProblemPool pool,
                          const BktParamTable& bkt_params, const AfmParams& afm_params,
                          const std::optional<Vector>& initial_mastery = std::nullopt);

} // namespace masterysim
