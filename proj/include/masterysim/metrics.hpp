#pragma once

#include "masterysim/selectors.hpp"
#include "masterysim/session.hpp"
#include "masterysim/types.hpp"

namespace masterysim {

struct StudentMetrics {
  IntVector overpractice_by_skill;  // attempted steps on already-mastered skills
  int overpractice_total = 0;
  int underpractice = 0;  // skills unmastered at session end
  int attempted_steps = 0;
  bool mastered_all = false;
  std::optional<int> steps_to_mastery;
};

StudentMetrics compute_student_metrics(const SessionRecord& record, const SkillModel& skill_model);

struct ConditionSummary {
  SelectorKind selector = SelectorKind::MasteryHard;
  bool fast_forward = false;
  int n_students = 0;
  double mean_overpractice = 0.0;
  double sd_overpractice = 0.0;
  double mean_underpractice = 0.0;
  double sd_underpractice = 0.0;
  Vector per_skill_mean_overpractice;
  double mean_steps_to_mastery = 0.0;  // over mastered students; NaN when none
  int n_mastered = 0;
  bool sd_well_defined = false;  // false when n_students < 2
};

// Standard deviations use the n-1 denominator; a single student yields sd 0
// with sd_well_defined=false. Deterministic given input order.
ConditionSummary summarize(const std::vector<StudentMetrics>& metrics, SelectorKind selector,
                           bool fast_forward);

struct ReductionReport {
  SelectorKind selector = SelectorKind::MasteryHard;
  double mean_without = 0.0;
  double mean_with = 0.0;
  bool applicable = false;        // false when mean_without is 0
  double percent_reduction = 0.0; // (without - with) / without * 100
  double effect_size_sd = 0.0;    // (without - with) / sd of the no-FF condition
};

ReductionReport reduction_report(const ConditionSummary& with_ff,
                                 const ConditionSummary& without_ff);

} // namespace masterysim
