#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "masterysim/metrics.hpp"
#include "support/test_util.hpp"

#include <cmath>

using namespace masterysim;

namespace {

SkillModel two_skills() { return SkillModel({"A", "B"}); }

SessionRecord empty_record(int n_skills) {
  SessionRecord record;
  record.final_bkt.p_mastery = Vector::Constant(n_skills, 0.25);
  record.mastery_thresholds = Vector::Constant(n_skills, 0.95);
  record.final_student = make_student_state(0.0, n_skills);
  record.terminated_by = Termination::SelectorNone;
  return record;
}

StepEvent attempted(int skill, bool mastered_before, int counter) {
  StepEvent event;
  event.problem_id = "p";
  event.skill = skill;
  event.was_mastered_before = mastered_before;
  event.correct = true;
  event.fast_forwarded = false;
  event.step_counter = counter;
  return event;
}

StudentMetrics with_overpractice(int total, int underpractice = 0) {
  StudentMetrics m;
  m.overpractice_by_skill = IntVector::Zero(2);
  m.overpractice_by_skill[0] = total;
  m.overpractice_total = total;
  m.underpractice = underpractice;
  m.attempted_steps = total + 3;
  m.mastered_all = underpractice == 0;
  return m;
}

} // namespace

TEST_CASE("a record with zero events yields all-zero metrics") {
  const auto metrics = compute_student_metrics(empty_record(2), two_skills());
  CHECK(metrics.attempted_steps == 0);
  CHECK(metrics.overpractice_total == 0);
  CHECK(metrics.overpractice_by_skill.sum() == 0);
  CHECK(metrics.underpractice == 2);  // every skill unmastered
  CHECK_FALSE(metrics.mastered_all);
  CHECK_FALSE(metrics.steps_to_mastery.has_value());
}

TEST_CASE("overpractice counts attempted steps whose skill was mastered before") {
  SessionRecord record = empty_record(2);
  record.events.push_back(attempted(0, false, 1));
  record.events.push_back(attempted(0, false, 2));
  record.events.push_back(attempted(0, true, 3));
  // fast-forwarded events contribute nothing
  StepEvent ff;
  ff.problem_id = "p";
  ff.skill = 1;
  ff.was_mastered_before = true;
  ff.fast_forwarded = true;
  ff.step_counter = 3;
  record.events.push_back(ff);

  const auto metrics = compute_student_metrics(record, two_skills());
  CHECK(metrics.attempted_steps == 3);
  CHECK(metrics.overpractice_by_skill[0] == 1);
  CHECK(metrics.overpractice_by_skill[1] == 0);
  CHECK(metrics.overpractice_total == 1);
}

TEST_CASE("per-skill overpractice sums to the total") {
  SessionRecord record = empty_record(2);
  record.events.push_back(attempted(0, true, 1));
  record.events.push_back(attempted(1, true, 2));
  record.events.push_back(attempted(1, false, 3));
  record.events.push_back(attempted(1, true, 4));
  const auto metrics = compute_student_metrics(record, two_skills());
  CHECK(metrics.overpractice_by_skill.sum() == metrics.overpractice_total);
  CHECK(metrics.overpractice_total == 3);
}

TEST_CASE("steps_to_mastery is the attempted count when the session ended at mastery") {
  SessionRecord record = empty_record(2);
  record.events.push_back(attempted(0, false, 1));
  record.events.push_back(attempted(1, false, 2));
  record.final_bkt.p_mastery = Vector::Constant(2, 0.99);
  record.terminated_by = Termination::Mastery;
  const auto metrics = compute_student_metrics(record, two_skills());
  CHECK(metrics.mastered_all);
  CHECK(metrics.underpractice == 0);
  REQUIRE(metrics.steps_to_mastery.has_value());
  CHECK(*metrics.steps_to_mastery == 2);
}

TEST_CASE("underpractice respects per-skill thresholds") {
  SessionRecord record = empty_record(2);
  record.final_bkt.p_mastery << 0.90, 0.96;
  record.mastery_thresholds << 0.85, 0.95;
  const auto metrics = compute_student_metrics(record, two_skills());
  CHECK(metrics.underpractice == 0);
  record.mastery_thresholds << 0.95, 0.95;
  CHECK(compute_student_metrics(record, two_skills()).underpractice == 1);
}

TEST_CASE("summarize of a single student flags the undefined sd") {
  const std::vector<StudentMetrics> one{with_overpractice(4)};
  const auto summary = summarize(one, SelectorKind::Random, false);
  CHECK(summary.n_students == 1);
  CHECK(summary.sd_overpractice == 0.0);
  CHECK_FALSE(summary.sd_well_defined);
}

TEST_CASE("summarize computes mean and n-1 standard deviation") {
  const std::vector<StudentMetrics> two{with_overpractice(2), with_overpractice(4)};
  const auto summary = summarize(two, SelectorKind::MasteryHard, true);
  CHECK(summary.mean_overpractice == doctest::Approx(3.0));
  CHECK(summary.sd_overpractice == doctest::Approx(std::sqrt(2.0)));
  CHECK(summary.sd_well_defined);
  CHECK(summary.per_skill_mean_overpractice[0] == doctest::Approx(3.0));
  CHECK(summary.per_skill_mean_overpractice[1] == doctest::Approx(0.0));
}

TEST_CASE("summarize rejects an empty list") {
  CHECK_THROWS_AS((void)summarize({}, SelectorKind::Random, false), std::invalid_argument);
}

TEST_CASE("reduction report arithmetic") {
  std::vector<StudentMetrics> without{with_overpractice(10), with_overpractice(10)};
  std::vector<StudentMetrics> with{with_overpractice(6), with_overpractice(6)};
  // force the stated means exactly
  auto s_without = summarize(without, SelectorKind::MasteryHard, false);
  auto s_with = summarize(with, SelectorKind::MasteryHard, true);
  s_without.mean_overpractice = 10.0;
  s_with.mean_overpractice = 6.43;

  const auto report = reduction_report(s_with, s_without);
  CHECK(report.applicable);
  CHECK(report.percent_reduction == doctest::Approx(35.7).epsilon(1e-9));

  SUBCASE("equal means give zero reduction") {
    s_with.mean_overpractice = 10.0;
    CHECK(reduction_report(s_with, s_without).percent_reduction == doctest::Approx(0.0));
  }

  SUBCASE("zero baseline is marked not applicable") {
    s_without.mean_overpractice = 0.0;
    const auto na = reduction_report(s_with, s_without);
    CHECK_FALSE(na.applicable);
    CHECK(std::isnan(na.percent_reduction));
  }

  SUBCASE("mismatched conditions are rejected") {
    auto wrong = s_without;
    wrong.selector = SelectorKind::Random;
    CHECK_THROWS_AS((void)reduction_report(s_with, wrong), std::invalid_argument);
    auto same_ff = s_without;
    same_ff.fast_forward = true;
    CHECK_THROWS_AS((void)reduction_report(s_with, same_ff), std::invalid_argument);
  }
}

TEST_CASE("effect size uses the no-ff condition's standard deviation") {
  std::vector<StudentMetrics> without{with_overpractice(8), with_overpractice(12)};
  std::vector<StudentMetrics> with{with_overpractice(5), with_overpractice(5)};
  const auto s_without = summarize(without, SelectorKind::Random, false);
  const auto s_with = summarize(with, SelectorKind::Random, true);
  const auto report = reduction_report(s_with, s_without);
  // (10 - 5) / sd({8,12}) = 5 / (2 sqrt 2)
  CHECK(report.effect_size_sd == doctest::Approx(5.0 / (2.0 * std::sqrt(2.0))));
}
