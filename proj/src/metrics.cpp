#include "masterysim/metrics.hpp"

#include <cmath>
#include <limits>

namespace masterysim {
namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

template <typename Get>
MeanSd mean_sd(const std::vector<StudentMetrics>& metrics, Get get) {
  MeanSd out;
  const auto n = static_cast<double>(metrics.size());
  double sum = 0.0;
  for (const auto& m : metrics) {
    sum += static_cast<double>(get(m));
  }
  out.mean = sum / n;
  if (metrics.size() < 2) {
    return out;
  }
  double sq = 0.0;
  for (const auto& m : metrics) {
    const double d = static_cast<double>(get(m)) - out.mean;
    sq += d * d;
  }
  out.sd = std::sqrt(sq / (n - 1.0));
  return out;
}

} // namespace

StudentMetrics compute_student_metrics(const SessionRecord& record,
                                       const SkillModel& skill_model) {
  StudentMetrics metrics;
  metrics.overpractice_by_skill = IntVector::Zero(skill_model.size());
  for (const StepEvent& event : record.events) {
    if (event.fast_forwarded) {
      continue;
    }
    ++metrics.attempted_steps;
    if (event.was_mastered_before) {
      ++metrics.overpractice_by_skill[event.skill];
      ++metrics.overpractice_total;
    }
  }
  for (int i = 0; i < skill_model.size(); ++i) {
    if (record.final_bkt.p_mastery[i] < record.mastery_thresholds[i]) {
      ++metrics.underpractice;
    }
  }
  metrics.mastered_all = metrics.underpractice == 0;
  if (record.terminated_by == Termination::Mastery) {
    metrics.steps_to_mastery = metrics.attempted_steps;
  }
  return metrics;
}

ConditionSummary summarize(const std::vector<StudentMetrics>& metrics, SelectorKind selector,
                           bool fast_forward) {
  if (metrics.empty()) {
    throw std::invalid_argument("summarize: empty metrics list");
  }
  ConditionSummary summary;
  summary.selector = selector;
  summary.fast_forward = fast_forward;
  summary.n_students = static_cast<int>(metrics.size());
  summary.sd_well_defined = metrics.size() >= 2;

  const MeanSd over = mean_sd(metrics, [](const StudentMetrics& m) { return m.overpractice_total; });
  summary.mean_overpractice = over.mean;
  summary.sd_overpractice = over.sd;
  const MeanSd under = mean_sd(metrics, [](const StudentMetrics& m) { return m.underpractice; });
  summary.mean_underpractice = under.mean;
  summary.sd_underpractice = under.sd;

  const int n_skills = static_cast<int>(metrics.front().overpractice_by_skill.size());
  summary.per_skill_mean_overpractice = Vector::Zero(n_skills);
  for (const auto& m : metrics) {
    for (int i = 0; i < n_skills; ++i) {
      summary.per_skill_mean_overpractice[i] += static_cast<double>(m.overpractice_by_skill[i]);
    }
  }
  summary.per_skill_mean_overpractice /= static_cast<double>(metrics.size());

  double steps_sum = 0.0;
  for (const auto& m : metrics) {
    if (m.steps_to_mastery.has_value()) {
      ++summary.n_mastered;
      steps_sum += static_cast<double>(*m.steps_to_mastery);
    }
  }
  summary.mean_steps_to_mastery =
      summary.n_mastered > 0 ? steps_sum / static_cast<double>(summary.n_mastered)
                             : std::numeric_limits<double>::quiet_NaN();
  return summary;
}

ReductionReport reduction_report(const ConditionSummary& with_ff,
                                 const ConditionSummary& without_ff) {
  if (with_ff.selector != without_ff.selector) {
    throw std::invalid_argument("reduction_report: conditions use different selectors");
  }
  if (with_ff.fast_forward == without_ff.fast_forward) {
    throw std::invalid_argument("reduction_report: conditions must differ in fast_forward");
  }
  ReductionReport report;
  report.selector = with_ff.selector;
  report.mean_without = without_ff.mean_overpractice;
  report.mean_with = with_ff.mean_overpractice;
  report.applicable = without_ff.mean_overpractice != 0.0;
  if (report.applicable) {
    report.percent_reduction =
        (report.mean_without - report.mean_with) / report.mean_without * 100.0;
  } else {
    report.percent_reduction = std::numeric_limits<double>::quiet_NaN();
  }
  report.effect_size_sd =
      without_ff.sd_overpractice > 0.0
          ? (report.mean_without - report.mean_with) / without_ff.sd_overpractice
          : std::numeric_limits<double>::quiet_NaN();
  return report;
}

} // namespace masterysim
