#include "masterysim/session.hpp"

namespace masterysim {
namespace {

// Purpose tags for the per-student substreams. Keeping selector and response
// draws on separate streams keeps paired runs aligned up to the first point
// their event sequences diverge.
constexpr std::uint64_t kPurposeTheta = 0;
constexpr std::uint64_t kPurposeSelector = 1;
constexpr std::uint64_t kPurposeResponse = 2;

constexpr int kStepCap = 1'000'000;

RandomStream substream(const SessionConfig& config, std::uint64_t purpose) {
  return RandomStream(RandomStream::derive_key(
      {config.master_seed, static_cast<std::uint64_t>(config.student_index), purpose}));
}

} // namespace

bool check_fast_forward(const Problem& problem, int next_position, const BktState& bkt,
                        const BktParamTable& params) {
  const int n = static_cast<int>(problem.steps.size());
  if (next_position >= n) {
    throw std::logic_error("check_fast_forward: next_position past the end of the problem");
  }
  for (int pos = next_position; pos < n; ++pos) {
    const int skill = problem.steps[static_cast<std::size_t>(pos)].skill;
    if (!is_mastered(bkt, skill, params.for_skill(skill))) {
      return false;
    }
  }
  return true;
}

SessionRecord run_session(const SessionConfig& config, ProblemPool pool,
                          const BktParamTable& bkt_params, const AfmParams& afm_params,
                          const std::optional<Vector>& initial_mastery) {
  const int n_skills = bkt_params.size();
  if (afm_params.beta.size() != n_skills) {
    throw std::invalid_argument("run_session: AFM parameters do not match the skill model");
  }
  if (config.regime.kind == RegimeKind::StepBudget && config.regime.budget < 1) {
    throw std::invalid_argument("run_session: step budget must be >= 1");
  }
  for (const Problem& problem : pool.problems()) {
    for (const Step& step : problem.steps) {
      if (step.skill < 0 || step.skill >= n_skills) {
        throw std::invalid_argument("run_session: pool references a skill outside the model");
      }
    }
  }

  RandomStream theta_rng = substream(config, kPurposeTheta);
  RandomStream selector_rng = substream(config, kPurposeSelector);
  RandomStream response_rng = substream(config, kPurposeResponse);

  SessionRecord record;
  record.mastery_thresholds.resize(n_skills);
  for (int i = 0; i < n_skills; ++i) {
    record.mastery_thresholds[i] = bkt_params.for_skill(i).mastery_threshold;
  }

  StudentState student = draw_student(afm_params, n_skills, theta_rng);
  BktState bkt = make_bkt_state(bkt_params);
  if (initial_mastery.has_value()) {
    if (initial_mastery->size() != n_skills) {
      throw std::invalid_argument("run_session: initial_mastery size mismatch");
    }
    bkt.p_mastery = *initial_mastery;
  }

  const bool budgeted = config.regime.kind == RegimeKind::StepBudget;
  int attempted = 0;
  bool done = false;

  if (all_mastered(bkt, bkt_params)) {
    record.terminated_by = Termination::Mastery;
    done = true;
  }

  while (!done) {
    if (pool.exhausted()) {
      if (budgeted) {
        record.terminated_by = Termination::SelectorNone;
        break;
      }
      pool.replenish();
    }

    auto chosen = select(config.selector, pool, bkt, bkt_params, selector_rng);
    if (!chosen.has_value()) {
      if (budgeted) {
        record.terminated_by = Termination::SelectorNone;
        break;
      }
      // Run-to-mastery: every available problem is fully mastered, so the
      // rest of this pass cannot help. Abandon it and reset the pool. A full
      // pool can only yield none if it fails to cover some unmastered skill.
      if (pool.available_count() == pool.size()) {
        record.terminated_by = Termination::SelectorNone;
        break;
      }
      for (int i = 0; i < pool.size(); ++i) {
        if (pool.is_available(i)) {
          pool.mark_consumed(pool.problem(i).id);
        }
      }
      pool.replenish();
      continue;
    }

    pool.mark_consumed(*chosen);
    const Problem& problem = pool.problem(*pool.index_of(*chosen));
    ++record.problems_started;

    const int n_steps = static_cast<int>(problem.steps.size());
    for (int pos = 0; pos < n_steps; ++pos) {
      if (config.fast_forward && check_fast_forward(problem, pos, bkt, bkt_params)) {
        for (int rest = pos; rest < n_steps; ++rest) {
          const int skill = problem.steps[static_cast<std::size_t>(rest)].skill;
          StepEvent event;
          event.problem_id = problem.id;
          event.step_position = rest;
          event.skill = skill;
          event.was_mastered_before = true;
          event.fast_forwarded = true;
          event.step_counter = attempted;
          record.events.push_back(std::move(event));
        }
        ++record.problems_fast_forwarded;
        break;
      }

      const int skill = problem.steps[static_cast<std::size_t>(pos)].skill;
      const BktParams& skill_params = bkt_params.for_skill(skill);

      StepEvent event;
      event.problem_id = problem.id;
      event.step_position = pos;
      event.skill = skill;
      event.was_mastered_before = is_mastered(bkt, skill, skill_params);
      const bool correct = sample_response(student, skill, afm_params, response_rng);
      event.correct = correct;
      event.fast_forwarded = false;

      student = record_opportunity(student, skill);
      bkt = observe(bkt, skill, correct, skill_params);
      ++attempted;
      event.step_counter = attempted;
      record.events.push_back(std::move(event));

      if (attempted >= kStepCap) {
        throw std::runtime_error(
            "run_session: step cap of 1e6 attempted steps hit (seed " +
            std::to_string(config.master_seed) + ", student " +
            std::to_string(config.student_index) + ", selector " +
            selector_name(config.selector) + "); the configuration does not reach mastery");
      }

      if (all_mastered(bkt, bkt_params)) {
        record.terminated_by = Termination::Mastery;
        done = true;
        break;  // abandon the rest of the problem
      }
      if (budgeted && attempted >= config.regime.budget) {
        record.terminated_by = Termination::Budget;
        done = true;
        break;
      }
    }
  }

  record.final_bkt = std::move(bkt);
  record.final_student = std::move(student);
  record.replenishes = pool.replenish_count();
  return record;
}

} // namespace masterysim
