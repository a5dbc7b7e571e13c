#pragma once

#include "masterysim/types.hpp"

namespace masterysim {

// Two-state knowledge-tracing parameters for one skill.
struct BktParams {
  double p_init = 0.25;
  double p_learn = 0.2;
  double p_guess = 0.2;
  double p_slip = 0.1;
  double mastery_threshold = 0.95;
};

// Field-range problems, empty when the parameters are valid.
std::vector<std::string> bkt_params_errors(const BktParams& params);

// Per-skill parameter table: a global parameter set, optionally overridden
// for individual skills.
class BktParamTable {
public:
  BktParamTable() = default;
  BktParamTable(const BktParams& global, int n_skills);

  void set_override(int skill, const BktParams& params);
  const BktParams& for_skill(int skill) const {
    return per_skill_.at(static_cast<std::size_t>(skill));
  }
  int size() const { return static_cast<int>(per_skill_.size()); }

private:
  std::vector<BktParams> per_skill_;
};

// Per-skill posterior P(learned).
struct BktState {
  Vector p_mastery;
};

BktState make_bkt_state(const BktParamTable& params);

// Bayes update for one observed response on one skill, followed by the
// learning transition. Other skills are untouched.
BktState observe(const BktState& state, int skill, bool correct, const BktParams& params);

bool is_mastered(const BktState& state, int skill, const BktParams& params);

// P(incorrect response) on the skill given the current posterior.
double predicted_error(const BktState& state, int skill, const BktParams& params);

bool all_mastered(const BktState& state, const BktParamTable& params);

} // namespace masterysim
