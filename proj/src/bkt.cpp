#include "masterysim/bkt.hpp"

namespace masterysim {
namespace {

void append_range_error(std::vector<std::string>& errors, const char* name, double value,
                        double lo, double hi, bool lo_open, bool hi_open) {
  const bool below = lo_open ? value <= lo : value < lo;
  const bool above = hi_open ? value >= hi : value > hi;
  if (below || above) {
    errors.push_back(std::string("bkt.") + name + " = " + std::to_string(value) +
                     " is outside " + (lo_open ? "(" : "[") + std::to_string(lo) + ", " +
                     std::to_string(hi) + (hi_open ? ")" : "]"));
  }
}

} // namespace

std::vector<std::string> bkt_params_errors(const BktParams& params) {
  std::vector<std::string> errors;
  append_range_error(errors, "p_init", params.p_init, 0.0, 1.0, false, false);
  append_range_error(errors, "p_learn", params.p_learn, 0.0, 1.0, false, false);
  append_range_error(errors, "p_guess", params.p_guess, 0.0, 1.0, false, true);
  append_range_error(errors, "p_slip", params.p_slip, 0.0, 1.0, false, true);
  append_range_error(errors, "mastery_threshold", params.mastery_threshold, 0.0, 1.0, true, false);
  if (params.p_guess + params.p_slip >= 1.0) {
    errors.push_back("bkt.p_guess + bkt.p_slip must be < 1 (got " +
                     std::to_string(params.p_guess + params.p_slip) + ")");
  }
  return errors;
}

BktParamTable::BktParamTable(const BktParams& global, int n_skills)
    : per_skill_(static_cast<std::size_t>(n_skills), global) {}

void BktParamTable::set_override(int skill, const BktParams& params) {
  per_skill_.at(static_cast<std::size_t>(skill)) = params;
}

BktState make_bkt_state(const BktParamTable& params) {
  BktState state;
  state.p_mastery.resize(params.size());
  for (int i = 0; i < params.size(); ++i) {
    state.p_mastery[i] = params.for_skill(i).p_init;
  }
  return state;
}

BktState observe(const BktState& state, int skill, bool correct, const BktParams& params) {
  const double prior = state.p_mastery[skill];
  double conditional;
  if (correct) {
    const double evidence = prior * (1.0 - params.p_slip) + (1.0 - prior) * params.p_guess;
    conditional = prior * (1.0 - params.p_slip) / evidence;
  } else {
    const double evidence = prior * params.p_slip + (1.0 - prior) * (1.0 - params.p_guess);
    conditional = prior * params.p_slip / evidence;
  }
  BktState next = state;
  next.p_mastery[skill] = conditional + (1.0 - conditional) * params.p_learn;
  return next;
}

bool is_mastered(const BktState& state, int skill, const BktParams& params) {
  return state.p_mastery[skill] >= params.mastery_threshold;
}

double predicted_error(const BktState& state, int skill, const BktParams& params) {
  const double p = state.p_mastery[skill];
  return p * params.p_slip + (1.0 - p) * (1.0 - params.p_guess);
}

bool all_mastered(const BktState& state, const BktParamTable& params) {
  for (int i = 0; i < params.size(); ++i) {
    if (!is_mastered(state, i, params.for_skill(i))) {
      return false;
    }
  }
  return true;
}

} // namespace masterysim
