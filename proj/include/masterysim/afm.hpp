#pragma once

#include "masterysim/rng.hpp"
#include "masterysim/types.hpp"

#include <filesystem>

namespace masterysim {

// Logistic response model: P(correct) = sigmoid(theta + beta_k + gamma_k * T_k).
struct AfmParams {
  Vector beta;       // per-skill intercept, log-odds
  Vector gamma;      // per-skill learning rate, log-odds per opportunity
  double theta_mean = 0.0;
  double theta_sd = 1.0;
};

std::vector<std::string> afm_params_errors(const AfmParams& params);

struct StudentState {
  double theta = 0.0;         // proficiency draw, log-odds
  IntVector opportunities;    // per-skill prior opportunity counts
};

StudentState make_student_state(double theta, int n_skills);

double p_correct(const StudentState& student, int skill, const AfmParams& params);

// Bernoulli draw at p_correct; consumes exactly one stream value.
bool sample_response(const StudentState& student, int skill, const AfmParams& params,
                     RandomStream& rng);

StudentState record_opportunity(const StudentState& student, int skill);

// theta ~ Normal(theta_mean, theta_sd), all opportunity counts zero.
StudentState draw_student(const AfmParams& params, int n_skills, RandomStream& rng);

// AFM parameter file: {theta_mean, theta_sd, skills: {name: {beta, gamma}}}.
// The skill set must match the model exactly.
AfmParams load_afm_params(const std::filesystem::path& path, const SkillModel& skill_model);

void save_afm_params(const std::filesystem::path& path, const AfmParams& params,
                     const SkillModel& skill_model, const std::string& fit_info_json = {});

} // namespace masterysim
