#include "masterysim/afm.hpp"

#include <json.hpp>

#include <fstream>

namespace masterysim {

std::vector<std::string> afm_params_errors(const AfmParams& params) {
  std::vector<std::string> errors;
  if (params.beta.size() != params.gamma.size()) {
    errors.push_back("afm: beta and gamma must have the same number of skills");
  }
  for (Eigen::Index i = 0; i < params.gamma.size(); ++i) {
    if (params.gamma[i] < 0.0) {
      errors.push_back("afm: gamma[" + std::to_string(i) + "] = " +
                       std::to_string(params.gamma[i]) + " is negative");
    }
  }
  if (!(params.theta_sd > 0.0)) {
    errors.push_back("afm: theta_sd must be > 0 (got " + std::to_string(params.theta_sd) + ")");
  }
  return errors;
}

StudentState make_student_state(double theta, int n_skills) {
  StudentState student;
  student.theta = theta;
  student.opportunities = IntVector::Zero(n_skills);
  return student;
}

double p_correct(const StudentState& student, int skill, const AfmParams& params) {
  const double z = student.theta + params.beta[skill] +
                   params.gamma[skill] * static_cast<double>(student.opportunities[skill]);
  return sigmoid(z);
}

bool sample_response(const StudentState& student, int skill, const AfmParams& params,
                     RandomStream& rng) {
  return rng.bernoulli(p_correct(student, skill, params));
}

StudentState record_opportunity(const StudentState& student, int skill) {
  StudentState next = student;
  next.opportunities[skill] += 1;
  return next;
}

StudentState draw_student(const AfmParams& params, int n_skills, RandomStream& rng) {
  return make_student_state(rng.normal(params.theta_mean, params.theta_sd), n_skills);
}

AfmParams load_afm_params(const std::filesystem::path& path, const SkillModel& skill_model) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open file: " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw SchemaError(path.string() + ": expected a top-level object");
  }
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "theta_mean" && key != "theta_sd" && key != "skills" && key != "fit") {
      throw SchemaError(path.string() + ": unknown key '" + key + "'");
    }
  }
  if (!doc.contains("theta_mean") || !doc["theta_mean"].is_number() ||
      !doc.contains("theta_sd") || !doc["theta_sd"].is_number()) {
    throw SchemaError(path.string() + ": theta_mean and theta_sd are required numbers");
  }
  if (!doc.contains("skills") || !doc["skills"].is_object()) {
    throw SchemaError(path.string() + ": expected a 'skills' object keyed by skill name");
  }

  AfmParams params;
  params.theta_mean = doc["theta_mean"].get<double>();
  params.theta_sd = doc["theta_sd"].get<double>();
  params.beta = Vector::Zero(skill_model.size());
  params.gamma = Vector::Zero(skill_model.size());

  const auto& skills = doc["skills"];
  for (const auto& [name, entry] : skills.items()) {
    const auto index = skill_model.index_of(name);
    if (!index.has_value()) {
      throw SchemaError(path.string() + ": skill '" + name + "' is not in the skill model");
    }
    if (!entry.is_object() || !entry.contains("beta") || !entry["beta"].is_number() ||
        !entry.contains("gamma") || !entry["gamma"].is_number()) {
      throw SchemaError(path.string() + ": skill '" + name + "' must be {beta, gamma}");
    }
    params.beta[*index] = entry["beta"].get<double>();
    params.gamma[*index] = entry["gamma"].get<double>();
  }
  for (int i = 0; i < skill_model.size(); ++i) {
    if (!skills.contains(skill_model.name(i))) {
      throw SchemaError(path.string() + ": missing parameters for skill '" + skill_model.name(i) +
                        "'");
    }
  }

  const auto errors = afm_params_errors(params);
  if (!errors.empty()) {
    std::string message = path.string() + ":";
    for (const auto& e : errors) {
      message += " " + e + ";";
    }
    throw SchemaError(message);
  }
  return params;
}

void save_afm_params(const std::filesystem::path& path, const AfmParams& params,
                     const SkillModel& skill_model, const std::string& fit_info_json) {
  nlohmann::json doc;
  doc["theta_mean"] = params.theta_mean;
  doc["theta_sd"] = params.theta_sd;
  nlohmann::json skills = nlohmann::json::object();
  for (int i = 0; i < skill_model.size(); ++i) {
    skills[skill_model.name(i)] = {{"beta", params.beta[i]}, {"gamma", params.gamma[i]}};
  }
  doc["skills"] = std::move(skills);
  if (!fit_info_json.empty()) {
    doc["fit"] = nlohmann::json::parse(fit_info_json);
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
  out << doc.dump(2) << "\n";
}

} // namespace masterysim
