#include "masterysim/pool.hpp"

#include <json.hpp>

#include <fstream>

namespace masterysim {
namespace {

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open file: " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> skill_names_from(const nlohmann::json& doc,
                                          const std::filesystem::path& path) {
  if (!doc.is_object() || !doc.contains("skills") || !doc["skills"].is_array()) {
    throw SchemaError(path.string() + ": expected a top-level object with a 'skills' array");
  }
  std::vector<std::string> names;
  for (const auto& entry : doc["skills"]) {
    if (!entry.is_string()) {
      throw SchemaError(path.string() + ": 'skills' entries must be strings");
    }
    names.push_back(entry.get<std::string>());
  }
  return names;
}

} // namespace

ProblemPool::ProblemPool(std::vector<Problem> problems)
    : problems_(std::move(problems)),
      available_(problems_.size(), 1),
      available_count_(static_cast<int>(problems_.size())) {
  for (int i = 0; i < size(); ++i) {
    by_id_.emplace(problems_[static_cast<std::size_t>(i)].id, i);
  }
}

std::optional<int> ProblemPool::index_of(std::string_view problem_id) const {
  auto it = by_id_.find(std::string(problem_id));
  if (it == by_id_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void ProblemPool::mark_consumed(std::string_view problem_id) {
  const auto index = index_of(problem_id);
  if (!index.has_value()) {
    throw std::logic_error("mark_consumed: unknown problem id '" + std::string(problem_id) + "'");
  }
  auto& flag = available_[static_cast<std::size_t>(*index)];
  if (flag == 0) {
    throw std::logic_error("mark_consumed: problem '" + std::string(problem_id) +
                           "' is already consumed");
  }
  flag = 0;
  --available_count_;
  ++total_consumed_;
}

void ProblemPool::replenish() {
  if (!exhausted()) {
    throw std::logic_error("replenish called on a non-exhausted pool");
  }
  std::fill(available_.begin(), available_.end(), std::uint8_t{1});
  available_count_ = size();
  ++replenish_count_;
}

SkillModel load_skill_model(const std::filesystem::path& path) {
  const auto doc = parse_json_file(path);
  return SkillModel(skill_names_from(doc, path));
}

ProblemPool load_pool(const std::filesystem::path& path, const SkillModel& skill_model) {
  const auto doc = parse_json_file(path);

  const auto file_skills = skill_names_from(doc, path);
  if (static_cast<int>(file_skills.size()) != skill_model.size()) {
    throw SchemaError(path.string() + ": skill list does not match the given skill model");
  }
  for (std::size_t i = 0; i < file_skills.size(); ++i) {
    if (file_skills[i] != skill_model.name(static_cast<int>(i))) {
      throw SchemaError(path.string() + ": skill list does not match the given skill model (at '" +
                        file_skills[i] + "')");
    }
  }

  if (!doc.contains("problems") || !doc["problems"].is_array()) {
    throw SchemaError(path.string() + ": expected a 'problems' array");
  }

  std::vector<Problem> problems;
  std::unordered_map<std::string, bool> seen_ids;
  int order = 0;
  for (const auto& entry : doc["problems"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
        !entry.contains("steps") || !entry["steps"].is_array()) {
      throw SchemaError(path.string() + ": each problem must be an object {id, steps}");
    }
    Problem problem;
    problem.id = entry["id"].get<std::string>();
    problem.pool_order = order;
    if (seen_ids.count(problem.id) != 0) {
      throw SchemaError(path.string() + ": duplicate problem id '" + problem.id + "'");
    }
    seen_ids.emplace(problem.id, true);
    if (entry["steps"].empty()) {
      throw SchemaError(path.string() + ": problem '" + problem.id + "' has an empty step list");
    }
    int position = 0;
    for (const auto& step_name : entry["steps"]) {
      if (!step_name.is_string()) {
        throw SchemaError(path.string() + ": problem '" + problem.id +
                          "' has a non-string step entry");
      }
      const auto skill = skill_model.index_of(step_name.get<std::string>());
      if (!skill.has_value()) {
        throw SchemaError(path.string() + ": problem '" + problem.id + "' step " +
                          std::to_string(position) + " names unknown skill '" +
                          step_name.get<std::string>() + "'");
      }
      problem.steps.push_back(Step{*skill, position});
      ++position;
    }
    problems.push_back(std::move(problem));
    ++order;
  }
  if (problems.empty()) {
    throw SchemaError(path.string() + ": pool contains no problems");
  }
  return ProblemPool(std::move(problems));
}

} // namespace masterysim
