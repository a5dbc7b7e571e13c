#include "masterysim/types.hpp"

#include <cmath>

namespace masterysim {

SkillModel::SkillModel(std::vector<std::string> names) {
  if (names.empty()) {
    throw SchemaError("skill model must contain at least one skill");
  }
  skills_.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) {
      throw SchemaError("skill name at index " + std::to_string(i) + " is empty");
    }
    if (by_name_.count(names[i]) != 0) {
      throw SchemaError("duplicate skill name '" + names[i] + "'");
    }
    by_name_.emplace(names[i], static_cast<int>(i));
    skills_.push_back(SkillId{static_cast<int>(i), std::move(names[i])});
  }
}

std::optional<int> SkillModel::index_of(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) {
    return std::nullopt;
  }
  return it->second;
}

bool SkillModel::operator==(const SkillModel& other) const {
  if (skills_.size() != other.skills_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < skills_.size(); ++i) {
    if (skills_[i].name != other.skills_[i].name) {
      return false;
    }
  }
  return true;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

} // namespace masterysim
